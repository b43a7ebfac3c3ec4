#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "thresim/market.hpp"
#include "thresim/rng.hpp"
#include "thresim/stats.hpp"

using namespace thresim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MarketParams small_params(int n_assets) {
  MarketParams p;
  p.n_agents = 100;
  p.noise_std = 0.001;
  p.market_depth = 2.0;
  p.update_prob = 0.1;
  p.choice_intensity = 1000.0;
  p.n_assets = n_assets;
  p.horizon = 100;
  p.seed = 777;
  return p;
}

/// First seed in [from, from+1000) whose step-0 signal is positive.
std::uint64_t seed_with_positive_signal(std::uint64_t from) {
  for (std::uint64_t seed = from; seed < from + 1000; ++seed) {
    if (rng::standard_normal(seed, 0) > 0.0) return seed;
  }
  FAIL("no positive first signal found");
  return 0;
}

}  // namespace

TEST_CASE("agent_order follows strict threshold exceedance") {
  CHECK(agent_order(0.002, 0.001) == 1);
  CHECK(agent_order(-0.002, 0.001) == -1);
  CHECK(agent_order(0.001, 0.001) == 0);  // boundary is inactive
  CHECK(agent_order(-0.001, 0.001) == 0);
  CHECK(agent_order(0.0, 0.0) == 0);
}

TEST_CASE("agent_order is monotone in signal and threshold") {
  for (int i = 0; i < 2000; ++i) {
    const double signal = 4.0 * (rng::uniform01(31u, rng::Stream::kScratch, 0, i) - 0.5);
    const double threshold = rng::uniform01(31u, rng::Stream::kScratch, 1, i);
    const double bigger = threshold + rng::uniform01(31u, rng::Stream::kScratch, 2, i);
    // nondecreasing in the signal
    CHECK(agent_order(signal, threshold) <= agent_order(signal + 0.25, threshold));
    // activity nonincreasing in the threshold
    CHECK(std::abs(agent_order(signal, bigger)) <=
          std::abs(agent_order(signal, threshold)));
  }
}

TEST_CASE("price_impact is linear in order flow") {
  CHECK(price_impact(1.0, 2.0) == 0.5);
  CHECK(price_impact(0.0, 5.0) == 0.0);
  CHECK(price_impact(1.0 / 1500.0, 2.0) == doctest::Approx(3.333e-4).epsilon(1e-3));
}

TEST_CASE("logit_weights") {
  SUBCASE("zero fitness is indifferent") {
    const auto [w1, w2] = logit_weights(0.0, 1000.0);
    CHECK(w1 == 0.5);
    CHECK(w2 == 0.5);
  }
  SUBCASE("weight flees the less volatile asset") {
    const auto [w1, w2] = logit_weights(0.01, 1000.0);
    CHECK(w1 == doctest::Approx(4.5397868702434395e-05).epsilon(1e-12));
    CHECK(w2 == doctest::Approx(1.0 - 4.5397868702434395e-05).epsilon(1e-12));
  }
  SUBCASE("beta zero keeps equal weights") {
    const auto [w1, w2] = logit_weights(0.123, 0.0);
    CHECK(w1 == 0.5);
    CHECK(w2 == 0.5);
  }
  SUBCASE("radical choice at infinite beta") {
    CHECK(logit_weights(-0.02, kInf) == std::pair{1.0, 0.0});
    CHECK(logit_weights(0.02, kInf) == std::pair{0.0, 1.0});
    CHECK(logit_weights(0.0, kInf) == std::pair{0.5, 0.5});
  }
  SUBCASE("saturates instead of overflowing") {
    CHECK(logit_weights(1.0, 1e6) == std::pair{0.0, 1.0});
    CHECK(logit_weights(-1.0, 1e6) == std::pair{1.0, 0.0});
  }
}

TEST_CASE("initial state") {
  MarketParams p = small_params(2);
  p.n_agents = 3;

  SUBCASE("two-asset start is symmetric") {
    Market market(p);
    for (int a = 0; a < 2; ++a) {
      for (double w : market.weights(a)) CHECK(w == 0.5);
      CHECK(market.log_price(a) == 0.0);  // p0 = 1
    }
    CHECK(market.time() == 0);
  }
  SUBCASE("single-asset weights are one") {
    p.n_assets = 1;
    Market market(p);
    for (double w : market.weights(0)) CHECK(w == 1.0);
  }
  SUBCASE("uniform thresholds live in [0, D] and reproduce bit-for-bit") {
    p.n_agents = 500;
    Market a(p, InitPolicy::uniform(0.0, p.noise_std));
    Market b(p, InitPolicy::uniform(0.0, p.noise_std));
    for (int asset = 0; asset < 2; ++asset) {
      const auto ta = a.thresholds(asset);
      const auto tb = b.thresholds(asset);
      for (int i = 0; i < p.n_agents; ++i) {
        CHECK(ta[i] == tb[i]);
        CHECK(ta[i] >= 0.0);
        CHECK(ta[i] <= p.noise_std);
      }
    }
    // distinct assets draw distinct rows unless mirrored
    CHECK(std::memcmp(a.thresholds(0).data(), a.thresholds(1).data(),
                      sizeof(double) * p.n_agents) != 0);
    InitPolicy mirrored;
    mirrored.mirror_assets = true;
    Market m(p, mirrored);
    CHECK(std::memcmp(m.thresholds(0).data(), m.thresholds(1).data(),
                      sizeof(double) * p.n_agents) == 0);
  }
  SUBCASE("zero and constant policies") {
    Market z(p, InitPolicy::zero());
    for (double t : z.thresholds(0)) CHECK(t == 0.0);
    Market c(p, InitPolicy::constant_value(0.007));
    for (double t : c.thresholds(1)) CHECK(t == 0.007);
  }
}

TEST_CASE("invalid parameters name the violated bound") {
  auto message_of = [](MarketParams p) {
    try {
      p.validate();
      return std::string{};
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
  };
  MarketParams p = small_params(1);
  p.n_agents = 0;
  CHECK(message_of(p).find("n_agents") != std::string::npos);
  p = small_params(1);
  p.noise_std = 0.0;
  CHECK(message_of(p).find("noise_std") != std::string::npos);
  p = small_params(1);
  p.market_depth = -1.0;
  CHECK(message_of(p).find("market_depth") != std::string::npos);
  p = small_params(1);
  p.update_prob = 1.5;
  CHECK(message_of(p).find("update_prob") != std::string::npos);
  p = small_params(1);
  p.n_assets = 3;
  CHECK(message_of(p).find("n_assets") != std::string::npos);
  p = small_params(2);
  p.choice_intensity = -2.0;
  CHECK(message_of(p).find("choice_intensity") != std::string::npos);
}

TEST_CASE("fully inactive market yields zero flow") {
  MarketParams p = small_params(1);
  p.update_prob = 0.5;
  // |eps| <= 8.6 * D under the Box-Muller tail bound, far below 1.0
  Market market(p, InitPolicy::constant_value(1.0));
  const StepRecord rec = market.step();
  CHECK(rec.order_flow[0] == 0.0);
  CHECK(rec.returns[0] == 0.0);
  // refreshed agents took theta = |r| = 0, the rest kept the constant
  int zeros = 0;
  for (double t : market.thresholds(0)) {
    const bool kept = t == 1.0;
    const bool refreshed = t == 0.0;
    CHECK((kept || refreshed));
    zeros += refreshed ? 1 : 0;
  }
  CHECK(zeros == rec.threshold_updates);
}

TEST_CASE("unanimous buy when every threshold is zero") {
  MarketParams p = small_params(1);
  p.seed = seed_with_positive_signal(100);
  Market market(p, InitPolicy::zero());
  const StepRecord rec = market.step();
  CHECK(rec.order_flow[0] == 1.0);
  CHECK(rec.returns[0] == 1.0 / p.market_depth);
  CHECK(market.log_price(0) == rec.returns[0]);
}

TEST_CASE("returns are bounded by g(1)") {
  for (int assets : {1, 2}) {
    MarketParams p = small_params(assets);
    p.horizon = 400;
    const ReturnsSeries series = run(p, InitPolicy::zero());
    for (int a = 0; a < assets; ++a) {
      for (double r : series.asset(a)) {
        CHECK(std::abs(r) <= 1.0 / p.market_depth);
      }
    }
  }
}

TEST_CASE("single-asset step matches the threshold-CDF identity") {
  MarketParams p = small_params(1);
  p.n_agents = 1500;
  p.update_prob = 0.015;
  p.horizon = 2000;
  Market market(p);
  for (std::int64_t t = 0; t < p.horizon; ++t) {
    const double signal = market.signal_at(market.time());
    std::int64_t active = 0;
    for (double theta : market.thresholds(0)) {
      if (theta < std::abs(signal)) ++active;
    }
    const int sign = signal > 0.0 ? 1 : (signal < 0.0 ? -1 : 0);
    const double expected_flow = static_cast<double>(sign * active) / p.n_agents;
    const StepRecord rec = market.step();
    CHECK(rec.signal == signal);
    CHECK(rec.order_flow[0] == expected_flow);
    CHECK(rec.returns[0] == price_impact(expected_flow, p.market_depth));
  }
}

TEST_CASE("threshold update frequency converges to s") {
  MarketParams p = small_params(1);
  p.n_agents = 1500;
  p.update_prob = 0.015;
  p.horizon = 5000;
  Market market(p);
  std::int64_t updates = 0;
  for (std::int64_t t = 0; t < p.horizon; ++t) updates += market.step().threshold_updates;
  const double total = static_cast<double>(p.n_agents) * p.horizon;
  const double rate = static_cast<double>(updates) / total;
  const double band = 4.0 * std::sqrt(p.update_prob * (1.0 - p.update_prob) / total);
  CHECK(std::abs(rate - p.update_prob) < band);
}

TEST_CASE("two-asset bookkeeping") {
  MarketParams p = small_params(2);
  p.n_agents = 100;
  p.horizon = 500;

  SUBCASE("weights stay closed and bounded after every step") {
    Market market(p);
    for (std::int64_t t = 0; t < p.horizon; ++t) {
      const StepRecord rec = market.step();
      CHECK(rec.fitness == std::abs(rec.returns[1]) - std::abs(rec.returns[0]));
      CHECK(std::abs(rec.order_flow[0]) <= 1.0);
      CHECK(std::abs(rec.order_flow[1]) <= 1.0);
      for (int i = 0; i < p.n_agents; ++i) {
        const double w1 = market.weights(0)[i];
        const double w2 = market.weights(1)[i];
        CHECK(w1 >= 0.0);
        CHECK(w1 <= 1.0);
        CHECK(w2 >= 0.0);
        CHECK(w2 <= 1.0);
        CHECK(std::abs(w1 + w2 - 1.0) <= std::numeric_limits<double>::epsilon());
      }
    }
  }
  SUBCASE("beta = 0 pins every refreshed weight at one half") {
    p.choice_intensity = 0.0;
    p.update_prob = 1.0;  // refresh everyone
    Market market(p);
    market.step();
    for (int a = 0; a < 2; ++a) {
      for (double w : market.weights(a)) CHECK(w == 0.5);
    }
  }
  SUBCASE("weight refresh uses the current fitness but acts next step") {
    p.update_prob = 1.0;
    p.seed = seed_with_positive_signal(300);
    Market market(p, InitPolicy::zero());
    std::vector<double> blocked(p.n_agents, 1.0);
    market.set_thresholds(1, blocked);  // asset 2 inactive at step 0

    const StepRecord first = market.step();
    // the step itself still traded on the symmetric initial weights
    CHECK(first.order_flow[0] == 0.5);
    CHECK(first.order_flow[1] == 0.0);
    CHECK(first.fitness < 0.0);
    CHECK(first.weight_updates == p.n_agents);
    CHECK(first.threshold_updates == p.n_agents);
    // fitness < 0 at beta = 1000 saturates the refreshed weights to asset 1
    for (double w : market.weights(0)) CHECK(w == 1.0);
    for (double w : market.weights(1)) CHECK(w == 0.0);
  }
}

TEST_CASE("beta = 0 run reduces to the single-asset run at twice the depth") {
  MarketParams two = small_params(2);
  two.n_agents = 700;  // not a multiple of the reduction block
  two.market_depth = 3.0;
  two.choice_intensity = 0.0;
  two.update_prob = 0.03;
  two.horizon = 2000;

  MarketParams one = two;
  one.n_assets = 1;
  one.market_depth = 6.0;

  InitPolicy mirrored;
  mirrored.mirror_assets = true;

  const ReturnsSeries pair = run(two, mirrored);
  const ReturnsSeries single = run(one);
  for (std::int64_t t = 0; t < two.horizon; ++t) {
    REQUIRE(pair.at(0, t) == pair.at(1, t));
    REQUIRE(pair.at(0, t) == single.at(0, t));
  }
}

TEST_CASE("decoupled gates break the beta = 0 reduction") {
  MarketParams two = small_params(2);
  two.choice_intensity = 0.0;
  two.coupled_updates = false;
  two.horizon = 500;
  InitPolicy mirrored;
  mirrored.mirror_assets = true;
  const ReturnsSeries pair = run(two, mirrored);
  std::int64_t diverged = 0;
  for (std::int64_t t = 0; t < two.horizon; ++t) {
    if (pair.at(0, t) != pair.at(1, t)) ++diverged;
  }
  CHECK(diverged > 0);
}

TEST_CASE("equal D*lambda runs coincide up to the depth ratio") {
  MarketParams base = small_params(1);
  base.n_agents = 800;
  base.horizon = 2000;

  MarketParams scaled = base;
  scaled.noise_std = base.noise_std / 2.0;
  scaled.market_depth = base.market_depth * 2.0;

  const ReturnsSeries a = run(base, InitPolicy::uniform(0.0, base.noise_std));
  const ReturnsSeries b = run(scaled, InitPolicy::uniform(0.0, scaled.noise_std));
  for (std::int64_t t = 0; t < base.horizon; ++t) {
    REQUIRE(b.at(0, t) == a.at(0, t) / 2.0);
  }
}

TEST_CASE("run is deterministic and respects the horizon") {
  MarketParams p = small_params(2);
  p.horizon = 300;
  const ReturnsSeries a = run(p);
  const ReturnsSeries b = run(p);
  CHECK(a.returns == b.returns);
  CHECK(a.signals == b.signals);

  p.horizon = 0;
  const ReturnsSeries empty = run(p);
  CHECK(empty.length == 0);
  CHECK(empty.returns.empty());
}

TEST_CASE("single-asset kurtosis stays in the stationary band") {
  MarketParams p;
  p.n_agents = 1500;
  p.noise_std = 0.001;
  p.market_depth = 10.0;
  p.update_prob = 0.015;
  p.n_assets = 1;
  p.horizon = 10000;
  p.warmup = 2000;  // drop the initial-distribution transient
  p.seed = 12345;
  const ReturnsSeries series = run(p);
  const SummaryStats stats = summary_stats(series.asset(0));
  CHECK(stats.kurtosis > 3.0);
  CHECK(stats.kurtosis < 6.0);
}
