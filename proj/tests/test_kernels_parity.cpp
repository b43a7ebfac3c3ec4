#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "thresim/kernels.hpp"
#include "thresim/market.hpp"
#include "thresim/rng.hpp"

using namespace thresim;

namespace {

// Agent counts around the reduction block boundary plus a multi-block size.
const int kAgentCounts[] = {3, 1000, 1024, 1025, 1500, 5000};

std::vector<double> random_row(int n, std::uint32_t tag, double lo, double hi) {
  std::vector<double> row(n);
  for (int i = 0; i < n; ++i) {
    row[i] = lo + (hi - lo) * rng::uniform01(99u, rng::Stream::kScratch, tag,
                                             static_cast<std::uint64_t>(i));
  }
  return row;
}

}  // namespace

TEST_CASE("order-flow kernels agree bit-for-bit and match a plain sum") {
  for (int n : kAgentCounts) {
    const auto thresholds = random_row(n, 1, 0.0, 0.002);
    const auto weights = random_row(n, 2, 0.0, 1.0);
    const double signal = 0.0011;

    std::vector<double> partials_a(kernels::num_blocks(n));
    std::vector<double> partials_b(kernels::num_blocks(n));
    const double serial =
        kernels::serial::weighted_order_sum(signal, thresholds, weights, partials_a);
    const double parallel =
        kernels::omp::weighted_order_sum(signal, thresholds, weights, partials_b);
    CHECK(serial == parallel);

    double plain = 0.0;
    for (int i = 0; i < n; ++i) plain += weights[i] * agent_order(signal, thresholds[i]);
    CHECK(serial == doctest::Approx(plain).epsilon(1e-12));
  }
}

TEST_CASE("whole runs are identical across backends") {
  MarketParams base;
  base.noise_std = 0.001;
  base.market_depth = 2.0;
  base.update_prob = 0.05;
  base.horizon = 300;
  base.seed = 4242;

  auto check_config = [](MarketParams p) {
    CAPTURE(p.n_agents);
    CAPTURE(p.n_assets);
    const ReturnsSeries serial = run(p, {}, Backend::kSerial);
    const ReturnsSeries parallel = run(p, {}, Backend::kOpenMP);
    REQUIRE(serial.returns == parallel.returns);
    REQUIRE(serial.signals == parallel.signals);

    Market ms(p, {}, Backend::kSerial);
    Market mp(p, {}, Backend::kOpenMP);
    for (int t = 0; t < 50; ++t) {
      ms.step();
      mp.step();
    }
    for (int a = 0; a < p.n_assets; ++a) {
      for (int i = 0; i < p.n_agents; ++i) {
        REQUIRE(ms.thresholds(a)[i] == mp.thresholds(a)[i]);
        REQUIRE(ms.weights(a)[i] == mp.weights(a)[i]);
      }
    }
  };

  for (int n : kAgentCounts) {
    MarketParams p = base;
    p.n_agents = n;

    p.n_assets = 1;
    check_config(p);

    p.n_assets = 2;
    p.choice_intensity = 1000.0;
    check_config(p);
  }

  MarketParams p = base;
  p.n_agents = 1500;
  p.n_assets = 2;
  p.choice_intensity = std::numeric_limits<double>::infinity();
  check_config(p);

  p.choice_intensity = 1000.0;
  p.coupled_updates = false;
  check_config(p);
}

TEST_CASE("update kernels agree on counts and state") {
  const int n = 2100;
  kernels::UpdateContext ctx;
  ctx.seed = 31415;
  ctx.step = 7;
  ctx.n_agents = n;
  ctx.n_assets = 2;
  ctx.update_prob = 0.3;
  ctx.coupled = true;
  ctx.abs_returns = {0.004, 0.001};
  ctx.refresh_weights = true;
  ctx.weight_asset0 = 0.25;
  ctx.weight_asset1 = 0.75;

  auto thresholds_a = random_row(2 * n, 5, 0.0, 0.01);
  auto weights_a = random_row(2 * n, 6, 0.0, 1.0);
  auto thresholds_b = thresholds_a;
  auto weights_b = weights_a;

  const auto counts_serial =
      kernels::serial::apply_updates(ctx, thresholds_a.data(), weights_a.data());
  const auto counts_parallel =
      kernels::omp::apply_updates(ctx, thresholds_b.data(), weights_b.data());
  CHECK(counts_serial.thresholds == counts_parallel.thresholds);
  CHECK(counts_serial.weights == counts_parallel.weights);
  CHECK(thresholds_a == thresholds_b);
  CHECK(weights_a == weights_b);
  CHECK(counts_serial.thresholds > 0);
  CHECK(counts_serial.weights > 0);
}
