#include "thresim/market.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "thresim/kernels.hpp"
#include "thresim/rng.hpp"

namespace thresim {

void MarketParams::validate() const {
  if (n_agents < 1) {
    throw std::invalid_argument("n_agents must be >= 1 (got " +
                                std::to_string(n_agents) + ")");
  }
  if (!(noise_std > 0.0)) {
    throw std::invalid_argument("noise_std must be > 0");
  }
  if (!(market_depth > 0.0)) {
    throw std::invalid_argument("market_depth must be > 0");
  }
  if (!(update_prob >= 0.0 && update_prob <= 1.0)) {
    throw std::invalid_argument("update_prob must be in [0, 1]");
  }
  if (!(choice_intensity >= 0.0)) {  // rejects NaN and negatives; +inf passes
    throw std::invalid_argument("choice_intensity must be >= 0 or inf");
  }
  if (n_assets != 1 && n_assets != 2) {
    throw std::invalid_argument("n_assets must be 1 or 2 (got " +
                                std::to_string(n_assets) + ")");
  }
  if (horizon < 0) {
    throw std::invalid_argument("horizon must be >= 0");
  }
  if (warmup < 0) {
    throw std::invalid_argument("warmup must be >= 0");
  }
}

void InitPolicy::validate() const {
  switch (kind) {
    case Kind::kZero:
      break;
    case Kind::kConstant:
      if (!(constant >= 0.0)) {
        throw std::invalid_argument("init constant must be >= 0");
      }
      break;
    case Kind::kUniform:
      if (!(lo >= 0.0)) {
        throw std::invalid_argument("init uniform lower bound must be >= 0");
      }
      if (hi >= 0.0 && hi < lo) {
        throw std::invalid_argument("init uniform upper bound must be >= lower");
      }
      break;
  }
}

std::pair<double, double> logit_weights(double fitness, double beta) {
  if (std::isinf(beta)) {
    if (fitness > 0.0) return {0.0, 1.0};
    if (fitness < 0.0) return {1.0, 0.0};
    return {0.5, 0.5};
  }
  const double x = beta * fitness;
  double w1;
  if (x > 700.0) {
    w1 = 0.0;
  } else if (x < -700.0) {
    w1 = 1.0;
  } else {
    w1 = 1.0 / (1.0 + std::exp(x));
  }
  return {w1, 1.0 - w1};
}

Market::Market(const MarketParams& params, const InitPolicy& init, Backend backend)
    : params_(params), backend_(resolve_backend(backend, params.n_agents)) {
  params_.validate();
  init.validate();

  const auto n = static_cast<std::size_t>(params_.n_agents);
  thresholds_.resize(static_cast<std::size_t>(params_.n_assets) * n);
  weights_.assign(static_cast<std::size_t>(params_.n_assets) * n,
                  params_.n_assets == 1 ? 1.0 : 0.5);
  block_partials_.resize(kernels::num_blocks(params_.n_agents));

  const double hi = init.hi < 0.0 ? params_.noise_std : init.hi;
  for (int a = 0; a < params_.n_assets; ++a) {
    const std::uint32_t draw_asset = init.mirror_assets ? 0 : static_cast<std::uint32_t>(a);
    double* row = thresholds_.data() + static_cast<std::size_t>(a) * n;
    for (int i = 0; i < params_.n_agents; ++i) {
      switch (init.kind) {
        case InitPolicy::Kind::kZero:
          row[i] = 0.0;
          break;
        case InitPolicy::Kind::kConstant:
          row[i] = init.constant;
          break;
        case InitPolicy::Kind::kUniform: {
          const double u = rng::uniform01(params_.seed, rng::Stream::kInit,
                                          static_cast<std::uint32_t>(i), 0, draw_asset);
          row[i] = init.lo + u * (hi - init.lo);
          break;
        }
      }
    }
  }
}

double Market::signal_at(std::int64_t t) const {
  return params_.noise_std * rng::standard_normal(params_.seed, static_cast<std::uint64_t>(t));
}

void Market::set_thresholds(int asset, std::span<const double> values) {
  if (static_cast<int>(values.size()) != params_.n_agents) {
    throw std::invalid_argument("set_thresholds: wrong row length");
  }
  double* row = thresholds_.data() + static_cast<std::size_t>(asset) * params_.n_agents;
  for (int i = 0; i < params_.n_agents; ++i) row[i] = values[i];
}

StepRecord Market::step() {
  const MarketParams& p = params_;
  const bool parallel = backend_ == Backend::kOpenMP;

  StepRecord rec;
  rec.signal = signal_at(time_);

  for (int a = 0; a < p.n_assets; ++a) {
    const double sum =
        parallel ? kernels::omp::weighted_order_sum(rec.signal, thresholds(a),
                                                    weights(a), block_partials_)
                 : kernels::serial::weighted_order_sum(rec.signal, thresholds(a),
                                                       weights(a), block_partials_);
    rec.order_flow[a] = sum / p.n_agents;
    rec.returns[a] = price_impact(rec.order_flow[a], p.market_depth);
    log_prices_[a] += rec.returns[a];
  }
  if (p.n_assets == 2) {
    rec.fitness = std::abs(rec.returns[1]) - std::abs(rec.returns[0]);
  }

  kernels::UpdateContext ctx;
  ctx.seed = p.seed;
  ctx.step = time_;
  ctx.n_agents = p.n_agents;
  ctx.n_assets = p.n_assets;
  ctx.update_prob = p.update_prob;
  ctx.coupled = p.coupled_updates;
  ctx.abs_returns = {std::abs(rec.returns[0]), std::abs(rec.returns[1])};
  if (p.n_assets == 2) {
    ctx.refresh_weights = true;
    const auto [w1, w2] = logit_weights(rec.fitness, p.choice_intensity);
    ctx.weight_asset0 = w1;
    ctx.weight_asset1 = w2;
  }

  const kernels::UpdateCounts counts =
      parallel ? kernels::omp::apply_updates(ctx, thresholds_.data(), weights_.data())
               : kernels::serial::apply_updates(ctx, thresholds_.data(), weights_.data());
  rec.threshold_updates = counts.thresholds;
  rec.weight_updates = counts.weights;

  ++time_;
  return rec;
}

ReturnsSeries run(const MarketParams& params, const InitPolicy& init, Backend backend,
                  bool keep_signals) {
  Market market(params, init, backend);
  ReturnsSeries series;
  series.params = params;
  series.length = params.horizon;
  series.returns.resize(static_cast<std::size_t>(params.n_assets) * params.horizon);
  if (keep_signals) series.signals.resize(params.horizon);

  for (std::int64_t t = 0; t < params.warmup; ++t) market.step();
  for (std::int64_t t = 0; t < params.horizon; ++t) {
    const StepRecord rec = market.step();
    for (int a = 0; a < params.n_assets; ++a) {
      series.returns[static_cast<std::size_t>(a) * params.horizon + t] = rec.returns[a];
    }
    if (keep_signals) series.signals[t] = rec.signal;
  }
  return series;
}

}  // namespace thresim
