#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "thresim/params.hpp"

namespace thresim {

/// Buy/sell/hold decision for one agent: +1 if the signal strictly exceeds
/// the threshold, -1 if it falls strictly below its negative, else 0.
inline int agent_order(double signal, double threshold) {
  if (signal > threshold) return 1;
  if (signal < -threshold) return -1;
  return 0;
}

/// Linear price impact g(x) = x / depth. Single swap point for the impact
/// function; only the linear form is supported.
inline double price_impact(double order_flow, double depth) {
  return order_flow / depth;
}

/// Logit allocation between two assets given fitness = |r2| - |r1|.
/// Saturates to {0, 1} where exp would overflow; +inf beta is the radical
/// choice of the asset with the higher absolute return (1/2 on a tie).
std::pair<double, double> logit_weights(double fitness, double beta);

/// Everything one step produces.
struct StepRecord {
  double signal = 0.0;
  std::array<double, 2> order_flow{};  // (sum_i w_ai * phi_ai) / n per asset
  std::array<double, 2> returns{};
  double fitness = 0.0;  // |r2| - |r1|; 0 in the single-asset model
  int threshold_updates = 0;
  int weight_updates = 0;
};

/// Log-return series for one run; rows are assets, columns time.
struct ReturnsSeries {
  MarketParams params;
  std::int64_t length = 0;
  std::vector<double> returns;  // [asset][t], stride = length
  std::vector<double> signals;  // empty when retention is off

  std::span<const double> asset(int a) const {
    return {returns.data() + static_cast<std::size_t>(a) * length,
            static_cast<std::size_t>(length)};
  }
  double at(int a, std::int64_t t) const {
    return returns[static_cast<std::size_t>(a) * length + t];
  }
};

/// The market: agent thresholds and weights, prices, and the stepping rule.
/// Single-owner; advance with step(). Randomness is counter-based, keyed by
/// params.seed and the time index, so runs are reproducible bit-for-bit.
class Market {
 public:
  explicit Market(const MarketParams& params, const InitPolicy& init = {},
                  Backend backend = Backend::kAuto);

  /// Advances one step: draw the common signal, aggregate weighted orders,
  /// move prices, then apply gated threshold and weight refreshes. Weight
  /// updates use the current step's fitness and take effect next step.
  StepRecord step();

  const MarketParams& params() const { return params_; }
  std::int64_t time() const { return time_; }
  double log_price(int asset) const { return log_prices_[asset]; }

  std::span<const double> thresholds(int asset) const {
    return {thresholds_.data() + static_cast<std::size_t>(asset) * params_.n_agents,
            static_cast<std::size_t>(params_.n_agents)};
  }
  std::span<const double> weights(int asset) const {
    return {weights_.data() + static_cast<std::size_t>(asset) * params_.n_agents,
            static_cast<std::size_t>(params_.n_agents)};
  }

  /// The news draw consumed by step() at time t (preview; does not advance).
  double signal_at(std::int64_t t) const;

  /// Test hook: overwrite one asset's threshold row.
  void set_thresholds(int asset, std::span<const double> values);

 private:
  MarketParams params_;
  Backend backend_;
  std::int64_t time_ = 0;
  std::vector<double> thresholds_;  // [asset][agent]
  std::vector<double> weights_;     // [asset][agent]
  std::array<double, 2> log_prices_{};
  std::vector<double> block_partials_;  // reduction scratch
};

/// Runs a fresh market for params.horizon steps.
ReturnsSeries run(const MarketParams& params, const InitPolicy& init = {},
                  Backend backend = Backend::kAuto, bool keep_signals = true);

}  // namespace thresim
