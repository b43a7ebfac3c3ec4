#pragma once

#include <array>
#include <cstdint>
#include <span>

// Per-step agent loops, implemented twice: kernels::serial is the reference,
// kernels::omp shares the arithmetic but distributes agents over threads.
// Both accumulate order flow into fixed-size block partials combined in block
// order, so results are bit-identical for any thread count.

namespace thresim::kernels {

inline constexpr int kBlockSize = 1024;

inline int num_blocks(int n_agents) {
  return (n_agents + kBlockSize - 1) / kBlockSize;
}

struct UpdateContext {
  std::uint64_t seed = 0;
  std::int64_t step = 0;
  int n_agents = 0;
  int n_assets = 1;
  double update_prob = 0.0;
  bool coupled = true;
  std::array<double, 2> abs_returns{};  // refresh targets per asset
  bool refresh_weights = false;         // two-asset only
  double weight_asset0 = 0.5;           // logit weights for this step's fitness
  double weight_asset1 = 0.5;
};

struct UpdateCounts {
  int thresholds = 0;
  int weights = 0;
};

namespace serial {

/// Sum over agents of weights[i] * order(signal vs thresholds[i]),
/// where order is +1 above the threshold, -1 below its negative, else 0.
double weighted_order_sum(double signal, std::span<const double> thresholds,
                          std::span<const double> weights,
                          std::span<double> block_partials);

/// Bernoulli-gated refresh of thresholds (and weights when requested).
/// Rows are laid out [asset][agent] with stride n_agents.
UpdateCounts apply_updates(const UpdateContext& ctx, double* thresholds,
                           double* weights);

}  // namespace serial

namespace omp {

double weighted_order_sum(double signal, std::span<const double> thresholds,
                          std::span<const double> weights,
                          std::span<double> block_partials);

UpdateCounts apply_updates(const UpdateContext& ctx, double* thresholds,
                           double* weights);

}  // namespace omp

}  // namespace thresim::kernels
