#include <algorithm>

#include "thresim/kernels.hpp"
#include "thresim/market.hpp"
#include "thresim/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thresim::kernels::omp {

// Each block partial is computed by exactly one thread and the partials are
// combined in block order, so the sum matches the serial kernel bit-for-bit.
double weighted_order_sum(double signal, std::span<const double> thresholds,
                          std::span<const double> weights,
                          std::span<double> block_partials) {
  const int n = static_cast<int>(thresholds.size());
  const int nb = num_blocks(n);
#pragma omp parallel for schedule(static)
  for (int b = 0; b < nb; ++b) {
    const int lo = b * kBlockSize;
    const int hi = std::min(lo + kBlockSize, n);
    double acc = 0.0;
    for (int i = lo; i < hi; ++i) {
      acc += weights[i] * agent_order(signal, thresholds[i]);
    }
    block_partials[b] = acc;
  }
  double total = 0.0;
  for (int b = 0; b < nb; ++b) total += block_partials[b];
  return total;
}

UpdateCounts apply_updates(const UpdateContext& ctx, double* thresholds,
                           double* weights) {
  const auto n = static_cast<std::size_t>(ctx.n_agents);
  const auto step = static_cast<std::uint64_t>(ctx.step);
  int threshold_count = 0;
  int weight_count = 0;

#pragma omp parallel for schedule(static) reduction(+ : threshold_count, weight_count)
  for (int i = 0; i < ctx.n_agents; ++i) {
    const auto agent = static_cast<std::uint32_t>(i);
    if (ctx.coupled) {
      if (rng::bernoulli(ctx.seed, rng::Stream::kThresholdGate, agent, step, 0,
                         ctx.update_prob)) {
        for (int a = 0; a < ctx.n_assets; ++a) {
          thresholds[static_cast<std::size_t>(a) * n + i] = ctx.abs_returns[a];
        }
        ++threshold_count;
      }
    } else {
      bool any = false;
      for (int a = 0; a < ctx.n_assets; ++a) {
        if (rng::bernoulli(ctx.seed, rng::Stream::kThresholdGate, agent, step,
                           static_cast<std::uint32_t>(a), ctx.update_prob)) {
          thresholds[static_cast<std::size_t>(a) * n + i] = ctx.abs_returns[a];
          any = true;
        }
      }
      if (any) ++threshold_count;
    }
    if (ctx.refresh_weights &&
        rng::bernoulli(ctx.seed, rng::Stream::kWeightGate, agent, step, 0,
                       ctx.update_prob)) {
      weights[i] = ctx.weight_asset0;
      weights[n + i] = ctx.weight_asset1;
      ++weight_count;
    }
  }
  return {threshold_count, weight_count};
}

}  // namespace thresim::kernels::omp
