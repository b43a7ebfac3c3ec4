#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace thresim {

/// Execution backend for the per-step agent loops. kAuto picks the OpenMP
/// kernels once the population is large enough to amortize the per-step
/// parallel-region overhead (see the bench target for the crossover).
enum class Backend { kSerial, kOpenMP, kAuto };

inline constexpr int kAutoBackendThreshold = 16384;  // agents

inline Backend resolve_backend(Backend requested, int n_agents) {
  if (requested != Backend::kAuto) return requested;
  return n_agents >= kAutoBackendThreshold ? Backend::kOpenMP : Backend::kSerial;
}

/// Model constants plus run length and seed. Symbols follow the usual
/// agent-based market notation: n agents, news std D, market depth lambda,
/// asynchronous update probability s, intensity of choice beta.
struct MarketParams {
  int n_agents = 1500;         // n, >= 1
  double noise_std = 0.001;    // D, > 0
  double market_depth = 2.0;   // lambda, > 0
  double update_prob = 0.015;  // s, in [0, 1]
  double choice_intensity = 1000.0;  // beta, >= 0; +inf = radical choice
  int n_assets = 2;            // 1 or 2; beta is ignored when 1
  std::int64_t horizon = 50000;  // T, >= 0
  // Steps simulated and discarded before the recorded horizon; statistics in
  // the stationary regime need the initial-distribution transient gone.
  std::int64_t warmup = 0;
  std::uint64_t seed = 42;
  // One Bernoulli(s) draw per agent refreshes the thresholds of every asset
  // together; when false each asset draws its own gate. Weight updates always
  // use an independent draw.
  bool coupled_updates = true;

  bool infinite_beta() const {
    return choice_intensity == std::numeric_limits<double>::infinity();
  }

  /// Throws std::invalid_argument naming the violated bound.
  void validate() const;
};

/// Initial threshold distribution. The default draws each threshold uniformly
/// on [0, noise_std] so roughly half the population is active at the first
/// step; the initial distribution's influence decays as (1-s)^t.
struct InitPolicy {
  enum class Kind { kZero, kConstant, kUniform };

  Kind kind = Kind::kUniform;
  double constant = 0.0;  // Kind::kConstant value, >= 0
  double lo = 0.0;        // Kind::kUniform lower bound, >= 0
  double hi = -1.0;       // Kind::kUniform upper bound; < 0 means noise_std
  // Reuse asset 0's draws for every asset so all threshold rows start
  // identical (needed for paired-run identities).
  bool mirror_assets = false;

  static InitPolicy zero() { return {Kind::kZero, 0.0, 0.0, 0.0, false}; }
  static InitPolicy constant_value(double c) {
    return {Kind::kConstant, c, 0.0, 0.0, false};
  }
  static InitPolicy uniform(double lo, double hi) {
    return {Kind::kUniform, 0.0, lo, hi, false};
  }

  void validate() const;
};

}  // namespace thresim
