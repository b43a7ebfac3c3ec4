#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "thresim/params.hpp"

// Closed-form threshold-distribution dynamics and the realistic-regime
// check; analytic counterparts used to validate the Monte Carlo engine.

namespace thresim {

struct ThresholdAtom {
  double location = 0.0;  // a past |r| value
  double mass = 0.0;
};

/// Point-mass mixture: a remnant of the initial distribution with weight
/// (1-s)^t plus one atom per past absolute return, mass s(1-s)^{j-1} for the
/// return j steps back. Coincident locations are merged by exact equality
/// (repeated returns, e.g. zeros, are bit-identical).
struct ThresholdMixture {
  double initial_weight = 1.0;
  std::vector<ThresholdAtom> atoms;  // sorted by location, locations distinct

  double total_mass() const;
};

/// Mixture after t steps given the chronological |r| history
/// (abs_returns[k] = |r_k|, needs at least t entries).
/// Throws std::invalid_argument if the history is shorter than t.
ThresholdMixture analytic_threshold_distribution(double update_prob, std::int64_t t,
                                                 std::span<const double> abs_returns);

/// Exact point-mass histogram of a threshold row (mass = count / n).
ThresholdMixture empirical_threshold_distribution(std::span<const double> thresholds);

/// Half the L1 distance between two point-mass measures, matching atoms by
/// exact location. Initial-distribution remnants are treated as disjoint
/// from every atom (exact for continuous initial distributions).
/// Throws std::invalid_argument unless both inputs are normalized.
double tv_distance(const ThresholdMixture& a, const ThresholdMixture& b);

/// TV distance after coarsening both measures to the given atom locations;
/// all other mass (atoms elsewhere plus any initial remnant) is pooled into
/// one shared remainder slot. This is the comparison at the resolution a
/// finite population supports: with n agents, only atoms of mass >> 1/n are
/// individually resolvable, and the full-support distance carries an
/// irreducible sampling floor of order sum_j sqrt(mass_j / n).
double tv_distance_at(const ThresholdMixture& a, const ThresholdMixture& b,
                      std::span<const double> locations);

enum class RegimeVerdict {
  kRealistic,        // g(1/n) << D << g(1) at the configured factor
  kNoiseDominated,   // D > g(1): news amplitude saturates the market
  kImpactDominated,  // D < g(1/n): single-agent impact exceeds the news scale
  kMarginal,
};

const char* to_string(RegimeVerdict verdict);

struct RegimeReport {
  double g_inv_n = 0.0;      // g(1/n)
  double g_one = 0.0;        // g(1)
  double d_eff = 0.0;        // D * lambda
  double lower_ratio = 0.0;  // D / g(1/n)
  double upper_ratio = 0.0;  // g(1) / D
  RegimeVerdict verdict = RegimeVerdict::kMarginal;
};

/// Classifies the parameter point; "much less than" means the ratio is at
/// least `factor`.
RegimeReport regime_check(const MarketParams& params, double factor = 3.0);

}  // namespace thresim
