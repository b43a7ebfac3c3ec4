#include "thresim/threshold_theory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "thresim/market.hpp"

namespace thresim {

double ThresholdMixture::total_mass() const {
  double total = initial_weight;
  for (const ThresholdAtom& atom : atoms) total += atom.mass;
  return total;
}

ThresholdMixture analytic_threshold_distribution(double update_prob, std::int64_t t,
                                                 std::span<const double> abs_returns) {
  if (!(update_prob >= 0.0 && update_prob <= 1.0)) {
    throw std::invalid_argument("update_prob must be in [0, 1]");
  }
  if (t < 0) {
    throw std::invalid_argument("t must be >= 0");
  }
  if (static_cast<std::int64_t>(abs_returns.size()) < t) {
    throw std::invalid_argument("history shorter than t (" +
                                std::to_string(abs_returns.size()) + " < " +
                                std::to_string(t) + ")");
  }

  const double q = 1.0 - update_prob;
  std::map<double, double> merged;
  double mass = update_prob;  // s * q^{j-1}
  double remnant = 1.0;       // q^t, accumulated alongside
  for (std::int64_t j = 1; j <= t; ++j) {
    if (mass > 0.0) merged[abs_returns[t - j]] += mass;
    mass *= q;
    remnant *= q;
  }

  ThresholdMixture mixture;
  mixture.initial_weight = remnant;
  mixture.atoms.reserve(merged.size());
  for (const auto& [location, m] : merged) mixture.atoms.push_back({location, m});
  return mixture;
}

ThresholdMixture empirical_threshold_distribution(std::span<const double> thresholds) {
  const double n = static_cast<double>(thresholds.size());
  std::map<double, std::int64_t> counts;
  for (double value : thresholds) ++counts[value];

  ThresholdMixture histogram;
  histogram.initial_weight = 0.0;
  histogram.atoms.reserve(counts.size());
  for (const auto& [location, count] : counts) {
    histogram.atoms.push_back({location, static_cast<double>(count) / n});
  }
  return histogram;
}

double tv_distance(const ThresholdMixture& a, const ThresholdMixture& b) {
  constexpr double kNormTol = 1e-9;
  if (std::abs(a.total_mass() - 1.0) > kNormTol ||
      std::abs(b.total_mass() - 1.0) > kNormTol) {
    throw std::invalid_argument("tv_distance requires normalized mixtures");
  }

  double l1 = std::abs(a.initial_weight - b.initial_weight);
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < a.atoms.size() || ib < b.atoms.size()) {
    if (ib == b.atoms.size() ||
        (ia < a.atoms.size() && a.atoms[ia].location < b.atoms[ib].location)) {
      l1 += a.atoms[ia].mass;
      ++ia;
    } else if (ia == a.atoms.size() || b.atoms[ib].location < a.atoms[ia].location) {
      l1 += b.atoms[ib].mass;
      ++ib;
    } else {
      l1 += std::abs(a.atoms[ia].mass - b.atoms[ib].mass);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * l1;
}

double tv_distance_at(const ThresholdMixture& a, const ThresholdMixture& b,
                      std::span<const double> locations) {
  auto mass_at = [](const ThresholdMixture& mixture, double location) {
    const auto it = std::lower_bound(
        mixture.atoms.begin(), mixture.atoms.end(), location,
        [](const ThresholdAtom& atom, double value) { return atom.location < value; });
    if (it != mixture.atoms.end() && it->location == location) return it->mass;
    return 0.0;
  };

  std::vector<double> distinct(locations.begin(), locations.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  ThresholdMixture coarse_a;
  ThresholdMixture coarse_b;
  double covered_a = 0.0;
  double covered_b = 0.0;
  for (double location : distinct) {
    const double ma = mass_at(a, location);
    const double mb = mass_at(b, location);
    coarse_a.atoms.push_back({location, ma});
    coarse_b.atoms.push_back({location, mb});
    covered_a += ma;
    covered_b += mb;
  }
  coarse_a.initial_weight = a.total_mass() - covered_a;  // pooled remainder
  coarse_b.initial_weight = b.total_mass() - covered_b;
  return tv_distance(coarse_a, coarse_b);
}

const char* to_string(RegimeVerdict verdict) {
  switch (verdict) {
    case RegimeVerdict::kRealistic: return "REALISTIC";
    case RegimeVerdict::kNoiseDominated: return "NOISE_DOMINATED";
    case RegimeVerdict::kImpactDominated: return "IMPACT_DOMINATED";
    case RegimeVerdict::kMarginal: return "MARGINAL";
  }
  return "UNKNOWN";
}

RegimeReport regime_check(const MarketParams& params, double factor) {
  RegimeReport report;
  report.g_inv_n = price_impact(1.0 / params.n_agents, params.market_depth);
  report.g_one = price_impact(1.0, params.market_depth);
  report.d_eff = params.noise_std * params.market_depth;
  report.lower_ratio = params.noise_std / report.g_inv_n;
  report.upper_ratio = report.g_one / params.noise_std;

  if (report.upper_ratio < 1.0) {
    report.verdict = RegimeVerdict::kNoiseDominated;
  } else if (report.lower_ratio < 1.0) {
    report.verdict = RegimeVerdict::kImpactDominated;
  } else if (report.lower_ratio >= factor && report.upper_ratio >= factor) {
    report.verdict = RegimeVerdict::kRealistic;
  } else {
    report.verdict = RegimeVerdict::kMarginal;
  }
  return report;
}

}  // namespace thresim
