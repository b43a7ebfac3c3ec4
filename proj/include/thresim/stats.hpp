#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

// Return-series diagnostics. Conventions: std uses the N-1 normalization;
// skewness and kurtosis use population central moments (kurtosis is
// non-excess, Gaussian = 3); the ACF uses the lag-0-denominator estimator
// with a single global mean, which keeps |rho| <= 1.

namespace thresim {

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  double skew = 0.0;      // NaN when the series is constant
  double kurtosis = 0.0;  // NaN when the series is constant
  double max = 0.0;
  double min = 0.0;
  std::int64_t n_obs = 0;
};

/// Throws std::invalid_argument for series shorter than 4 observations.
SummaryStats summary_stats(std::span<const double> series);

/// One SummaryStats per full consecutive window; a trailing partial window
/// is dropped.
std::vector<SummaryStats> periodized_stats(std::span<const double> series,
                                           std::int64_t period_len = 10000);

struct AcfResult {
  std::vector<int> lags;       // 0..max_lag
  std::vector<double> values;  // values[0] == 1
  double ci_band = 0.0;        // 1.96 / sqrt(N) white-noise band
};

/// Requires max_lag < length / 2 and a non-constant series.
AcfResult acf(std::span<const double> series, int max_lag);

struct DecayFit {
  double tau = 0.0;        // characteristic time in steps
  double amplitude = 0.0;
  int lag_lo = 0;
  int lag_hi = 0;
  double rms_residual = 0.0;  // in log space
};

/// Least-squares line through ln rho(k) over lags [lag_lo, lag_hi];
/// tau = -1/slope. Throws std::domain_error when a value in the range is
/// not strictly positive or the fitted slope does not decay.
DecayFit fit_exponential_decay(const AcfResult& acf_result, int lag_lo, int lag_hi);

inline double annualization_factor() { return std::sqrt(250.0); }

/// Trailing-window standard deviation times the annualization factor;
/// output[i] covers the window ending at index i + window - 1.
std::vector<double> rolling_annualized_vol(std::span<const double> series,
                                           std::int64_t window = 500,
                                           double factor = annualization_factor());

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Pearson correlation per full consecutive window; NaN for a window with
/// zero variance on either side.
std::vector<double> period_correlation(std::span<const double> r1,
                                       std::span<const double> r2,
                                       std::int64_t period_len = 10000);

struct Density {
  std::vector<double> centers;
  std::vector<double> values;  // integrates to 1 over the sample range
};

/// Equal-width histogram density over [min, max]. Requires n_bins >= 2 and a
/// non-degenerate range.
Density empirical_density(std::span<const double> series, int n_bins = 101);

/// Gaussian density with the given moments evaluated at the same centers;
/// the comparison curve for empirical_density.
std::vector<double> gaussian_density(std::span<const double> centers, double mean,
                                     double std);

}  // namespace thresim
