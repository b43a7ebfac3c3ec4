#include "thresim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace thresim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_mean(std::span<const double> series) {
  double sum = 0.0;
  for (double x : series) sum += x;
  return sum / static_cast<double>(series.size());
}

}  // namespace

SummaryStats summary_stats(std::span<const double> series) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (n < 4) {
    throw std::invalid_argument("summary_stats needs at least 4 observations");
  }

  SummaryStats s;
  s.n_obs = n;
  s.mean = sample_mean(series);
  s.max = series[0];
  s.min = series[0];

  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double x : series) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    s.max = std::max(s.max, x);
    s.min = std::min(s.min, x);
  }
  const auto dn = static_cast<double>(n);
  s.std = std::sqrt(m2 / (dn - 1.0));
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (m2 > 0.0) {
    s.skew = m3 / (m2 * std::sqrt(m2));
    s.kurtosis = m4 / (m2 * m2);
  } else {
    s.skew = kNaN;
    s.kurtosis = kNaN;
  }
  return s;
}

std::vector<SummaryStats> periodized_stats(std::span<const double> series,
                                           std::int64_t period_len) {
  if (period_len < 4) {
    throw std::invalid_argument("period_len must be >= 4");
  }
  std::vector<SummaryStats> periods;
  const auto n = static_cast<std::int64_t>(series.size());
  for (std::int64_t start = 0; start + period_len <= n; start += period_len) {
    periods.push_back(summary_stats(series.subspan(start, period_len)));
  }
  return periods;
}

AcfResult acf(std::span<const double> series, int max_lag) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (max_lag < 0 || 2 * static_cast<std::int64_t>(max_lag) >= n) {
    throw std::invalid_argument("acf requires max_lag < length / 2");
  }
  const double mean = sample_mean(series);
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  if (c0 == 0.0) {
    throw std::invalid_argument("acf undefined for a zero-variance series");
  }

  AcfResult result;
  result.lags.resize(max_lag + 1);
  result.values.resize(max_lag + 1);
  result.ci_band = 1.96 / std::sqrt(static_cast<double>(n));
  result.lags[0] = 0;
  result.values[0] = 1.0;
#pragma omp parallel for schedule(static)
  for (int k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::int64_t t = 0; t + k < n; ++t) {
      ck += (series[t] - mean) * (series[t + k] - mean);
    }
    result.lags[k] = k;
    result.values[k] = ck / c0;
  }
  return result;
}

DecayFit fit_exponential_decay(const AcfResult& acf_result, int lag_lo, int lag_hi) {
  if (lag_lo < 0 || lag_hi < lag_lo ||
      lag_hi >= static_cast<int>(acf_result.values.size())) {
    throw std::invalid_argument("fit range outside the ACF");
  }

  const int count = lag_hi - lag_lo + 1;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int k = lag_lo; k <= lag_hi; ++k) {
    const double rho = acf_result.values[k];
    if (!(rho > 0.0)) {
      throw std::domain_error("ACF not strictly positive at lag " + std::to_string(k) +
                              "; narrow the fit range");
    }
    const double x = static_cast<double>(k);
    const double y = std::log(rho);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) {
    throw std::invalid_argument("fit range must span more than one lag");
  }
  const double slope = (count * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / count;
  if (!(slope < 0.0)) {
    throw std::domain_error("ACF does not decay over the fit range");
  }

  DecayFit fit;
  fit.tau = -1.0 / slope;
  fit.amplitude = std::exp(intercept);
  fit.lag_lo = lag_lo;
  fit.lag_hi = lag_hi;
  double ss = 0.0;
  for (int k = lag_lo; k <= lag_hi; ++k) {
    const double resid = std::log(acf_result.values[k]) - (intercept + slope * k);
    ss += resid * resid;
  }
  fit.rms_residual = std::sqrt(ss / count);
  return fit;
}

std::vector<double> rolling_annualized_vol(std::span<const double> series,
                                           std::int64_t window, double factor) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (window < 2) {
    throw std::invalid_argument("vol window must be >= 2");
  }
  if (window > n) {
    throw std::invalid_argument("vol window exceeds the series length");
  }

  std::vector<double> vols(n - window + 1);
  const auto count = static_cast<std::int64_t>(vols.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto chunk = series.subspan(i, window);
    const double mean = sample_mean(chunk);
    double ss = 0.0;
    for (double x : chunk) ss += (x - mean) * (x - mean);
    vols[i] = std::sqrt(ss / static_cast<double>(window - 1)) * factor;
  }
  return vols;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson_correlation needs two equal-length series");
  }
  const double mx = sample_mean(x);
  const double my = sample_mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> period_correlation(std::span<const double> r1,
                                       std::span<const double> r2,
                                       std::int64_t period_len) {
  if (r1.size() != r2.size()) {
    throw std::invalid_argument("period_correlation needs equal-length series");
  }
  if (period_len < 2) {
    throw std::invalid_argument("period_len must be >= 2");
  }
  std::vector<double> correlations;
  const auto n = static_cast<std::int64_t>(r1.size());
  for (std::int64_t start = 0; start + period_len <= n; start += period_len) {
    correlations.push_back(pearson_correlation(r1.subspan(start, period_len),
                                               r2.subspan(start, period_len)));
  }
  return correlations;
}

Density empirical_density(std::span<const double> series, int n_bins) {
  if (n_bins < 2) {
    throw std::invalid_argument("empirical_density needs n_bins >= 2");
  }
  if (series.empty()) {
    throw std::invalid_argument("empirical_density needs data");
  }
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    throw std::invalid_argument("empirical_density needs a non-degenerate range");
  }

  const double width = (hi - lo) / n_bins;
  std::vector<std::int64_t> counts(n_bins, 0);
  for (double x : series) {
    auto bin = static_cast<std::int64_t>((x - lo) / width);
    bin = std::clamp<std::int64_t>(bin, 0, n_bins - 1);  // x == hi lands in the last bin
    ++counts[bin];
  }

  Density density;
  density.centers.resize(n_bins);
  density.values.resize(n_bins);
  const double norm = static_cast<double>(series.size()) * width;
  for (int b = 0; b < n_bins; ++b) {
    density.centers[b] = lo + (b + 0.5) * width;
    density.values[b] = static_cast<double>(counts[b]) / norm;
  }
  return density;
}

std::vector<double> gaussian_density(std::span<const double> centers, double mean,
                                     double std) {
  std::vector<double> values(centers.size());
  const double norm = 1.0 / (std * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double z = (centers[i] - mean) / std;
    values[i] = norm * std::exp(-0.5 * z * z);
  }
  return values;
}

}  // namespace thresim
