#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "thresim/stats.hpp"

// Definitional re-implementations of every estimator in stats.hpp, written
// straight from the formulas with long-double accumulation and no shared
// code. The verify command and the test suites cross-check the fast
// estimators against these.

namespace thresim::reference {

inline long double mean(std::span<const double> xs) {
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  return sum / static_cast<long double>(xs.size());
}

inline long double central_moment(std::span<const double> xs, int order) {
  const long double m = mean(xs);
  long double sum = 0.0L;
  for (double x : xs) {
    long double term = 1.0L;
    for (int k = 0; k < order; ++k) term *= (x - m);
    sum += term;
  }
  return sum / static_cast<long double>(xs.size());
}

inline double stddev(std::span<const double> xs) {
  const long double m = mean(xs);
  long double sum = 0.0L;
  for (double x : xs) sum += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(sum / static_cast<long double>(xs.size() - 1)));
}

inline SummaryStats summary_stats(std::span<const double> xs) {
  SummaryStats s;
  s.n_obs = static_cast<std::int64_t>(xs.size());
  s.mean = static_cast<double>(mean(xs));
  s.std = stddev(xs);
  const long double m2 = central_moment(xs, 2);
  const long double m3 = central_moment(xs, 3);
  const long double m4 = central_moment(xs, 4);
  if (m2 > 0.0L) {
    s.skew = static_cast<double>(m3 / (m2 * std::sqrt(m2)));
    s.kurtosis = static_cast<double>(m4 / (m2 * m2));
  } else {
    s.skew = std::nan("");
    s.kurtosis = std::nan("");
  }
  s.max = xs[0];
  s.min = xs[0];
  for (double x : xs) {
    if (x > s.max) s.max = x;
    if (x < s.min) s.min = x;
  }
  return s;
}

inline std::vector<SummaryStats> periodized_stats(std::span<const double> xs,
                                                  std::int64_t period_len) {
  std::vector<SummaryStats> out;
  for (std::size_t start = 0; start + period_len <= xs.size();
       start += static_cast<std::size_t>(period_len)) {
    out.push_back(summary_stats(xs.subspan(start, period_len)));
  }
  return out;
}

inline std::vector<double> acf(std::span<const double> xs, int max_lag) {
  const long double m = mean(xs);
  long double c0 = 0.0L;
  for (double x : xs) c0 += (x - m) * (x - m);
  std::vector<double> rho(max_lag + 1);
  for (int k = 0; k <= max_lag; ++k) {
    long double ck = 0.0L;
    for (std::size_t t = 0; t + k < xs.size(); ++t) {
      ck += (xs[t] - m) * (xs[t + k] - m);
    }
    rho[k] = static_cast<double>(ck / c0);
  }
  return rho;
}

/// Normal-equations solution of the line through (k, ln rho_k).
inline DecayFit fit_exponential_decay(std::span<const double> acf_values, int lag_lo,
                                      int lag_hi) {
  long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
  const int count = lag_hi - lag_lo + 1;
  for (int k = lag_lo; k <= lag_hi; ++k) {
    const long double x = k;
    const long double y = std::log(static_cast<long double>(acf_values[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const long double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const long double intercept = (sy - slope * sx) / count;
  DecayFit fit;
  fit.tau = static_cast<double>(-1.0L / slope);
  fit.amplitude = static_cast<double>(std::exp(intercept));
  fit.lag_lo = lag_lo;
  fit.lag_hi = lag_hi;
  long double ss = 0.0L;
  for (int k = lag_lo; k <= lag_hi; ++k) {
    const long double resid =
        std::log(static_cast<long double>(acf_values[k])) - (intercept + slope * k);
    ss += resid * resid;
  }
  fit.rms_residual = static_cast<double>(std::sqrt(ss / count));
  return fit;
}

inline std::vector<double> rolling_annualized_vol(std::span<const double> xs,
                                                  std::int64_t window, double factor) {
  std::vector<double> out;
  for (std::size_t i = 0; i + window <= xs.size(); ++i) {
    out.push_back(stddev(xs.subspan(i, window)) * factor);
  }
  return out;
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  const long double mx = mean(x);
  const long double my = mean(y);
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0L || syy == 0.0L) return std::nan("");
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline std::vector<double> period_correlation(std::span<const double> r1,
                                              std::span<const double> r2,
                                              std::int64_t period_len) {
  std::vector<double> out;
  for (std::size_t start = 0; start + period_len <= r1.size();
       start += static_cast<std::size_t>(period_len)) {
    out.push_back(pearson_correlation(r1.subspan(start, period_len),
                                      r2.subspan(start, period_len)));
  }
  return out;
}

inline Density empirical_density(std::span<const double> xs, int n_bins) {
  double lo = xs[0];
  double hi = xs[0];
  for (double x : xs) {
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  const double width = (hi - lo) / n_bins;
  Density density;
  density.centers.resize(n_bins);
  density.values.resize(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    density.centers[b] = lo + (b + 0.5) * width;
    std::int64_t count = 0;
    const double edge_lo = lo + b * width;
    const double edge_hi = lo + (b + 1) * width;
    for (double x : xs) {
      const bool last = b == n_bins - 1;
      if (x >= edge_lo && (x < edge_hi || (last && x <= hi))) ++count;
    }
    density.values[b] =
        static_cast<double>(count) / (static_cast<double>(xs.size()) * width);
  }
  return density;
}

}  // namespace thresim::reference
