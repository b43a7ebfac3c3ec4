#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "thresim/csv.hpp"
#include "thresim/market.hpp"
#include "thresim/reference_stats.hpp"
#include "thresim/rng.hpp"
#include "thresim/stats.hpp"
#include "thresim/threshold_theory.hpp"

namespace fs = std::filesystem;

namespace thresim::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double value) { return csv::format_double(value); }

void write_returns_csv(const fs::path& path, const ReturnsSeries& series,
                       bool emit_signals) {
  csv::Table table;
  table.header.emplace_back("t");
  for (int a = 0; a < series.params.n_assets; ++a) {
    table.header.push_back("r" + std::to_string(a + 1));
  }
  const bool with_signals = emit_signals;
  if (with_signals) table.header.emplace_back("eps");

  for (std::int64_t t = 0; t < series.length; ++t) {
    std::vector<std::string> row;
    row.push_back(std::to_string(t));
    for (int a = 0; a < series.params.n_assets; ++a) row.push_back(fmt(series.at(a, t)));
    if (with_signals) row.push_back(fmt(series.signals[t]));
    table.add_row(std::move(row));
  }
  csv::write_table(path, table);
}

int effective_max_lag(int requested, std::int64_t length) {
  const auto cap = (length - 1) / 2;  // estimator needs max_lag < length / 2
  return static_cast<int>(std::min<std::int64_t>(requested, cap));
}

/// Default fit window for the initial ACF decay: lags 1 .. ceil(1/s).
int default_fit_hi(double update_prob, int max_lag) {
  if (!(update_prob > 0.0)) return max_lag;
  const int hi = static_cast<int>(std::ceil(1.0 / update_prob));
  return std::clamp(hi, 2, max_lag);
}

/// Writes stats.csv, acf.csv, vol.csv and corr.csv for the given return
/// rows. Diagnostics that the series is too short (or too degenerate) to
/// support are emitted as header-only files.
void write_diagnostics(const fs::path& dir, const std::vector<std::span<const double>>& returns,
                       const StatsOptions& options) {
  const int n_assets = static_cast<int>(returns.size());
  const std::int64_t length = n_assets > 0 ? static_cast<std::int64_t>(returns[0].size()) : 0;

  csv::Table stats_table;
  stats_table.header = {"asset", "period", "n_obs", "mean",
                        "std",   "skew",   "kurtosis", "max", "min"};
  for (int a = 0; a < n_assets; ++a) {
    const auto periods = length >= options.period_len
                             ? periodized_stats(returns[a], options.period_len)
                             : std::vector<SummaryStats>{};
    for (std::size_t p = 0; p < periods.size(); ++p) {
      const SummaryStats& s = periods[p];
      stats_table.add_row({std::to_string(a + 1), std::to_string(p + 1),
                           std::to_string(s.n_obs), fmt(s.mean), fmt(s.std), fmt(s.skew),
                           fmt(s.kurtosis), fmt(s.max), fmt(s.min)});
    }
  }
  csv::write_table(dir / "stats.csv", stats_table);

  csv::Table acf_table;
  acf_table.header.emplace_back("lag");
  for (int a = 0; a < n_assets; ++a) acf_table.header.push_back("rho_r" + std::to_string(a + 1));
  for (int a = 0; a < n_assets; ++a) {
    acf_table.header.push_back("rho_abs_r" + std::to_string(a + 1));
  }
  const int max_lag = effective_max_lag(options.max_lag, length);
  if (max_lag >= 1) {
    std::vector<AcfResult> acf_r(n_assets);
    std::vector<AcfResult> acf_abs(n_assets);
    bool ok = true;
    try {
      for (int a = 0; a < n_assets; ++a) {
        acf_r[a] = acf(returns[a], max_lag);
        std::vector<double> abs_r(returns[a].begin(), returns[a].end());
        for (double& x : abs_r) x = std::abs(x);
        acf_abs[a] = acf(abs_r, max_lag);
      }
    } catch (const std::invalid_argument& e) {
      std::cerr << "warning: acf skipped (" << e.what() << ")\n";
      ok = false;
    }
    if (ok) {
      for (int k = 0; k <= max_lag; ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (int a = 0; a < n_assets; ++a) row.push_back(fmt(acf_r[a].values[k]));
        for (int a = 0; a < n_assets; ++a) row.push_back(fmt(acf_abs[a].values[k]));
        acf_table.add_row(std::move(row));
      }
    }
  }
  csv::write_table(dir / "acf.csv", acf_table);

  csv::Table vol_table;
  vol_table.header.emplace_back("t");
  for (int a = 0; a < n_assets; ++a) vol_table.header.push_back("v" + std::to_string(a + 1));
  if (length >= options.vol_window) {
    std::vector<std::vector<double>> vols(n_assets);
    for (int a = 0; a < n_assets; ++a) {
      vols[a] = rolling_annualized_vol(returns[a], options.vol_window);
    }
    for (std::size_t i = 0; i < vols[0].size(); ++i) {
      std::vector<std::string> row{std::to_string(options.vol_window - 1 + static_cast<std::int64_t>(i))};
      for (int a = 0; a < n_assets; ++a) row.push_back(fmt(vols[a][i]));
      vol_table.add_row(std::move(row));
    }
  }
  csv::write_table(dir / "vol.csv", vol_table);

  csv::Table corr_table;
  corr_table.header = {"period", "rho"};
  if (n_assets == 2 && length >= options.period_len) {
    const auto correlations = period_correlation(returns[0], returns[1], options.period_len);
    for (std::size_t p = 0; p < correlations.size(); ++p) {
      corr_table.add_row({std::to_string(p + 1), fmt(correlations[p])});
    }
  }
  csv::write_table(dir / "corr.csv", corr_table);
}

void write_resolved_config(const fs::path& path, const RunConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& [key, value] : to_key_values(config)) {
    out << key << '=' << value << '\n';
  }
}

void write_manifest(const fs::path& dir, const RunConfig& config, double duration_seconds,
                    const std::vector<std::string>& file_names) {
  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["rng_algorithm"] = rng::kAlgorithmName;
  manifest["duration_seconds"] = duration_seconds;
  nlohmann::json config_json = nlohmann::json::object();
  for (const auto& [key, value] : to_key_values(config)) config_json[key] = value;
  manifest["config"] = config_json;
  manifest["files"] = nlohmann::json::array();
  for (const std::string& name : file_names) {
    const fs::path path = dir / name;
    manifest["files"].push_back({{"name", name},
                                 {"bytes", static_cast<std::int64_t>(fs::file_size(path))},
                                 {"fnv1a64", csv::fnv1a64_hex(path)}});
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
}

/// Simulates one replicate and writes the full file set into `dir`.
void run_one(RunConfig config, const fs::path& dir) {
  const auto started = std::chrono::steady_clock::now();
  fs::create_directories(dir);
  config.output_dir = dir.string();
  config.replicates = 1;

  const ReturnsSeries series =
      run(config.params, config.init, config.backend, config.emit_signals);
  write_returns_csv(dir / "returns.csv", series, config.emit_signals);

  std::vector<std::span<const double>> rows;
  for (int a = 0; a < config.params.n_assets; ++a) rows.push_back(series.asset(a));
  write_diagnostics(dir, rows, config.stats);

  write_resolved_config(dir / "config.resolved", config);
  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(dir, config, duration,
                 {"returns.csv", "stats.csv", "acf.csv", "vol.csv", "corr.csv",
                  "config.resolved"});
}

void warn_if_unrealistic(const MarketParams& params) {
  const RegimeReport report = regime_check(params);
  if (report.verdict != RegimeVerdict::kRealistic) {
    std::cerr << "warning: parameter regime is " << to_string(report.verdict)
              << " (D/g(1/n) = " << fmt(report.lower_ratio)
              << ", g(1)/D = " << fmt(report.upper_ratio) << ")\n";
  }
}

struct Job {
  RunConfig config;
  fs::path dir;
};

/// Runs jobs concurrently; each writes only inside its own directory.
void run_jobs(const std::vector<Job>& jobs) {
  std::vector<std::string> errors(jobs.size());
  const auto count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      run_one(jobs[i].config, jobs[i].dir);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::int64_t i = 0; i < count; ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("run in " + jobs[i].dir.string() + " failed: " + errors[i]);
    }
  }
}

std::string replicate_dir_name(int replicate) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "rep%03d", replicate);
  return buf;
}

}  // namespace

int cmd_run(const RunConfig& config) {
  config.validate();
  warn_if_unrealistic(config.params);

  std::vector<Job> jobs;
  const fs::path base = config.output_dir;
  for (int k = 0; k < config.replicates; ++k) {
    Job job{config, config.replicates == 1 ? base : base / replicate_dir_name(k)};
    job.config.params.seed = rng::derive_seed(config.params.seed, static_cast<std::uint32_t>(k));
    jobs.push_back(std::move(job));
  }
  run_jobs(jobs);
  std::cout << "wrote " << jobs.size() << (jobs.size() == 1 ? " run to " : " runs to ")
            << base.string() << "\n";
  return kExitOk;
}

int cmd_stats(const RunConfig& config, const fs::path& returns_csv) {
  const csv::ParsedCsv parsed = csv::read_numeric(returns_csv);
  std::vector<std::span<const double>> rows;
  for (int a = 1;; ++a) {
    const int col = parsed.column_index("r" + std::to_string(a));
    if (col < 0) break;
    rows.emplace_back(parsed.columns[col]);
  }
  if (rows.empty()) {
    throw std::invalid_argument(returns_csv.string() + " has no return columns (r1, r2, ...)");
  }
  fs::create_directories(config.output_dir);
  write_diagnostics(config.output_dir, rows, config.stats);
  std::cout << "re-analyzed " << returns_csv.string() << " (" << rows.size()
            << (rows.size() == 1 ? " asset, " : " assets, ") << rows[0].size()
            << " steps) into " << config.output_dir << "\n";
  return kExitOk;
}

namespace {

void apply_axis_value(RunConfig& config, const std::string& axis, const std::string& value) {
  if (axis == "s") {
    apply_key_value(config, "s", value);
  } else if (axis == "beta") {
    apply_key_value(config, "beta", value);
  } else if (axis == "n") {
    apply_key_value(config, "n", value);
  } else if (axis == "D") {
    apply_key_value(config, "D", value);
  } else if (axis == "lambda") {
    apply_key_value(config, "lambda", value);
  } else {
    throw std::invalid_argument("unknown sweep axis '" + axis +
                                "' (s|beta|n|D|lambda)");
  }
}

struct SweepRow {
  std::string value;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<double> kurt_min, kurt_max, kurt_range, tau;  // per asset
  double mean_abs_fitness = 0.0;
  double corr_mean = kNaN, corr_min = kNaN, corr_max = kNaN, corr_range = kNaN;
};

SweepRow summarize_run(const RunConfig& config, const std::string& value, int replicate) {
  const ReturnsSeries series = run(config.params, config.init, config.backend, false);

  SweepRow row;
  row.value = value;
  row.replicate = replicate;
  row.seed = config.params.seed;
  const int n_assets = config.params.n_assets;
  const std::int64_t length = series.length;

  const int max_lag = effective_max_lag(config.stats.max_lag, length);
  for (int a = 0; a < n_assets; ++a) {
    const auto periods = length >= config.stats.period_len
                             ? periodized_stats(series.asset(a), config.stats.period_len)
                             : std::vector<SummaryStats>{};
    double lo = kNaN, hi = kNaN;
    for (const SummaryStats& s : periods) {
      if (std::isnan(lo) || s.kurtosis < lo) lo = s.kurtosis;
      if (std::isnan(hi) || s.kurtosis > hi) hi = s.kurtosis;
    }
    row.kurt_min.push_back(lo);
    row.kurt_max.push_back(hi);
    row.kurt_range.push_back(hi - lo);

    double tau = kNaN;
    if (max_lag >= 2) {
      try {
        std::vector<double> abs_r(series.asset(a).begin(), series.asset(a).end());
        for (double& x : abs_r) x = std::abs(x);
        const AcfResult abs_acf = acf(abs_r, max_lag);
        const int hi_lag = default_fit_hi(config.params.update_prob, max_lag);
        tau = fit_exponential_decay(abs_acf, 1, hi_lag).tau;
      } catch (const std::exception&) {
        // no positive decay to fit; leave nan
      }
    }
    row.tau.push_back(tau);
  }

  if (n_assets == 2) {
    double sum = 0.0;
    for (std::int64_t t = 0; t < length; ++t) {
      sum += std::abs(std::abs(series.at(1, t)) - std::abs(series.at(0, t)));
    }
    row.mean_abs_fitness = length > 0 ? sum / static_cast<double>(length) : 0.0;

    if (length >= config.stats.period_len) {
      const auto correlations =
          period_correlation(series.asset(0), series.asset(1), config.stats.period_len);
      double total = 0.0;
      row.corr_min = correlations[0];
      row.corr_max = correlations[0];
      for (double c : correlations) {
        total += c;
        row.corr_min = std::min(row.corr_min, c);
        row.corr_max = std::max(row.corr_max, c);
      }
      row.corr_mean = total / static_cast<double>(correlations.size());
      row.corr_range = row.corr_max - row.corr_min;
    }
  }
  return row;
}

}  // namespace

int cmd_sweep(const RunConfig& config, const std::string& axis,
              const std::vector<std::string>& values) {
  if (values.empty()) {
    throw std::invalid_argument("sweep needs at least one value");
  }
  // Validate the axis and every value up front.
  for (const std::string& value : values) {
    RunConfig probe = config;
    apply_axis_value(probe, axis, value);
    probe.validate();
  }

  const fs::path base = config.output_dir;
  std::vector<Job> jobs;
  for (const std::string& value : values) {
    for (int k = 0; k < config.replicates; ++k) {
      Job job;
      job.config = config;
      apply_axis_value(job.config, axis, value);
      job.config.params.seed = rng::derive_seed(config.params.seed, static_cast<std::uint32_t>(k));
      job.dir = base / (axis + "_" + value) / replicate_dir_name(k);
      jobs.push_back(std::move(job));
    }
  }
  run_jobs(jobs);

  // Summary rows reuse the per-run series rather than re-reading CSVs.
  std::vector<SweepRow> summary(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const auto count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      const std::size_t value_index = static_cast<std::size_t>(i) / config.replicates;
      summary[i] = summarize_run(jobs[i].config, values[value_index],
                                 static_cast<int>(i % config.replicates));
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::int64_t i = 0; i < count; ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("summary for " + jobs[i].dir.string() + " failed: " + errors[i]);
    }
  }

  csv::Table table;
  table.header = {"axis", "value", "replicate", "seed"};
  for (int a = 0; a < config.params.n_assets; ++a) {
    const std::string suffix = "_a" + std::to_string(a + 1);
    table.header.push_back("kurt_min" + suffix);
    table.header.push_back("kurt_max" + suffix);
    table.header.push_back("kurt_range" + suffix);
    table.header.push_back("tau" + suffix);
  }
  table.header.insert(table.header.end(),
                      {"mean_abs_fitness", "corr_mean", "corr_min", "corr_max", "corr_range"});
  for (const SweepRow& row : summary) {
    std::vector<std::string> cells{axis, row.value, std::to_string(row.replicate),
                                   std::to_string(row.seed)};
    for (int a = 0; a < config.params.n_assets; ++a) {
      cells.push_back(fmt(row.kurt_min[a]));
      cells.push_back(fmt(row.kurt_max[a]));
      cells.push_back(fmt(row.kurt_range[a]));
      cells.push_back(fmt(row.tau[a]));
    }
    cells.push_back(fmt(row.mean_abs_fitness));
    cells.push_back(fmt(row.corr_mean));
    cells.push_back(fmt(row.corr_min));
    cells.push_back(fmt(row.corr_max));
    cells.push_back(fmt(row.corr_range));
    table.add_row(std::move(cells));
  }
  fs::create_directories(base);
  csv::write_table(base / "sweep_summary.csv", table);
  std::cout << "swept " << axis << " over " << values.size() << " values x "
            << config.replicates << " replicates into " << base.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

namespace {

struct CheckReporter {
  std::ostringstream report;
  bool all_passed = true;

  void result(bool passed, const std::string& name, const std::string& detail) {
    const std::string line = std::string(passed ? "PASS" : "FAIL") + "  " + name +
                             (detail.empty() ? "" : ": " + detail);
    std::cout << line << "\n";
    report << line << "\n";
    if (!passed) all_passed = false;
  }
};

/// Compares the empirical threshold histogram with the analytic mixture at
/// each checkpoint, averaged over `n_seeds` runs. The check statistic is the
/// TV over the 20 most recent return atoms (plus the pooled remainder) --
/// the atoms a population of n agents can resolve; the full-support TV is
/// reported alongside for reference.
void check_threshold_mixture(CheckReporter& reporter, const RunConfig& config) {
  MarketParams params = config.params;
  params.n_assets = 1;
  const std::vector<std::int64_t> checkpoints = {500, 2000, 5000};
  params.horizon = checkpoints.back();
  const int n_seeds = 20;
  const int n_recent = 20;
  const double bound = 0.05;

  std::vector<double> tv_sums(checkpoints.size(), 0.0);
  std::vector<double> full_tv_sums(checkpoints.size(), 0.0);
  for (int k = 0; k < n_seeds; ++k) {
    MarketParams seeded = params;
    seeded.seed = rng::derive_seed(config.params.seed, static_cast<std::uint32_t>(k));
    Market market(seeded, config.init, config.backend);
    std::vector<double> abs_history;
    abs_history.reserve(params.horizon);
    std::size_t next = 0;
    for (std::int64_t t = 1; t <= params.horizon; ++t) {
      abs_history.push_back(std::abs(market.step().returns[0]));
      if (next < checkpoints.size() && t == checkpoints[next]) {
        const auto analytic =
            analytic_threshold_distribution(params.update_prob, t, abs_history);
        const auto empirical = empirical_threshold_distribution(market.thresholds(0));
        const auto recent = std::span(abs_history).last(std::min<std::size_t>(
            n_recent, abs_history.size()));
        tv_sums[next] += tv_distance_at(analytic, empirical, recent);
        full_tv_sums[next] += tv_distance(analytic, empirical);
        ++next;
      }
    }
  }
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const double mean_tv = tv_sums[c] / n_seeds;
    reporter.result(mean_tv < bound,
                    "threshold mixture vs histogram @t=" + std::to_string(checkpoints[c]),
                    "mean TV " + fmt(mean_tv) + " over the " + std::to_string(n_recent) +
                        " newest atoms (bound " + fmt(bound) + ", " +
                        std::to_string(n_seeds) + " seeds; full-support TV " +
                        fmt(full_tv_sums[c] / n_seeds) + ")");
  }
}

/// Two-asset run at beta=0 with mirrored initial thresholds must reproduce
/// the single-asset run at twice the depth, path by path.
void check_beta_zero_reduction(CheckReporter& reporter, const RunConfig& config) {
  MarketParams two = config.params;
  two.n_assets = 2;
  two.choice_intensity = 0.0;
  two.horizon = 10000;

  MarketParams one = two;
  one.n_assets = 1;
  one.market_depth = 2.0 * two.market_depth;

  InitPolicy mirrored = config.init;
  mirrored.mirror_assets = true;

  const ReturnsSeries pair = run(two, mirrored, config.backend, false);
  const ReturnsSeries single = run(one, config.init, config.backend, false);

  std::int64_t mismatches = 0;
  for (std::int64_t t = 0; t < two.horizon; ++t) {
    if (pair.at(0, t) != pair.at(1, t) || pair.at(0, t) != single.at(0, t)) ++mismatches;
  }
  reporter.result(mismatches == 0, "beta=0 reduction to single asset at depth 2*lambda",
                  mismatches == 0
                      ? "identical over " + std::to_string(two.horizon) + " steps"
                      : std::to_string(mismatches) + " mismatched steps" +
                            (two.coupled_updates ? "" : " (updates are decoupled)"));
}

/// Halving the news scale while doubling the depth (equal D*lambda) must
/// halve every return, path by path; single-asset model, scaled thresholds.
void check_deff_scaling(CheckReporter& reporter, const RunConfig& config) {
  MarketParams base = config.params;
  base.n_assets = 1;
  base.horizon = 10000;

  MarketParams scaled = base;
  scaled.noise_std = base.noise_std / 2.0;
  scaled.market_depth = base.market_depth * 2.0;

  InitPolicy init = config.init;
  InitPolicy scaled_init = init;
  if (init.kind == InitPolicy::Kind::kUniform) {
    scaled_init.lo = init.lo / 2.0;
    scaled_init.hi = (init.hi < 0.0 ? base.noise_std : init.hi) / 2.0;
  } else if (init.kind == InitPolicy::Kind::kConstant) {
    scaled_init.constant = init.constant / 2.0;
  }

  const ReturnsSeries a = run(base, init, config.backend, false);
  const ReturnsSeries b = run(scaled, scaled_init, config.backend, false);
  std::int64_t mismatches = 0;
  for (std::int64_t t = 0; t < base.horizon; ++t) {
    if (b.at(0, t) != a.at(0, t) / 2.0) ++mismatches;
  }
  reporter.result(mismatches == 0, "D*lambda scaling (returns halve when depth doubles)",
                  mismatches == 0
                      ? "exact over " + std::to_string(base.horizon) + " steps"
                      : std::to_string(mismatches) + " mismatched steps");
}

bool close_rel(double a, double b, double tol = 1e-10) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

void check_estimators(CheckReporter& reporter, const RunConfig& config) {
  const std::int64_t n = 2000;
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::int64_t i = 0; i < n; ++i) {
    x[i] = rng::uniform01(config.params.seed, rng::Stream::kScratch, 0, i);
    y[i] = rng::uniform01(config.params.seed, rng::Stream::kScratch, 1, i);
  }

  const double tol = 1e-10;
  bool ok = true;
  std::string failure;
  auto expect = [&](bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      failure = what;
    }
  };

  const SummaryStats fast = summary_stats(x);
  const SummaryStats ref = reference::summary_stats(x);
  expect(close_rel(fast.mean, ref.mean, tol) && close_rel(fast.std, ref.std, tol) &&
             close_rel(fast.skew, ref.skew, tol) &&
             close_rel(fast.kurtosis, ref.kurtosis, tol) && fast.max == ref.max &&
             fast.min == ref.min,
         "summary_stats");

  const auto fast_periods = periodized_stats(x, 500);
  const auto ref_periods = reference::periodized_stats(x, 500);
  expect(fast_periods.size() == ref_periods.size(), "periodized_stats count");
  for (std::size_t p = 0; ok && p < fast_periods.size(); ++p) {
    expect(close_rel(fast_periods[p].kurtosis, ref_periods[p].kurtosis, tol),
           "periodized_stats kurtosis");
  }

  const AcfResult fast_acf = acf(x, 50);
  const auto ref_acf = reference::acf(x, 50);
  for (int k = 0; ok && k <= 50; ++k) {
    expect(close_rel(fast_acf.values[k], ref_acf[k], tol), "acf lag " + std::to_string(k));
  }

  AcfResult synthetic;
  synthetic.ci_band = 0.0;
  for (int k = 0; k <= 80; ++k) {
    synthetic.lags.push_back(k);
    synthetic.values.push_back(0.8 * std::exp(-k / 35.0) +
                               0.01 * std::sin(static_cast<double>(k)));
  }
  const DecayFit fast_fit = fit_exponential_decay(synthetic, 1, 60);
  const DecayFit ref_fit = reference::fit_exponential_decay(synthetic.values, 1, 60);
  expect(close_rel(fast_fit.tau, ref_fit.tau, tol) &&
             close_rel(fast_fit.amplitude, ref_fit.amplitude, tol),
         "fit_exponential_decay");

  const auto fast_vol = rolling_annualized_vol(x, 50);
  const auto ref_vol = reference::rolling_annualized_vol(x, 50, annualization_factor());
  expect(fast_vol.size() == ref_vol.size(), "rolling vol length");
  for (std::size_t i = 0; ok && i < fast_vol.size(); ++i) {
    expect(close_rel(fast_vol[i], ref_vol[i], tol), "rolling vol point " + std::to_string(i));
  }

  const auto fast_corr = period_correlation(x, y, 400);
  const auto ref_corr = reference::period_correlation(x, y, 400);
  for (std::size_t p = 0; ok && p < fast_corr.size(); ++p) {
    expect(close_rel(fast_corr[p], ref_corr[p], tol), "period correlation");
  }

  const Density fast_density = empirical_density(x, 31);
  const Density ref_density = reference::empirical_density(x, 31);
  for (int b = 0; ok && b < 31; ++b) {
    expect(close_rel(fast_density.values[b], ref_density.values[b], tol) &&
               close_rel(fast_density.centers[b], ref_density.centers[b], tol),
           "density bin " + std::to_string(b));
  }

  reporter.result(ok, "estimators vs definitional reference",
                  ok ? "all within 1e-10 relative" : "first failure: " + failure);
}

}  // namespace

int cmd_verify(const RunConfig& config) {
  config.validate();
  CheckReporter reporter;

  const RegimeReport regime = regime_check(config.params);
  reporter.report << "regime: " << to_string(regime.verdict)
                  << " (D/g(1/n) = " << fmt(regime.lower_ratio)
                  << ", g(1)/D = " << fmt(regime.upper_ratio)
                  << ", D_eff = " << fmt(regime.d_eff) << ")\n";

  check_threshold_mixture(reporter, config);
  check_beta_zero_reduction(reporter, config);
  check_deff_scaling(reporter, config);
  check_estimators(reporter, config);

  fs::create_directories(config.output_dir);
  std::ofstream out(fs::path(config.output_dir) / "verify_report.txt", std::ios::binary);
  out << reporter.report.str();
  if (!reporter.all_passed) {
    std::cout << "verification FAILED\n";
    return kExitVerifyFailed;
  }
  std::cout << "verification passed\n";
  return kExitOk;
}

}  // namespace thresim::cli
