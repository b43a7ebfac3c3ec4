#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thresim/config.hpp"

namespace thresim::cli {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

/// Simulates and writes returns.csv, stats.csv, acf.csv, vol.csv, corr.csv,
/// config.resolved and manifest.json into the output directory (one
/// subdirectory per replicate when replicates > 1).
int cmd_run(const RunConfig& config);

/// Re-analyzes an existing returns.csv, writing the diagnostic CSVs.
int cmd_stats(const RunConfig& config, const std::filesystem::path& returns_csv);

/// One run directory per (value, replicate) plus sweep_summary.csv.
int cmd_sweep(const RunConfig& config, const std::string& axis,
              const std::vector<std::string>& values);

/// Oracle and invariant checks; returns kExitVerifyFailed when any check
/// fails and writes verify_report.txt.
int cmd_verify(const RunConfig& config);

}  // namespace thresim::cli
