#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "thresim/params.hpp"

namespace thresim {

struct StatsOptions {
  std::int64_t period_len = 10000;
  int max_lag = 200;
  std::int64_t vol_window = 500;
  int bins = 101;
};

/// Full description of a run: model parameters, initial thresholds, stats
/// options, and output settings. Every field maps to one config key.
struct RunConfig {
  MarketParams params;
  InitPolicy init;
  StatsOptions stats;
  std::string output_dir = "out";
  bool emit_signals = true;
  int replicates = 1;
  Backend backend = Backend::kAuto;

  void validate() const;
};

/// One key=value assignment; order matters (later wins).
using KeyValue = std::pair<std::string, std::string>;

/// Parses a flat key=value file: one assignment per line, '#' comments and
/// blank lines ignored. Throws std::invalid_argument on malformed lines.
std::vector<KeyValue> read_config_file(const std::filesystem::path& path);

/// Applies one assignment. Unknown keys and unparsable values throw
/// std::invalid_argument naming the key.
void apply_key_value(RunConfig& config, const std::string& key, const std::string& value);

/// All assignments that reproduce `config`, in canonical key order.
std::vector<KeyValue> to_key_values(const RunConfig& config);

/// Parses "inf" (any case) or a non-negative real.
double parse_beta(const std::string& text);

/// Shortest text form of a config value ("inf" for infinite beta).
std::string format_beta(double beta);

}  // namespace thresim
