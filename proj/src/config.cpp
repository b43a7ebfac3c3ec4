#include "thresim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "thresim/csv.hpp"

namespace thresim {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return text;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config key '" + key + "': bad unsigned '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "': bad boolean '" + value + "'");
}

}  // namespace

double parse_beta(const std::string& text) {
  if (lower(trim(text)) == "inf") return std::numeric_limits<double>::infinity();
  return parse_double("beta", text);
}

std::string format_beta(double beta) {
  if (beta == std::numeric_limits<double>::infinity()) return "inf";
  return csv::format_double(beta);
}

void RunConfig::validate() const {
  params.validate();
  init.validate();
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be >= 1");
  }
  if (stats.period_len < 4) {
    throw std::invalid_argument("period_len must be >= 4");
  }
  if (stats.max_lag < 1) {
    throw std::invalid_argument("max_lag must be >= 1");
  }
  if (stats.vol_window < 2) {
    throw std::invalid_argument("vol_window must be >= 2");
  }
  if (stats.bins < 2) {
    throw std::invalid_argument("bins must be >= 2");
  }
}

std::vector<KeyValue> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file " + path.string());
  }
  std::vector<KeyValue> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected key=value, got '" + text + "'");
    }
    entries.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
  return entries;
}

void apply_key_value(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "n") {
    config.params.n_agents = static_cast<int>(parse_int(key, value));
  } else if (key == "D") {
    config.params.noise_std = parse_double(key, value);
  } else if (key == "lambda") {
    config.params.market_depth = parse_double(key, value);
  } else if (key == "s") {
    config.params.update_prob = parse_double(key, value);
  } else if (key == "beta") {
    config.params.choice_intensity = parse_beta(value);
  } else if (key == "assets") {
    config.params.n_assets = static_cast<int>(parse_int(key, value));
  } else if (key == "T") {
    config.params.horizon = parse_int(key, value);
  } else if (key == "warmup") {
    config.params.warmup = parse_int(key, value);
  } else if (key == "seed") {
    config.params.seed = parse_u64(key, value);
  } else if (key == "coupled_updates") {
    config.params.coupled_updates = parse_bool(key, value);
  } else if (key == "init") {
    const std::string kind = lower(value);
    if (kind == "uniform") {
      config.init.kind = InitPolicy::Kind::kUniform;
    } else if (kind == "zero") {
      config.init.kind = InitPolicy::Kind::kZero;
    } else if (kind == "constant") {
      config.init.kind = InitPolicy::Kind::kConstant;
    } else {
      throw std::invalid_argument("config key 'init': unknown policy '" + value +
                                  "' (uniform|zero|constant)");
    }
  } else if (key == "init_lo") {
    config.init.lo = parse_double(key, value);
  } else if (key == "init_hi") {
    config.init.hi = parse_double(key, value);
  } else if (key == "init_value") {
    config.init.constant = parse_double(key, value);
  } else if (key == "init_mirror") {
    config.init.mirror_assets = parse_bool(key, value);
  } else if (key == "out") {
    config.output_dir = value;
  } else if (key == "emit_signals") {
    config.emit_signals = parse_bool(key, value);
  } else if (key == "period_len") {
    config.stats.period_len = parse_int(key, value);
  } else if (key == "max_lag") {
    config.stats.max_lag = static_cast<int>(parse_int(key, value));
  } else if (key == "vol_window") {
    config.stats.vol_window = parse_int(key, value);
  } else if (key == "bins") {
    config.stats.bins = static_cast<int>(parse_int(key, value));
  } else if (key == "replicates") {
    config.replicates = static_cast<int>(parse_int(key, value));
  } else if (key == "backend") {
    const std::string b = lower(value);
    if (b == "serial") {
      config.backend = Backend::kSerial;
    } else if (b == "omp" || b == "openmp") {
      config.backend = Backend::kOpenMP;
    } else if (b == "auto") {
      config.backend = Backend::kAuto;
    } else {
      throw std::invalid_argument("config key 'backend': unknown value '" + value +
                                  "' (serial|omp|auto)");
    }
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

std::vector<KeyValue> to_key_values(const RunConfig& config) {
  std::vector<KeyValue> kv;
  kv.emplace_back("n", std::to_string(config.params.n_agents));
  kv.emplace_back("D", csv::format_double(config.params.noise_std));
  kv.emplace_back("lambda", csv::format_double(config.params.market_depth));
  kv.emplace_back("s", csv::format_double(config.params.update_prob));
  kv.emplace_back("beta", format_beta(config.params.choice_intensity));
  kv.emplace_back("assets", std::to_string(config.params.n_assets));
  kv.emplace_back("T", std::to_string(config.params.horizon));
  kv.emplace_back("warmup", std::to_string(config.params.warmup));
  kv.emplace_back("seed", std::to_string(config.params.seed));
  kv.emplace_back("coupled_updates", config.params.coupled_updates ? "1" : "0");
  switch (config.init.kind) {
    case InitPolicy::Kind::kUniform: kv.emplace_back("init", "uniform"); break;
    case InitPolicy::Kind::kZero: kv.emplace_back("init", "zero"); break;
    case InitPolicy::Kind::kConstant: kv.emplace_back("init", "constant"); break;
  }
  kv.emplace_back("init_lo", csv::format_double(config.init.lo));
  kv.emplace_back("init_hi", csv::format_double(config.init.hi));
  kv.emplace_back("init_value", csv::format_double(config.init.constant));
  kv.emplace_back("init_mirror", config.init.mirror_assets ? "1" : "0");
  kv.emplace_back("out", config.output_dir);
  kv.emplace_back("emit_signals", config.emit_signals ? "1" : "0");
  kv.emplace_back("period_len", std::to_string(config.stats.period_len));
  kv.emplace_back("max_lag", std::to_string(config.stats.max_lag));
  kv.emplace_back("vol_window", std::to_string(config.stats.vol_window));
  kv.emplace_back("bins", std::to_string(config.stats.bins));
  kv.emplace_back("replicates", std::to_string(config.replicates));
  switch (config.backend) {
    case Backend::kSerial: kv.emplace_back("backend", "serial"); break;
    case Backend::kOpenMP: kv.emplace_back("backend", "omp"); break;
    case Backend::kAuto: kv.emplace_back("backend", "auto"); break;
  }
  return kv;
}

}  // namespace thresim
