#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../src/commands.hpp"
#include "thresim/config.hpp"

namespace {

constexpr const char* kUsage = R"(thresim - threshold-agent market simulator

usage:
  thresim run    [--config FILE] [--KEY VALUE ...]
  thresim stats  --returns FILE [--out DIR] [--KEY VALUE ...]
  thresim sweep  --axis {s|beta|n|D|lambda} --values V1,V2,... [--config FILE] [--KEY VALUE ...]
  thresim verify [--config FILE] [--KEY VALUE ...]

Config keys double as flags (e.g. --n 1500 --beta inf --T 50000); later
assignments override earlier ones, and a --config file is applied at the
point it appears. THRESIM_SEED, when set, overrides the seed.

keys:
  n D lambda s beta assets T warmup seed coupled_updates
  init init_lo init_hi init_value init_mirror
  out emit_signals period_len max_lag vol_window bins replicates backend

exit codes: 0 ok, 1 usage or configuration error, 2 verification failure
)";

struct CliArgs {
  std::string verb;
  thresim::RunConfig config;
  std::string axis;
  std::vector<std::string> values;
  std::string returns_file;
};

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ',')) parts.push_back(part);
  return parts;
}

CliArgs parse_args(int argc, char** argv) {
  CliArgs args;
  args.verb = argv[1];

  for (int i = 2; i < argc; ++i) {
    std::string flag = argv[i];
    if (flag.rfind("--", 0) != 0) {
      throw std::invalid_argument("expected --flag, got '" + flag + "'");
    }
    flag.erase(0, 2);
    std::string value;
    const auto eq = flag.find('=');
    if (eq != std::string::npos) {
      value = flag.substr(eq + 1);
      flag.erase(eq);
    } else {
      if (i + 1 >= argc) {
        throw std::invalid_argument("flag --" + flag + " needs a value");
      }
      value = argv[++i];
    }

    if (flag == "config") {
      for (const auto& [key, v] : thresim::read_config_file(value)) {
        thresim::apply_key_value(args.config, key, v);
      }
    } else if (flag == "axis") {
      args.axis = value;
    } else if (flag == "values") {
      args.values = split_commas(value);
    } else if (flag == "returns") {
      args.returns_file = value;
    } else {
      thresim::apply_key_value(args.config, flag, value);
    }
  }

  if (const char* env_seed = std::getenv("THRESIM_SEED")) {
    thresim::apply_key_value(args.config, "seed", env_seed);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsage;
    return thresim::cli::kExitUsage;
  }
  const std::string verb = argv[1];
  if (verb == "--help" || verb == "-h" || verb == "help") {
    std::cout << kUsage;
    return thresim::cli::kExitOk;
  }
  if (verb == "--version") {
    std::cout << "thresim " << thresim::cli::kVersion << "\n";
    return thresim::cli::kExitOk;
  }

  try {
    const CliArgs args = parse_args(argc, argv);
    if (verb == "run") {
      return thresim::cli::cmd_run(args.config);
    }
    if (verb == "stats") {
      if (args.returns_file.empty()) {
        throw std::invalid_argument("stats needs --returns FILE");
      }
      return thresim::cli::cmd_stats(args.config, args.returns_file);
    }
    if (verb == "sweep") {
      if (args.axis.empty()) {
        throw std::invalid_argument("sweep needs --axis");
      }
      return thresim::cli::cmd_sweep(args.config, args.axis, args.values);
    }
    if (verb == "verify") {
      return thresim::cli::cmd_verify(args.config);
    }
    std::cerr << "unknown command '" << verb << "'\n" << kUsage;
    return thresim::cli::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return thresim::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return thresim::cli::kExitUsage;
  }
}
