// Integration tests that drive the thresim binary. ctest passes the binary
// path as the first argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_workdir;

int run_cli(const std::string& args) {
  const std::string command = g_cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::size_t line_count(const fs::path& path) {
  const std::string text = slurp(path);
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

std::string header_of(const fs::path& path) {
  const std::string text = slurp(path);
  return text.substr(0, text.find('\n'));
}

/// Column values as raw strings, exactly as serialized.
std::vector<std::string> text_column(const fs::path& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  int target = -1;
  {
    std::stringstream header(line);
    std::string field;
    for (int c = 0; std::getline(header, field, ','); ++c) {
      if (field == name) target = c;
    }
  }
  REQUIRE(target >= 0);
  std::vector<std::string> values;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string field;
    for (int c = 0; std::getline(row, field, ','); ++c) {
      if (c == target) values.push_back(field);
    }
  }
  return values;
}

fs::path dir_for(const std::string& name) {
  const fs::path dir = g_workdir / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("help, version, and usage errors") {
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("run --bogus_key 1") == 1);
  CHECK(run_cli("run --n banana") == 1);
  CHECK(run_cli("run --n 0") == 1);  // violated bound
  CHECK(run_cli("stats") == 1);      // missing --returns
  CHECK(run_cli("sweep --axis gamma --values 1") == 1);
  CHECK(run_cli("sweep --axis s") == 1);  // missing values
}

TEST_CASE("run writes the full file set") {
  const fs::path dir = dir_for("run_basic");
  REQUIRE(run_cli("run --T 500 --n 50 --assets 2 --seed 9 --out " + dir.string()) == 0);
  for (const char* name : {"returns.csv", "stats.csv", "acf.csv", "vol.csv", "corr.csv",
                           "config.resolved", "manifest.json"}) {
    CHECK(fs::exists(dir / name));
  }
  CHECK(header_of(dir / "returns.csv") == "t,r1,r2,eps");
  CHECK(line_count(dir / "returns.csv") == 501);
  CHECK(header_of(dir / "acf.csv") == "lag,rho_r1,rho_r2,rho_abs_r1,rho_abs_r2");
  CHECK(header_of(dir / "vol.csv") == "t,v1,v2");
  // T=500 supports exactly one 500-step vol window
  CHECK(line_count(dir / "vol.csv") == 2);
  // no full 10000-step period
  CHECK(line_count(dir / "stats.csv") == 1);
  CHECK(line_count(dir / "corr.csv") == 1);

  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("philox4x32-10") != std::string::npos);
  CHECK(manifest.find("fnv1a64") != std::string::npos);
}

TEST_CASE("degenerate horizon writes headers only") {
  const fs::path dir = dir_for("run_t0");
  REQUIRE(run_cli("run --T 0 --n 10 --out " + dir.string()) == 0);
  CHECK(line_count(dir / "returns.csv") == 1);
  CHECK(header_of(dir / "returns.csv") == "t,r1,r2,eps");
}

TEST_CASE("single-asset layout and signal retention flag") {
  const fs::path dir = dir_for("run_single");
  REQUIRE(run_cli("run --T 200 --n 30 --assets 1 --out " + dir.string()) == 0);
  CHECK(header_of(dir / "returns.csv") == "t,r1,eps");
  CHECK(header_of(dir / "acf.csv") == "lag,rho_r1,rho_abs_r1");
  CHECK(line_count(dir / "corr.csv") == 1);  // needs two assets

  const fs::path no_eps = dir_for("run_no_eps");
  REQUIRE(run_cli("run --T 200 --n 30 --assets 1 --emit_signals 0 --out " +
                  no_eps.string()) == 0);
  CHECK(header_of(no_eps / "returns.csv") == "t,r1");
}

TEST_CASE("runs reproduce bit-for-bit") {
  const fs::path a = dir_for("repro_a");
  const fs::path b = dir_for("repro_b");
  const std::string config = "run --T 400 --n 40 --seed 1234 --out ";
  REQUIRE(run_cli(config + a.string()) == 0);
  REQUIRE(run_cli(config + b.string()) == 0);
  CHECK(slurp(a / "returns.csv") == slurp(b / "returns.csv"));
  CHECK(slurp(a / "stats.csv") == slurp(b / "stats.csv"));

  const fs::path c = dir_for("repro_c");
  REQUIRE(run_cli("run --T 400 --n 40 --seed 99 --out " + c.string()) == 0);
  CHECK(slurp(a / "returns.csv") != slurp(c / "returns.csv"));
}

TEST_CASE("config file applies and flags override") {
  const fs::path dir = dir_for("config_file");
  fs::create_directories(g_workdir);
  const fs::path file = g_workdir / "test.conf";
  {
    std::ofstream out(file);
    out << "# fixture config\n"
        << "T=100\n"
        << "n = 25\n"
        << "assets=1\n";
  }
  REQUIRE(run_cli("run --config " + file.string() + " --T 50 --out " + dir.string()) == 0);
  CHECK(line_count(dir / "returns.csv") == 51);

  const fs::path bad = g_workdir / "bad.conf";
  {
    std::ofstream out(bad);
    out << "this is not a key value line\n";
  }
  CHECK(run_cli("run --config " + bad.string()) == 1);
}

TEST_CASE("THRESIM_SEED overrides the configured seed") {
  const fs::path baseline = dir_for("env_baseline");
  REQUIRE(run_cli("run --T 200 --n 30 --seed 777 --out " + baseline.string()) == 0);

  setenv("THRESIM_SEED", "777", 1);
  const fs::path forced = dir_for("env_forced");
  const int rc = run_cli("run --T 200 --n 30 --seed 1 --out " + forced.string());
  unsetenv("THRESIM_SEED");
  REQUIRE(rc == 0);
  CHECK(slurp(forced / "returns.csv") == slurp(baseline / "returns.csv"));
}

TEST_CASE("a manifest's config reproduces the run byte-for-byte") {
  const fs::path first = dir_for("manifest_first");
  REQUIRE(run_cli("run --T 300 --n 45 --seed 31 --out " + first.string()) == 0);
  const fs::path second = dir_for("manifest_second");
  REQUIRE(run_cli("run --config " + (first / "config.resolved").string() + " --out " +
                  second.string()) == 0);
  CHECK(slurp(first / "returns.csv") == slurp(second / "returns.csv"));
  CHECK(slurp(first / "acf.csv") == slurp(second / "acf.csv"));
}

TEST_CASE("stats re-analyzes an existing returns file identically") {
  const fs::path source = dir_for("stats_source");
  REQUIRE(run_cli("run --T 600 --n 40 --seed 5 --out " + source.string()) == 0);
  const fs::path redo = dir_for("stats_redo");
  REQUIRE(run_cli("stats --returns " + (source / "returns.csv").string() + " --out " +
                  redo.string()) == 0);
  for (const char* name : {"stats.csv", "acf.csv", "vol.csv", "corr.csv"}) {
    CHECK(slurp(source / name) == slurp(redo / name));
  }
}

TEST_CASE("replicates get derived seeds and private directories") {
  const fs::path dir = dir_for("reps");
  REQUIRE(run_cli("run --T 100 --n 20 --replicates 3 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "rep000" / "returns.csv"));
  CHECK(fs::exists(dir / "rep001" / "returns.csv"));
  CHECK(fs::exists(dir / "rep002" / "returns.csv"));
  CHECK(slurp(dir / "rep000" / "returns.csv") != slurp(dir / "rep001" / "returns.csv"));
}

TEST_CASE("sweep lays out value and replicate directories plus a summary") {
  const fs::path dir = dir_for("sweep_beta");
  REQUIRE(run_cli("sweep --axis beta --values 0,1000,inf --T 300 --n 40 --replicates 2"
                  " --period_len 100 --out " +
                  dir.string()) == 0);
  for (const char* value : {"beta_0", "beta_1000", "beta_inf"}) {
    CHECK(fs::exists(dir / value / "rep000" / "returns.csv"));
    CHECK(fs::exists(dir / value / "rep001" / "returns.csv"));
  }
  const fs::path summary = dir / "sweep_summary.csv";
  REQUIRE(fs::exists(summary));
  CHECK(line_count(summary) == 7);  // header + 3 values x 2 replicates
  CHECK(header_of(summary).rfind("axis,value,replicate,seed", 0) == 0);
}

TEST_CASE("beta = 0 sweep matches the single-asset baseline column for column") {
  const fs::path single = dir_for("reduction_single");
  REQUIRE(run_cli("run --assets 1 --lambda 4 --T 400 --n 60 --seed 5 --out " +
                  single.string()) == 0);
  const fs::path sweep = dir_for("reduction_sweep");
  REQUIRE(run_cli("sweep --axis beta --values 0 --assets 2 --lambda 2 --T 400 --n 60"
                  " --seed 5 --init_mirror 1 --out " +
                  sweep.string()) == 0);
  const fs::path swept = sweep / "beta_0" / "rep000" / "returns.csv";
  const auto r1 = text_column(swept, "r1");
  const auto r2 = text_column(swept, "r2");
  const auto baseline = text_column(single / "returns.csv", "r1");
  REQUIRE(r1.size() == baseline.size());
  CHECK(r1 == baseline);
  CHECK(r2 == baseline);
}

TEST_CASE("sweeping s shifts the volatility-memory time like 1/s") {
  const fs::path dir = dir_for("sweep_s");
  REQUIRE(run_cli("sweep --axis s --values 0.0075,0.015,0.03 --T 30000 --warmup 5000"
                  " --seed 7 --out " +
                  dir.string()) == 0);
  const fs::path summary = dir / "sweep_summary.csv";
  const auto tau1 = text_column(summary, "tau_a1");
  const auto tau2 = text_column(summary, "tau_a2");
  REQUIRE(tau1.size() == 3);
  std::vector<double> mean_tau(3);
  for (int i = 0; i < 3; ++i) {
    mean_tau[i] = 0.5 * (std::stod(tau1[i]) + std::stod(tau2[i]));
  }
  CHECK(mean_tau[0] > mean_tau[1]);
  CHECK(mean_tau[1] > mean_tau[2]);
  CHECK(mean_tau[0] / mean_tau[2] > 2.0);
}

TEST_CASE("verify passes by default and fails the decoupled negative control") {
  const fs::path dir = dir_for("verify_ok");
  REQUIRE(run_cli("verify --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "verify_report.txt"));
  const std::string report = slurp(dir / "verify_report.txt");
  CHECK(report.find("PASS") != std::string::npos);
  CHECK(report.find("FAIL") == std::string::npos);

  const fs::path bad = dir_for("verify_decoupled");
  CHECK(run_cli("verify --coupled_updates 0 --out " + bad.string()) == 2);
  const std::string bad_report = slurp(bad / "verify_report.txt");
  CHECK(bad_report.find("FAIL") != std::string::npos);
}

TEST_CASE("verify holds in the no-heterogeneity limit s = 1") {
  const fs::path dir = dir_for("verify_s1");
  CHECK(run_cli("verify --s 1 --out " + dir.string()) == 0);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-thresim> [doctest options]\n");
    return 1;
  }
  g_cli = argv[1];
  g_workdir = fs::temp_directory_path() / "thresim_cli_tests";
  fs::create_directories(g_workdir);

  doctest::Context context;
  context.applyCommandLine(argc - 1, argv + 1);
  const int rc = context.run();
  fs::remove_all(g_workdir);
  return rc;
}
