// Times the serial reference engine against the OpenMP engine and checks
// they produce identical paths while doing it.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "thresim/market.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace thresim;

namespace {

double run_timed(const MarketParams& params, Backend backend, double* checksum) {
  const auto start = std::chrono::steady_clock::now();
  const ReturnsSeries series = run(params, {}, backend, false);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double sum = 0.0;
  for (double r : series.returns) sum += r;
  *checksum = sum;
  return seconds;
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t work = argc > 1 ? std::atoll(argv[1]) : 60000000;

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; omp backend falls back to serial\n");
#endif
  std::printf("two-asset market, beta = 1000, work ~ %lld agent-steps per row\n\n",
              static_cast<long long>(work));
  std::printf("%10s %10s %12s %12s %9s %14s\n", "agents", "steps", "serial [s]",
              "omp [s]", "speedup", "ns/agent-step");

  for (int n : {1500, 20000, 200000, 1000000}) {
    MarketParams params;
    params.n_agents = n;
    params.noise_std = 0.001;
    params.market_depth = 2.0;
    params.update_prob = 0.015;
    params.choice_intensity = 1000.0;
    params.n_assets = 2;
    params.horizon = std::max<std::int64_t>(work / n, 10);
    params.seed = 99;

    double sum_serial = 0.0;
    double sum_omp = 0.0;
    const double serial_s = run_timed(params, Backend::kSerial, &sum_serial);
    const double omp_s = run_timed(params, Backend::kOpenMP, &sum_omp);
    if (sum_serial != sum_omp) {
      std::printf("backend mismatch at n=%d (%.17g vs %.17g)\n", n, sum_serial, sum_omp);
      return 1;
    }
    const double agent_steps = static_cast<double>(n) * params.horizon;
    std::printf("%10d %10lld %12.3f %12.3f %9.2f %14.2f\n", n,
                static_cast<long long>(params.horizon), serial_s, omp_s,
                serial_s / omp_s, 1e9 * omp_s / agent_steps);
  }
  return 0;
}
