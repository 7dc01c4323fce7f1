// Compares the serial reference paths against the OpenMP kernels on a
// mid-sized network and checks that both produce identical results.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "ccm/elevate.hpp"
#include "ccm/miso.hpp"
#include "ccm/model.hpp"
#include "ccm/phy.hpp"
#include "ccm/pipeline.hpp"
#include "ccm/verify.hpp"

using namespace ccm;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("CCMIMO_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) omp_set_num_threads(n);
  }
  int verify_reps = argc > 1 ? std::atoi(argv[1]) : 200;
  int sim_seeds = argc > 2 ? std::atoi(argv[2]) : 40;

  const NetworkConfig config = validate_config(10, 9, 3, 10, Rational(1));
  const DeliveryScheme elevated =
      elevate_scheme(cyclic_t1_scheduler(virtual_config(config), default_demands(config)), config.G);
  std::printf("scheme: K=%d L=%d G=%d, %zu transmissions, %zu terms each, %d threads\n", config.K,
              config.L, config.G, elevated.transmissions.size(), elevated.transmissions[0].terms.size(),
              omp_get_max_threads());

  VerifyOptions serial_opts{VerifyMode::kStrict, false};
  VerifyOptions parallel_opts{VerifyMode::kStrict, true};
  VerificationReport serial_report, parallel_report;

  auto start = Clock::now();
  for (int i = 0; i < verify_reps; ++i) serial_report = check_scheme(elevated, serial_opts);
  const double verify_serial_ms = ms_since(start);
  start = Clock::now();
  for (int i = 0; i < verify_reps; ++i) parallel_report = check_scheme(elevated, parallel_opts);
  const double verify_parallel_ms = ms_since(start);
  const bool verify_same = serial_report == parallel_report;
  std::printf("verify   x%-4d serial %8.1f ms   openmp %8.1f ms   speedup %4.2fx   identical=%s\n",
              verify_reps, verify_serial_ms, verify_parallel_ms, verify_serial_ms / verify_parallel_ms,
              verify_same ? "yes" : "NO");

  SimulationReport sim_serial, sim_parallel;
  double sim_serial_ms = 0, sim_parallel_ms = 0;
  bool sim_same = true;
  for (int pass = 0; pass < 2; ++pass) {
    const bool parallel = pass == 1;
    start = Clock::now();
    for (int seed = 0; seed < sim_seeds; ++seed) {
      const ChannelRealization channel = sample_channels(elevated.config, seed);
      SimulationOptions options;
      options.seed = seed;
      options.noise_variance = 1e-3;
      options.parallel = parallel;
      SimulationReport report = simulate(elevated, channel, options);
      if (parallel) {
        sim_parallel = std::move(report);
      } else {
        sim_serial = std::move(report);
      }
    }
    (parallel ? sim_parallel_ms : sim_serial_ms) = ms_since(start);
    if (parallel) sim_same = sim_serial == sim_parallel;
  }
  std::printf("simulate x%-4d serial %8.1f ms   openmp %8.1f ms   speedup %4.2fx   identical=%s\n",
              sim_seeds, sim_serial_ms, sim_parallel_ms, sim_serial_ms / sim_parallel_ms,
              sim_same ? "yes" : "NO");

  return verify_same && sim_same ? 0 : 1;
}
