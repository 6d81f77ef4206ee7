// Benchmark: OpenMP kernels vs their serial reference implementations.
//
// Two kernels are parallelized in the library: bottleneck subset enumeration
// and Monte Carlo trial loops. Both are required to produce bit-identical
// results in either mode; this tool times them side by side and verifies
// that contract on the way.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "specnoise/bottleneck.hpp"
#include "specnoise/chain.hpp"
#include "specnoise/noise.hpp"
#include "specnoise/simulate.hpp"
#include "specnoise/spectral.hpp"

using namespace specnoise;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void report(const std::string& name, double serial_s, double parallel_s,
            bool identical) {
  std::printf("%-34s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
              name.c_str(), serial_s, parallel_s,
              parallel_s > 0.0 ? serial_s / parallel_s : 0.0,
              identical ? "bit-identical" : "MISMATCH");
}

void bench_enumeration(const Chain& chain, const std::string& name) {
  auto t0 = std::chrono::steady_clock::now();
  CutReport serial = exact_bottleneck_serial(chain);
  double serial_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  CutReport parallel = exact_bottleneck(chain, 24, RunMode::parallel);
  double parallel_s = seconds_since(t0);

  bool identical = serial.subset == parallel.subset &&
                   serial.phi == parallel.phi &&
                   serial.pi_mass == parallel.pi_mass &&
                   serial.boundary_flow == parallel.boundary_flow;
  report("enumerate " + name, serial_s, parallel_s, identical);
}

void bench_mc(const Chain& chain, const std::string& name,
              std::int64_t trials) {
  SpectralDecomposition dec = decompose(chain);
  Observable f = random_subset_indicator(chain, chain.size() / 2, 7);
  double t = dec.relaxation_time;

  auto t0 = std::chrono::steady_clock::now();
  TrajectoryEstimate serial =
      estimate_cov(chain, f, t, trials, 42, RunMode::serial);
  double serial_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  TrajectoryEstimate parallel =
      estimate_cov(chain, f, t, trials, 42, RunMode::parallel);
  double parallel_s = seconds_since(t0);

  bool identical = serial.estimate == parallel.estimate &&
                   serial.std_error == parallel.std_error;
  report("mc cov " + name, serial_s, parallel_s, identical);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  bench_enumeration(make_family({Family::cycle, 10, 0}), "cycle(10), 20 states");
  bench_enumeration(make_family({Family::hypercube_rerandomize, 4, 0}),
                    "rerandomize(4), 16 states");
  bench_enumeration(make_family({Family::glued_cliques, 4, 0}),
                    "glued_cliques(4), 20 states");

  bench_mc(make_family({Family::cycle, 8, 0}), "cycle(8)", 200000);
  bench_mc(make_family({Family::hypercube_rerandomize, 6, 0}),
           "rerandomize(6)", 100000);
  bench_mc(make_family({Family::slice_exclusion, 8, 2}), "slice(8,2)", 100000);
  return 0;
}
