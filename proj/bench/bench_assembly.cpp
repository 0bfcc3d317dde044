// Benchmark: serial vs OpenMP-parallel library assembly on a synthetic
// field, with a bitwise equality check between the two paths.
//
// Usage: bench_assembly [n_domains] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "wfr/assembly.hpp"
#include "wfr/domain.hpp"
#include "wfr/field.hpp"
#include "wfr/rng.hpp"
#include "wfr/terms.hpp"
#include "wfr/weights.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n_domains = 100;
  int repeats = 3;
  if (argc > 1) n_domains = static_cast<std::size_t>(std::atoi(argv[1]));
  if (argc > 2) repeats = std::atoi(argv[2]);
  if (n_domains == 0 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_assembly [n_domains] [repeats]\n");
    return 2;
  }

  wfr::Field2D field;
  field.values.resize(600, 600);
  field.delta_x = 0.2;
  field.delta_t = 1.0;
  wfr::GaussianSampler gaussian(12345);
  for (Eigen::Index j = 0; j < field.nt(); ++j)
    for (Eigen::Index i = 0; i < field.nx(); ++i)
      field.values(i, j) = gaussian.next();

  const std::vector<wfr::MonomialTerm> terms = wfr::default_ks_library();
  const std::vector<wfr::WeightSpec> weights =
      wfr::enumerate_weight_set(8, 8, 1, 2);
  const std::vector<wfr::IntegrationDomain> domains =
      wfr::sample_domains(n_domains, 38, 38, field.grid(), 99);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("field 600x600, %zu domains x %zu weights = %zu rows, "
              "%zu terms, %d thread(s)\n",
              domains.size(), weights.size(), domains.size() * weights.size(),
              terms.size(), threads);

  double serial_best = 1e300;
  double parallel_best = 1e300;
  wfr::LibraryMatrix serial, parallel;
  for (int r = 0; r < repeats; ++r) {
    auto start = std::chrono::steady_clock::now();
    serial = wfr::assemble_library_serial(field, terms, weights, domains);
    const double serial_time = seconds_since(start);
    if (serial_time < serial_best) serial_best = serial_time;

    start = std::chrono::steady_clock::now();
    parallel = wfr::assemble_library(field, terms, weights, domains);
    const double parallel_time = seconds_since(start);
    if (parallel_time < parallel_best) parallel_best = parallel_time;

    std::printf("  run %d: serial %.3f s, parallel %.3f s\n", r + 1,
                serial_time, parallel_time);
  }

  const bool identical = serial.entries == parallel.entries;
  std::printf("best serial %.3f s, best parallel %.3f s, speedup %.2fx, "
              "bitwise identical: %s\n",
              serial_best, parallel_best, serial_best / parallel_best,
              identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
