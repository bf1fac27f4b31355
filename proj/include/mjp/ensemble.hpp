#ifndef MJP_ENSEMBLE_HPP
#define MJP_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mjp/rng.hpp"

namespace mjp::ensemble {

// Replicate-level parallelism is the only parallelism in this codebase: a
// chain is sequential, but replicates are independent given their seeds.
// Replicate r always uses Rng(base_seed + r), so results are identical
// across schedules and thread counts; the serial runner is the reference
// the parallel one is tested against.

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <typename Body>
void run_serial(int n_replicates, std::uint64_t base_seed, Body&& body) {
  for (int r = 0; r < n_replicates; ++r) {
    Rng rng(base_seed + static_cast<std::uint64_t>(r));
    body(r, rng);
  }
}

template <typename Body>
void run_parallel(int n_replicates, std::uint64_t base_seed, Body&& body, int n_threads = 0) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(n_threads > 0 ? n_threads \
                                                                     : omp_get_max_threads())
  for (int r = 0; r < n_replicates; ++r) {
    Rng rng(base_seed + static_cast<std::uint64_t>(r));
    body(r, rng);
  }
#else
  (void)n_threads;
  run_serial(n_replicates, base_seed, body);
#endif
}

// results[r] = body(r, rng) with the derived-seed convention above.
template <typename T, typename Body>
std::vector<T> map(int n_replicates, std::uint64_t base_seed, Body&& body, bool parallel = true,
                   int n_threads = 0) {
  std::vector<T> results(static_cast<std::size_t>(n_replicates));
  auto fill = [&](int r, Rng& rng) { results[static_cast<std::size_t>(r)] = body(r, rng); };
  if (parallel)
    run_parallel(n_replicates, base_seed, fill, n_threads);
  else
    run_serial(n_replicates, base_seed, fill);
  return results;
}

// Normalized histogram of state draws; the workhorse of the marginal
// agreement checks.
inline std::vector<double> state_histogram(const std::vector<int>& draws, int n_states) {
  std::vector<double> h(static_cast<std::size_t>(n_states), 0.0);
  for (int s : draws) h[static_cast<std::size_t>(s)] += 1.0;
  for (double& v : h) v /= static_cast<double>(draws.size());
  return h;
}

}  // namespace mjp::ensemble

#endif
