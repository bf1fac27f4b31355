#ifndef MJP_GIBBS_HPP
#define MJP_GIBBS_HPP

#include <cstdint>
#include <vector>

#include "mjp/ffbs.hpp"
#include "mjp/gillespie.hpp"
#include "mjp/observation.hpp"
#include "mjp/types.hpp"
#include "mjp/uniformization.hpp"

namespace mjp {

struct GibbsConfig {
  double omega_multiplier = 2.0;  // Omega = k * max_s |A_s|; k > 1 required
  int n_burnin = 0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  bool keep_paths = false;  // paths are memory-hungry; stats always kept

  void validate() const;
};

// One sweep of the blocked Gibbs kernel K_A: resample virtual jumps from the
// piecewise Poisson process with rate omega - |A_{S(t)}|, relabel the merged
// grid with FFBS (transition matrix I + A/omega, interval likelihoods from
// obs), and thin. Leaves p(s0, S, T | X) invariant.
Trajectory gibbs_kernel(const Trajectory& traj, const RateMatrix& a,
                        const InitialDistribution& pi0, const ObservationModel& obs,
                        double omega, Rng& rng);

struct ChainRun {
  std::vector<SufficientStats> stats;  // one entry per post-burn-in sweep
  std::vector<Trajectory> paths;       // filled when config.keep_paths
};

// Fixed-parameter chain: omega is computed once from A and the multiplier.
ChainRun run_chain(const Trajectory& init, const RateMatrix& a, const InitialDistribution& pi0,
                   const ObservationModel& obs, const GibbsConfig& config);

// Default initialization: a draw from the prior via Gillespie's algorithm.
Trajectory initial_trajectory(const RateMatrix& a, const InitialDistribution& pi0,
                              const ObservationModel& obs, const TimeInterval& interval,
                              Rng& rng);

namespace detail {

// Kernel body without the strict omega guard; omega == max_s |A_s| is the
// degenerate configuration whose frozen jump set the tests demonstrate.
Trajectory gibbs_kernel_core(const Trajectory& traj, const RateMatrix& a,
                             const InitialDistribution& pi0, const ObservationModel& obs,
                             double omega, Rng& rng);

// The FFBS instance of one sweep for a fixed grid (exposed for tests).
HmmProblem interval_problem(const UniformizedPath& path, const RateMatrix& a,
                            const InitialDistribution& pi0, const ObservationModel& obs);

}  // namespace detail

}  // namespace mjp

#endif
