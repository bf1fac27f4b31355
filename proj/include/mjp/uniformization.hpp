#ifndef MJP_UNIFORMIZATION_HPP
#define MJP_UNIFORMIZATION_HPP

#include <vector>

#include "mjp/rng.hpp"
#include "mjp/stochastic_matrix.hpp"
#include "mjp/types.hpp"

namespace mjp {

// The redundant path representation (v0, V, W): grid times W from a rate
// Omega Poisson process, states V from the subordinated chain B = I + A/Omega.
// Self-transitions ("virtual jumps") are allowed.
class UniformizedPath {
 public:
  UniformizedPath(int v0, std::vector<double> grid_times, std::vector<int> grid_states,
                  TimeInterval interval, double omega, int n_states);

  int v0() const { return v0_; }
  const std::vector<double>& grid_times() const { return times_; }
  const std::vector<int>& grid_states() const { return states_; }
  const TimeInterval& interval() const { return interval_; }
  double omega() const { return omega_; }
  int n_states() const { return n_states_; }

 private:
  int v0_;
  std::vector<double> times_;
  std::vector<int> states_;
  TimeInterval interval_;
  double omega_;
  int n_states_;
};

// Self-transition times for a given trajectory; states[j] is the
// trajectory's state at times[j].
struct VirtualJumps {
  std::vector<double> times;
  std::vector<int> states;
};

// B = I + A/omega. Rejects omega < max_s |A_s|.
StochasticMatrix subordinated_transition_matrix(const RateMatrix& a, double omega);

// Draw (v0, V, W): W a homogeneous Poisson(omega) grid on the interval,
// v0 ~ pi0, v_i from column v_{i-1} of B.
UniformizedPath sample_uniformized(const RateMatrix& a, const InitialDistribution& pi0,
                                   const TimeInterval& interval, double omega, Rng& rng);

// Drop self-transitions, keeping the times where the state changes.
Trajectory thin(const UniformizedPath& path);

// Conditional virtual jumps given a trajectory: an inhomogeneous Poisson
// process with piecewise rate omega - |A_{S(t)}|. Requires omega strictly
// greater than max_s |A_s| (equality freezes the sampler's jump set).
VirtualJumps sample_virtual_jumps(const Trajectory& traj, const RateMatrix& a, double omega,
                                  Rng& rng);

// Merge T with the virtual jump times into the uniformized representation.
// Duplicate times are a hard error: they have probability zero under a
// continuous clock, so hitting one means the RNG streams are misused.
UniformizedPath augment(const Trajectory& traj, const VirtualJumps& virtual_jumps, double omega);

namespace detail {

// Homogeneous Poisson(rate) event times on [a, b): count then sorted uniforms.
std::vector<double> poisson_segment_times(double rate, double a, double b, Rng& rng);

// Test/diagnostic hook: as sample_virtual_jumps but tolerating
// omega == max_s |A_s| (used to demonstrate the degenerate lock-in).
VirtualJumps sample_virtual_jumps_allowing_equal(const Trajectory& traj, const RateMatrix& a,
                                                 double omega, Rng& rng);

}  // namespace detail

}  // namespace mjp

#endif
