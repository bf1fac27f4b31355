#ifndef MJP_GILLESPIE_HPP
#define MJP_GILLESPIE_HPP

#include "mjp/rng.hpp"
#include "mjp/types.hpp"

namespace mjp {

// Forward-simulate an MJP path: exponential holding times with rate |A_s|,
// next state drawn proportional to the rates out of the current state.
// Absorbing states (|A_s| = 0) simply end the jump sequence.
Trajectory gillespie_sample(const RateMatrix& a, const InitialDistribution& pi0,
                            const TimeInterval& interval, Rng& rng);

// log pi0(s0) + sum_i log A(s_i, s_{i-1}) - integral |A_{S(t)}| dt, the
// integral in closed form over the constant segments. Returns -infinity for
// paths through zero-rate transitions or a zero-probability initial state.
double path_log_density(const Trajectory& traj, const RateMatrix& a,
                        const InitialDistribution& pi0);

SufficientStats sufficient_stats(const Trajectory& traj);

}  // namespace mjp

#endif
