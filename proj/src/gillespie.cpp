#include "mjp/gillespie.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mjp {

Trajectory gillespie_sample(const RateMatrix& a, const InitialDistribution& pi0,
                            const TimeInterval& interval, Rng& rng) {
  require(a.n() == pi0.n(), "generator and initial distribution disagree on N");
  const int s0 = pi0.sample(rng);
  int s = s0;
  double t = interval.t_start;
  std::vector<double> times;
  std::vector<int> states;
  std::vector<double> weights;
  std::vector<int> targets;
  for (;;) {
    double exit = a.exit_rate(s);
    if (exit <= 0.0) break;  // absorbing
    double z = rng.exponential(exit);
    if (t + z > interval.t_end) break;
    t += z;
    weights.clear();
    targets.clear();
    a.for_each_out_rate(s, [&](int to, double rate) {
      targets.push_back(to);
      weights.push_back(rate);
    });
    if (targets.empty()) break;  // zero off-diagonals despite positive exit (tolerance slack)
    s = targets[static_cast<std::size_t>(rng.categorical(weights))];
    times.push_back(t);
    states.push_back(s);
  }
  return Trajectory(s0, std::move(times), std::move(states), interval, a.n());
}

double path_log_density(const Trajectory& traj, const RateMatrix& a,
                        const InitialDistribution& pi0) {
  require(traj.n_states() == a.n() && a.n() == pi0.n(), "dimension mismatch");
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (pi0.prob(traj.s0()) <= 0.0) return neg_inf;
  double log_p = std::log(pi0.prob(traj.s0()));
  int prev = traj.s0();
  for (int s : traj.states()) {
    double rate = a.entry(s, prev);
    if (rate <= 0.0) return neg_inf;
    log_p += std::log(rate);
    prev = s;
  }
  traj.for_each_segment(
      [&](double begin, double end, int state) { log_p -= (end - begin) * a.exit_rate(state); });
  return log_p;
}

SufficientStats sufficient_stats(const Trajectory& traj) {
  SufficientStats stats;
  stats.dwell_time = Eigen::VectorXd::Zero(traj.n_states());
  stats.transition_counts = Eigen::MatrixXi::Zero(traj.n_states(), traj.n_states());
  traj.for_each_segment(
      [&](double begin, double end, int state) { stats.dwell_time(state) += end - begin; });
  int prev = traj.s0();
  for (int s : traj.states()) {
    stats.transition_counts(s, prev) += 1;
    prev = s;
  }
  return stats;
}

}  // namespace mjp
