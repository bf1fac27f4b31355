#include "mjp/gibbs.hpp"

namespace mjp {

void GibbsConfig::validate() const {
  require(omega_multiplier > 1.0, "omega multiplier must be > 1");
  require(n_burnin >= 0 && n_samples >= 0, "sweep counts must be >= 0");
}

namespace detail {

HmmProblem interval_problem(const UniformizedPath& path, const RateMatrix& a,
                            const InitialDistribution& pi0, const ObservationModel& obs) {
  const int n = a.n();
  const auto& w = path.grid_times();
  const int steps = static_cast<int>(w.size());
  Eigen::MatrixXd log_lik(steps + 1, n);
  for (int i = 0; i <= steps; ++i) {
    double lo = i == 0 ? path.interval().t_start : w[static_cast<std::size_t>(i) - 1];
    double hi = i == steps ? path.interval().t_end : w[static_cast<std::size_t>(i)];
    bool closed = i == steps;  // the final window owns t_end
    for (int s = 0; s < n; ++s)
      log_lik(i, s) = obs.interval_log_likelihood(s, lo, hi, closed);
  }
  return HmmProblem::homogeneous(pi0, subordinated_transition_matrix(a, path.omega()),
                                 std::move(log_lik));
}

Trajectory gibbs_kernel_core(const Trajectory& traj, const RateMatrix& a,
                             const InitialDistribution& pi0, const ObservationModel& obs,
                             double omega, Rng& rng) {
  VirtualJumps u = sample_virtual_jumps_allowing_equal(traj, a, omega, rng);
  UniformizedPath grid = augment(traj, u, omega);
  HmmProblem problem = interval_problem(grid, a, pi0, obs);
  HmmSample sample = ffbs_sample(problem, rng);
  UniformizedPath relabeled(sample.states.front(),
                            grid.grid_times(),
                            std::vector<int>(sample.states.begin() + 1, sample.states.end()),
                            grid.interval(), omega, a.n());
  return thin(relabeled);
}

}  // namespace detail

Trajectory gibbs_kernel(const Trajectory& traj, const RateMatrix& a,
                        const InitialDistribution& pi0, const ObservationModel& obs,
                        double omega, Rng& rng) {
  require(traj.n_states() == a.n() && a.n() == pi0.n() && a.n() == obs.n_states(),
          "dimension mismatch");
  // A zero generator has omega == 0: no grid dynamics, but FFBS still
  // resamples s0, which is the whole posterior in that case.
  require(omega > a.max_exit_rate() || (omega == 0.0 && a.max_exit_rate() == 0.0),
          "omega must be strictly greater than max_s |A_s|");
  return detail::gibbs_kernel_core(traj, a, pi0, obs, omega, rng);
}

ChainRun run_chain(const Trajectory& init, const RateMatrix& a, const InitialDistribution& pi0,
                   const ObservationModel& obs, const GibbsConfig& config) {
  config.validate();
  Rng rng(config.seed);
  double omega = config.omega_multiplier * a.max_exit_rate();
  ChainRun run;
  run.stats.reserve(static_cast<std::size_t>(config.n_samples));
  Trajectory traj = init;
  for (int sweep = 0; sweep < config.n_burnin + config.n_samples; ++sweep) {
    traj = gibbs_kernel(traj, a, pi0, obs, omega, rng);
    if (sweep >= config.n_burnin) {
      run.stats.push_back(sufficient_stats(traj));
      if (config.keep_paths) run.paths.push_back(traj);
    }
  }
  return run;
}

Trajectory initial_trajectory(const RateMatrix& a, const InitialDistribution& pi0,
                              const ObservationModel& obs, const TimeInterval& interval,
                              Rng& rng) {
  (void)obs;  // the default initializer ignores the data and draws from the prior
  return gillespie_sample(a, pi0, interval, rng);
}

}  // namespace mjp
