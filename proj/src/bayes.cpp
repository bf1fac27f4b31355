#include "mjp/bayes.hpp"

#include <algorithm>
#include <cmath>

namespace mjp {

void RatePrior::validate() const {
  require(alpha1 > 0.0 && alpha2 > 0.0 && beta > 0.0, "prior hyperparameters must be > 0");
  if (beta_vector) {
    for (Eigen::Index i = 0; i < beta_vector->size(); ++i)
      require((*beta_vector)(i) > 0.0, "prior hyperparameters must be > 0");
  }
}

Eigen::VectorXd RatePrior::column_concentrations(int n_states) const {
  require(n_states >= 2, "conjugate column update needs N >= 2");
  if (beta_vector) {
    require(beta_vector->size() == n_states - 1, "beta vector must have N-1 entries");
    return *beta_vector;
  }
  return Eigen::VectorXd::Constant(n_states - 1, beta);
}

InitialDistMode InitialDistMode::fixed(InitialDistribution pi0) {
  return InitialDistMode{Kind::fixed, std::move(pi0)};
}

InitialDistMode InitialDistMode::stationary() {
  return InitialDistMode{Kind::stationary, std::nullopt};
}

RatePosteriorParams rate_posterior_params(const SufficientStats& stats, const RatePrior& prior) {
  prior.validate();
  const int n = stats.n();
  require(n >= 2, "posterior update needs N >= 2");
  RatePosteriorParams params;
  params.gamma_shape.resize(n);
  params.gamma_rate.resize(n);
  params.dirichlet = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd conc = prior.column_concentrations(n);
  for (int from = 0; from < n; ++from) {
    long n_from = 0;
    for (int to = 0; to < n; ++to)
      if (to != from) n_from += stats.transition_counts(to, from);
    params.gamma_shape(from) = prior.alpha1 + static_cast<double>(n_from);
    params.gamma_rate(from) = prior.alpha2 + stats.dwell_time(from);
    int slot = 0;
    for (int to = 0; to < n; ++to) {
      if (to == from) continue;
      params.dirichlet(from, to) =
          conc(slot++) + static_cast<double>(stats.transition_counts(to, from));
    }
  }
  return params;
}

RateMatrix sample_rate_posterior(const SufficientStats& stats, const RatePrior& prior,
                                 Rng& rng) {
  const int n = stats.n();
  RatePosteriorParams params = rate_posterior_params(stats, prior);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int from = 0; from < n; ++from) {
    double exit = rng.gamma(params.gamma_shape(from), params.gamma_rate(from));
    std::vector<double> alphas;
    alphas.reserve(static_cast<std::size_t>(n) - 1);
    for (int to = 0; to < n; ++to)
      if (to != from) alphas.push_back(params.dirichlet(from, to));
    std::vector<double> p = rng.dirichlet(alphas);
    int slot = 0;
    for (int to = 0; to < n; ++to) {
      if (to == from) continue;
      a(to, from) = exit * p[static_cast<std::size_t>(slot++)];
    }
    a(from, from) = -exit;
  }
  // Make columns sum to zero exactly despite the exit * p_i rounding.
  for (int from = 0; from < n; ++from) {
    double off = 0.0;
    for (int to = 0; to < n; ++to)
      if (to != from) off += a(to, from);
    a(from, from) = -off;
  }
  return RateMatrix(a);
}

InitialDistribution stationary_distribution(const RateMatrix& a) {
  const int n = a.n();
  Eigen::MatrixXd dense = a.dense();
  if (n > 1) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dense);
    qr.setThreshold(1e-9);
    require(qr.rank() >= n - 1,
            "stationary distribution is not unique (generator null space has dim > 1)");
  }
  Eigen::MatrixXd bordered(n + 1, n);
  bordered.topRows(n) = dense;
  bordered.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  Eigen::VectorXd pi = bordered.colPivHouseholderQr().solve(rhs);
  double residual = (dense * pi).cwiseAbs().maxCoeff();
  if (!(residual < 1e-9)) throw numeric_error("stationary solve residual exceeded 1e-9");
  for (int s = 0; s < n; ++s) {
    if (pi(s) < 0.0) {
      if (pi(s) < -1e-9) throw numeric_error("stationary distribution went negative");
      pi(s) = 0.0;
    }
  }
  double sum = pi.sum();
  if (!(sum > 0.0)) throw numeric_error("stationary distribution degenerated");
  return InitialDistribution(pi / sum);
}

namespace detail {

bool mh_stationary_accept(const RateMatrix& current, const RateMatrix& proposal, int s0,
                          Rng& rng) {
  InitialDistribution pi_cur = stationary_distribution(current);
  InitialDistribution pi_new = stationary_distribution(proposal);
  double denom = std::max(pi_cur.prob(s0), 1e-300);
  double ratio = pi_new.prob(s0) / denom;
  return ratio >= 1.0 || rng.uniform() < ratio;
}

}  // namespace detail

MhResult mh_rate_update(const RateMatrix& current, const Trajectory& traj,
                        const RatePrior& prior, const InitialDistMode& mode, Rng& rng) {
  SufficientStats stats = sufficient_stats(traj);
  RateMatrix proposal = sample_rate_posterior(stats, prior, rng);
  if (mode.kind == InitialDistMode::Kind::fixed) return {std::move(proposal), true};
  if (detail::mh_stationary_accept(current, proposal, traj.s0(), rng))
    return {std::move(proposal), true};
  return {current, false};
}

BayesRun full_bayes_chain(const ObservationModel& obs, const TimeInterval& interval,
                          const RatePrior& prior, const InitialDistMode& mode,
                          const GibbsConfig& config) {
  config.validate();
  prior.validate();
  const int n = obs.n_states();
  if (mode.kind == InitialDistMode::Kind::fixed)
    require(mode.fixed_pi0 && mode.fixed_pi0->n() == n, "fixed pi0 has the wrong length");
  Rng rng(config.seed);

  SufficientStats empty;
  empty.dwell_time = Eigen::VectorXd::Zero(n);
  empty.transition_counts = Eigen::MatrixXi::Zero(n, n);
  RateMatrix a = sample_rate_posterior(empty, prior, rng);  // prior draw
  InitialDistribution pi0 = mode.kind == InitialDistMode::Kind::fixed
                                ? *mode.fixed_pi0
                                : stationary_distribution(a);
  Trajectory traj = gillespie_sample(a, pi0, interval, rng);

  BayesRun run;
  long accepted = 0, proposals = 0;
  for (int sweep = 0; sweep < config.n_burnin + config.n_samples; ++sweep) {
    double omega = config.omega_multiplier * a.max_exit_rate();
    traj = gibbs_kernel(traj, a, pi0, obs, omega, rng);
    MhResult update = mh_rate_update(a, traj, prior, mode, rng);
    ++proposals;
    if (update.accepted) {
      ++accepted;
      a = update.a;
      if (mode.kind == InitialDistMode::Kind::stationary) pi0 = stationary_distribution(a);
    }
    if (sweep >= config.n_burnin) {
      run.rate_samples.push_back(a.dense());
      run.stats.push_back(sufficient_stats(traj));
    }
  }
  run.mh_acceptance_rate =
      proposals > 0 ? static_cast<double>(accepted) / static_cast<double>(proposals) : 1.0;
  return run;
}

}  // namespace mjp
