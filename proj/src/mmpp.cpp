#include "mjp/mmpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mjp/uniformization.hpp"

namespace mjp {

MmppModel::MmppModel(RateMatrix a_in, InitialDistribution pi0_in, Eigen::VectorXd emission_rates)
    : a(std::move(a_in)), pi0(std::move(pi0_in)), lambda(std::move(emission_rates)) {
  require(a.n() == pi0.n() && a.n() == static_cast<int>(lambda.size()),
          "MMPP components disagree on N");
  for (Eigen::Index s = 0; s < lambda.size(); ++s)
    require(std::isfinite(lambda(s)) && lambda(s) >= 0.0,
            "emission rates must be finite and >= 0");
}

namespace {

long count_events(const std::vector<double>& events, double a, double b, bool closed_right) {
  auto lo = std::lower_bound(events.begin(), events.end(), a);
  auto hi = closed_right ? std::upper_bound(events.begin(), events.end(), b)
                         : std::lower_bound(events.begin(), events.end(), b);
  return hi - lo;
}

}  // namespace

double mmpp_interval_log_likelihood(int state, double a, double b, bool closed_right,
                                    const std::vector<double>& sorted_events,
                                    const Eigen::VectorXd& lambda) {
  require(a < b || (a == b && closed_right), "window must have positive measure");
  long count = count_events(sorted_events, a, b, closed_right);
  double rate = lambda(state);
  if (count == 0) return -rate * (b - a);
  if (rate == 0.0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(count) * std::log(rate) - rate * (b - a);
}

PoissonObservations::PoissonObservations(std::vector<double> event_times, Eigen::VectorXd lambda)
    : events_(std::move(event_times)), lambda_(std::move(lambda)) {
  require(lambda_.size() >= 1, "need a positive state count");
  for (Eigen::Index s = 0; s < lambda_.size(); ++s)
    require(std::isfinite(lambda_(s)) && lambda_(s) >= 0.0,
            "emission rates must be finite and >= 0");
  for (std::size_t j = 1; j < events_.size(); ++j)
    require(events_[j] >= events_[j - 1], "event times must be sorted");
}

double PoissonObservations::interval_log_likelihood(int state, double a, double b,
                                                    bool closed_right) const {
  return mmpp_interval_log_likelihood(state, a, b, closed_right, events_, lambda_);
}

long PoissonObservations::count_in(double a, double b, bool closed_right) const {
  return count_events(events_, a, b, closed_right);
}

std::pair<Trajectory, std::vector<double>> mmpp_simulate(const MmppModel& model,
                                                         const TimeInterval& interval,
                                                         Rng& rng) {
  Trajectory traj = gillespie_sample(model.a, model.pi0, interval, rng);
  std::vector<double> events;
  traj.for_each_segment([&](double lo, double hi, int state) {
    auto seg = detail::poisson_segment_times(model.lambda(state), lo, hi, rng);
    events.insert(events.end(), seg.begin(), seg.end());
  });
  return {std::move(traj), std::move(events)};
}

EmissionPrior EmissionPrior::paper_default(int n_states) {
  EmissionPrior prior;
  prior.shape.resize(n_states);
  for (int s = 0; s < n_states; ++s) prior.shape(s) = static_cast<double>(s + 1);
  prior.rate = Eigen::VectorXd::Ones(n_states);
  return prior;
}

void EmissionPrior::validate(int n_states) const {
  require(shape.size() == n_states && rate.size() == n_states,
          "emission prior must have one (shape, rate) pair per state");
  for (int s = 0; s < n_states; ++s)
    require(shape(s) > 0.0 && rate(s) > 0.0, "emission prior hyperparameters must be > 0");
}

Eigen::VectorXd sample_emission_posterior(const Trajectory& traj,
                                          const std::vector<double>& events,
                                          const EmissionPrior& prior, Rng& rng) {
  const int n = traj.n_states();
  prior.validate(n);
  for (std::size_t j = 1; j < events.size(); ++j)
    require(events[j] >= events[j - 1], "event times must be sorted");
  Eigen::VectorXd event_count = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd dwell = Eigen::VectorXd::Zero(n);
  traj.for_each_segment([&](double lo, double hi, int state) {
    bool final_segment = hi == traj.interval().t_end;
    event_count(state) += static_cast<double>(count_events(events, lo, hi, final_segment));
    dwell(state) += hi - lo;
  });
  Eigen::VectorXd lambda(n);
  for (int s = 0; s < n; ++s)
    lambda(s) = rng.gamma(prior.shape(s) + event_count(s), prior.rate(s) + dwell(s));
  return lambda;
}

MmppBayesRun mmpp_bayes_chain(const std::vector<double>& events, const TimeInterval& interval,
                              int n_states, const RatePrior& rate_prior,
                              const EmissionPrior& emission_prior, const InitialDistMode& mode,
                              const GibbsConfig& config) {
  config.validate();
  rate_prior.validate();
  emission_prior.validate(n_states);
  for (double t : events) require(interval.contains(t), "event outside the interval");
  Rng rng(config.seed);

  SufficientStats empty;
  empty.dwell_time = Eigen::VectorXd::Zero(n_states);
  empty.transition_counts = Eigen::MatrixXi::Zero(n_states, n_states);
  RateMatrix a = sample_rate_posterior(empty, rate_prior, rng);
  Eigen::VectorXd lambda(n_states);
  for (int s = 0; s < n_states; ++s)
    lambda(s) = rng.gamma(emission_prior.shape(s), emission_prior.rate(s));
  InitialDistribution pi0 = mode.kind == InitialDistMode::Kind::fixed
                                ? *mode.fixed_pi0
                                : stationary_distribution(a);
  Trajectory traj = gillespie_sample(a, pi0, interval, rng);

  MmppBayesRun run;
  long accepted = 0, proposals = 0;
  for (int sweep = 0; sweep < config.n_burnin + config.n_samples; ++sweep) {
    PoissonObservations obs(events, lambda);
    double omega = config.omega_multiplier * a.max_exit_rate();
    traj = gibbs_kernel(traj, a, pi0, obs, omega, rng);
    MhResult update = mh_rate_update(a, traj, rate_prior, mode, rng);
    ++proposals;
    if (update.accepted) {
      ++accepted;
      a = update.a;
      if (mode.kind == InitialDistMode::Kind::stationary) pi0 = stationary_distribution(a);
    }
    lambda = sample_emission_posterior(traj, events, emission_prior, rng);
    if (sweep >= config.n_burnin) {
      run.rate_samples.push_back(a.dense());
      run.lambda_samples.push_back(lambda);
      run.stats.push_back(sufficient_stats(traj));
    }
  }
  run.mh_acceptance_rate =
      proposals > 0 ? static_cast<double>(accepted) / static_cast<double>(proposals) : 1.0;
  return run;
}

}  // namespace mjp
