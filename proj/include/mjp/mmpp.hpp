#ifndef MJP_MMPP_HPP
#define MJP_MMPP_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mjp/bayes.hpp"
#include "mjp/gibbs.hpp"
#include "mjp/observation.hpp"
#include "mjp/types.hpp"

namespace mjp {

// Latent MJP plus per-state emission rates of the output Poisson process.
struct MmppModel {
  MmppModel(RateMatrix a, InitialDistribution pi0, Eigen::VectorXd emission_rates);
  RateMatrix a;
  InitialDistribution pi0;
  Eigen::VectorXd lambda;  // lambda_s >= 0; zero means a silent state
};

// Count likelihood over a window: |O_i| log lambda_s - lambda_s (b - a),
// with 0 log 0 = 0 and -inf when events hit a silent state.
double mmpp_interval_log_likelihood(int state, double a, double b, bool closed_right,
                                    const std::vector<double>& sorted_events,
                                    const Eigen::VectorXd& lambda);

// The ObservationModel the Gibbs kernel consumes: event times plus emission
// rates; window counting is a pair of binary searches.
class PoissonObservations final : public ObservationModel {
 public:
  PoissonObservations(std::vector<double> event_times, Eigen::VectorXd lambda);

  int n_states() const override { return static_cast<int>(lambda_.size()); }
  double interval_log_likelihood(int state, double a, double b,
                                 bool closed_right) const override;

  long count_in(double a, double b, bool closed_right) const;
  const std::vector<double>& events() const { return events_; }
  const Eigen::VectorXd& lambda() const { return lambda_; }

 private:
  std::vector<double> events_;
  Eigen::VectorXd lambda_;
};

// Latent path via Gillespie, then per-segment homogeneous Poisson events
// with rate lambda_{S(t)}. Returns the path and the sorted event times.
std::pair<Trajectory, std::vector<double>> mmpp_simulate(const MmppModel& model,
                                                         const TimeInterval& interval, Rng& rng);

// Per-state gamma priors on the emission rates; paper-style default is
// shape_s = s + 1 (0-based state index), rate 1.
struct EmissionPrior {
  Eigen::VectorXd shape;
  Eigen::VectorXd rate;

  static EmissionPrior paper_default(int n_states);
  void validate(int n_states) const;
};

// lambda_s ~ Gamma(shape_s + events while in s, rate_s + dwell in s).
Eigen::VectorXd sample_emission_posterior(const Trajectory& traj,
                                          const std::vector<double>& events,
                                          const EmissionPrior& prior, Rng& rng);

struct MmppBayesRun {
  std::vector<Eigen::MatrixXd> rate_samples;
  std::vector<Eigen::VectorXd> lambda_samples;
  std::vector<SufficientStats> stats;
  double mh_acceptance_rate = 1.0;
};

// Fully Bayesian MMPP inference: path sweep, conjugate A update, conjugate
// emission update, with omega recomputed from the current A each sweep.
MmppBayesRun mmpp_bayes_chain(const std::vector<double>& events, const TimeInterval& interval,
                              int n_states, const RatePrior& rate_prior,
                              const EmissionPrior& emission_prior, const InitialDistMode& mode,
                              const GibbsConfig& config);

}  // namespace mjp

#endif
