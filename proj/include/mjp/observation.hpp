#ifndef MJP_OBSERVATION_HPP
#define MJP_OBSERVATION_HPP

#include <Eigen/Dense>
#include <vector>

#include "mjp/types.hpp"

namespace mjp {

// Interval likelihoods L_i(s) = log p(observations in [a,b) | S(t) = s on [a,b)).
// Windows are half-open; the final window of a sweep is closed on the right
// so that an observation exactly at t_end belongs somewhere (closed_right).
// Implementations must be additive over window splits:
//   L[a,c) = L[a,b) + L[b,c) for a < b < c.
class ObservationModel {
 public:
  virtual ~ObservationModel() = default;
  virtual int n_states() const = 0;
  virtual double interval_log_likelihood(int state, double a, double b,
                                         bool closed_right) const = 0;
};

// No data; every window contributes log-likelihood zero.
class FlatObservations final : public ObservationModel {
 public:
  explicit FlatObservations(int n_states) : n_(n_states) {}
  int n_states() const override { return n_; }
  double interval_log_likelihood(int, double, double, bool) const override { return 0.0; }

 private:
  int n_;
};

// Noisy snapshots X_j of the state at sorted times t_j, supplied as a
// per-observation row of log p(X_j | state).
class DiscreteObservations final : public ObservationModel {
 public:
  DiscreteObservations(std::vector<double> times, Eigen::MatrixXd log_lik);

  // Observed values are noisy state readings: correct with probability
  // p_correct, otherwise uniform over the other states.
  static DiscreteObservations noisy_state_readings(std::vector<double> times,
                                                   const std::vector<int>& values, int n_states,
                                                   double p_correct);
  // Noiseless readings (log-lik 0 for the read state, -inf elsewhere).
  static DiscreteObservations exact_readings(std::vector<double> times,
                                             const std::vector<int>& values, int n_states);

  int n_states() const override { return static_cast<int>(log_lik_.cols()); }
  double interval_log_likelihood(int state, double a, double b,
                                 bool closed_right) const override;

  const std::vector<double>& times() const { return times_; }
  const Eigen::MatrixXd& log_lik() const { return log_lik_; }

 private:
  std::vector<double> times_;
  Eigen::MatrixXd log_lik_;  // |times| x N
};

}  // namespace mjp

#endif
