#include "mjp/observation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mjp {

DiscreteObservations::DiscreteObservations(std::vector<double> times, Eigen::MatrixXd log_lik)
    : times_(std::move(times)), log_lik_(std::move(log_lik)) {
  require(static_cast<Eigen::Index>(times_.size()) == log_lik_.rows(),
          "one log-likelihood row per observation time required");
  require(log_lik_.cols() >= 1, "observations need a positive state count");
  for (std::size_t j = 1; j < times_.size(); ++j)
    require(times_[j] >= times_[j - 1], "observation times must be sorted");
  for (Eigen::Index j = 0; j < log_lik_.rows(); ++j) {
    bool any_possible = false;
    for (Eigen::Index s = 0; s < log_lik_.cols(); ++s) {
      require(!std::isnan(log_lik_(j, s)) &&
                  log_lik_(j, s) < std::numeric_limits<double>::infinity(),
              "observation log-density must be finite or -inf");
      if (log_lik_(j, s) > -std::numeric_limits<double>::infinity()) any_possible = true;
    }
    require(any_possible, "each observation needs a finite log-density for some state");
  }
}

DiscreteObservations DiscreteObservations::noisy_state_readings(std::vector<double> times,
                                                                const std::vector<int>& values,
                                                                int n_states, double p_correct) {
  require(times.size() == values.size(), "times/values size mismatch");
  require(n_states >= 1, "need a positive state count");
  require(0.0 < p_correct && p_correct <= 1.0, "p_correct must be in (0, 1]");
  if (p_correct == 1.0) return exact_readings(std::move(times), values, n_states);
  double p_other = n_states > 1 ? (1.0 - p_correct) / (n_states - 1) : 0.0;
  Eigen::MatrixXd ll(values.size(), n_states);
  for (std::size_t j = 0; j < values.size(); ++j) {
    require(0 <= values[j] && values[j] < n_states, "observed value out of range");
    for (int s = 0; s < n_states; ++s)
      ll(static_cast<Eigen::Index>(j), s) = std::log(s == values[j] ? p_correct : p_other);
  }
  return DiscreteObservations(std::move(times), std::move(ll));
}

DiscreteObservations DiscreteObservations::exact_readings(std::vector<double> times,
                                                          const std::vector<int>& values,
                                                          int n_states) {
  require(times.size() == values.size(), "times/values size mismatch");
  Eigen::MatrixXd ll = Eigen::MatrixXd::Constant(values.size(), n_states,
                                                 -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < values.size(); ++j) {
    require(0 <= values[j] && values[j] < n_states, "observed value out of range");
    ll(static_cast<Eigen::Index>(j), values[j]) = 0.0;
  }
  return DiscreteObservations(std::move(times), std::move(ll));
}

double DiscreteObservations::interval_log_likelihood(int state, double a, double b,
                                                     bool closed_right) const {
  auto lo = std::lower_bound(times_.begin(), times_.end(), a);
  auto hi = closed_right ? std::upper_bound(times_.begin(), times_.end(), b)
                         : std::lower_bound(times_.begin(), times_.end(), b);
  double total = 0.0;
  for (auto it = lo; it != hi; ++it)
    total += log_lik_(static_cast<Eigen::Index>(it - times_.begin()), state);
  return total;
}

}  // namespace mjp
