#ifndef MJP_DIAGNOSTICS_HPP
#define MJP_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mjp/observation.hpp"
#include "mjp/types.hpp"

namespace mjp {

// exp(A t) by scaling-and-squaring with a diagonal Pade approximant. When the
// input is a generator the result is clipped at zero from below (entries are
// allowed to round to -1e-12 at worst) and column sums stay within 1e-9 of 1.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a, double t);

// Exact posterior state marginals at query times given discrete observations,
// by forward-backward over the observation times with exp(A delta) blocks.
// This is the small-instance reference the samplers are tested against;
// N is capped at 16 to keep the cubic cost from sneaking into larger runs.
struct SmoothedMarginals {
  Eigen::MatrixXd marginals;  // |query_times| x N
  double log_marginal;        // log p(X)
};
SmoothedMarginals exact_smoothed_marginals(const RateMatrix& a, const InitialDistribution& pi0,
                                           const DiscreteObservations& obs,
                                           const TimeInterval& interval,
                                           const std::vector<double>& query_times);

// ESS = n / (1 + 2 sum rho_k), autocorrelations truncated by Geyer's
// initial-positive-sequence rule, clipped to (0, n]. A zero-variance series
// is reported as ESS = n with the `constant` flag set.
struct EssResult {
  double ess;
  bool constant;
};
EssResult effective_sample_size(const std::vector<double>& series);

struct EssReport {
  std::vector<double> ess;
  double median_ess = 0.0;
  double wall_time_seconds = 0.0;
  double ess_per_second = 0.0;
  int n_constant_series = 0;
};
EssReport ess_report(const std::vector<std::vector<double>>& series, double wall_time_seconds);

// Sum of |estimate - reference| / reference over statistics with a positive
// reference; zero-reference statistics are excluded and listed.
struct RelativeErrorReport {
  std::vector<double> per_statistic;  // aligned with included indices
  std::vector<int> included;
  std::vector<int> excluded_zero_reference;
  double total = 0.0;
};
RelativeErrorReport average_relative_error(const std::vector<double>& estimates,
                                           const std::vector<double>& references);

std::string to_json(const EssReport& report);
std::string to_json(const RelativeErrorReport& report);

}  // namespace mjp

#endif
