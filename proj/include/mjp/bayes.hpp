#ifndef MJP_BAYES_HPP
#define MJP_BAYES_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mjp/gibbs.hpp"
#include "mjp/types.hpp"

namespace mjp {

// Conjugate prior on a generator: |A_s| ~ Gamma(alpha1, alpha2) per state,
// transition profile (p_{s's}, s' != s) ~ Dirichlet(beta) per column.
struct RatePrior {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double beta = 1.0;                           // symmetric concentration
  std::optional<Eigen::VectorXd> beta_vector;  // length N-1, per off-diagonal slot

  void validate() const;
  // Concentrations for the off-diagonal targets of one column, in increasing
  // target order.
  Eigen::VectorXd column_concentrations(int n_states) const;
};

struct InitialDistMode {
  enum class Kind { fixed, stationary };
  Kind kind;
  std::optional<InitialDistribution> fixed_pi0;

  static InitialDistMode fixed(InitialDistribution pi0);
  static InitialDistMode stationary();
};

// Posterior hyperparameters under the conjugate update: per state s,
// |A_s| ~ Gamma(gamma_shape(s), gamma_rate(s)) and the off-diagonal profile
// of column s ~ Dirichlet(dirichlet.row(s) restricted to targets != s).
struct RatePosteriorParams {
  Eigen::VectorXd gamma_shape;
  Eigen::VectorXd gamma_rate;
  Eigen::MatrixXd dirichlet;  // (from, to), diagonal unused
};
RatePosteriorParams rate_posterior_params(const SufficientStats& stats, const RatePrior& prior);

// Draw A | stats from the conjugate posterior: |A_s| ~ Gamma(alpha1 + n_s,
// alpha2 + T_s), column profile ~ Dirichlet(beta + counts). Empty stats give
// a prior draw.
RateMatrix sample_rate_posterior(const SufficientStats& stats, const RatePrior& prior, Rng& rng);

// pi with A pi = 0, pi >= 0, sum pi = 1, by the bordered dense solve
// [A; 1^T] pi = [0; 1]. Reports non-uniqueness when rank(A) < N-1.
InitialDistribution stationary_distribution(const RateMatrix& a);

struct MhResult {
  RateMatrix a;
  bool accepted;
};

// Parameter update given the trajectory. In fixed mode the conjugate draw is
// a Gibbs step (always accepted). In stationary mode pi0 is the stationary
// distribution of A, so the conjugate draw is only a proposal, accepted with
// probability min(1, pi~(s0) / pi(s0)).
MhResult mh_rate_update(const RateMatrix& current, const Trajectory& traj,
                        const RatePrior& prior, const InitialDistMode& mode, Rng& rng);

struct BayesRun {
  std::vector<Eigen::MatrixXd> rate_samples;  // dense generator per kept sweep
  std::vector<SufficientStats> stats;
  double mh_acceptance_rate = 1.0;
};

// Alternates the path kernel K_A (omega recomputed from the current A every
// sweep) with the parameter update; A is resampled conditioned on (s0, S, T)
// only, never on the uniformized representation.
BayesRun full_bayes_chain(const ObservationModel& obs, const TimeInterval& interval,
                          const RatePrior& prior, const InitialDistMode& mode,
                          const GibbsConfig& config);

namespace detail {

// Accept/reject for the stationary-pi0 correction; ratios >= 1 never
// consume randomness, so acceptance there is deterministic.
bool mh_stationary_accept(const RateMatrix& current, const RateMatrix& proposal, int s0,
                          Rng& rng);

}  // namespace detail

}  // namespace mjp

#endif
