#ifndef MJP_FFBS_HPP
#define MJP_FFBS_HPP

#include <Eigen/Dense>
#include <vector>

#include "mjp/rng.hpp"
#include "mjp/stochastic_matrix.hpp"
#include "mjp/types.hpp"

namespace mjp {

// A discrete-time, possibly inhomogeneous HMM over steps 0..T. Step t has a
// log-likelihood row log_lik(t, .); the transition from step t to t+1 uses
// matrix_pool[step_matrix[t]]. Likelihoods are supplied in log space because
// interval likelihoods can be astronomically small; the forward pass keeps
// normalized vectors plus a running log-normalizer.
class HmmProblem {
 public:
  HmmProblem(InitialDistribution pi0, std::vector<StochasticMatrix> matrix_pool,
             std::vector<int> step_matrix, Eigen::MatrixXd log_lik);

  static HmmProblem homogeneous(InitialDistribution pi0, StochasticMatrix b,
                                Eigen::MatrixXd log_lik);

  int n_states() const { return pi0_.n(); }
  int n_steps() const { return static_cast<int>(step_matrix_.size()); }  // T
  const InitialDistribution& pi0() const { return pi0_; }
  const StochasticMatrix& transition(int t) const { return pool_[step_matrix_[t]]; }
  const Eigen::MatrixXd& log_lik() const { return log_lik_; }

 private:
  InitialDistribution pi0_;
  std::vector<StochasticMatrix> pool_;
  std::vector<int> step_matrix_;
  Eigen::MatrixXd log_lik_;
};

struct HmmSample {
  std::vector<int> states;  // length T+1
  double log_marginal;      // log p(O)
};

struct FilteredMarginals {
  Eigen::MatrixXd filtered;  // (T+1) x N, row t = p(S_t | O_0..O_t)
  double log_marginal;
};

// Exact posterior draw of (S_0..S_T) by forward filtering, backward sampling.
// Throws model_error when the observations are impossible under the model
// (all-zero forward vector).
HmmSample ffbs_sample(const HmmProblem& problem, Rng& rng);

FilteredMarginals forward_marginals(const HmmProblem& problem);

}  // namespace mjp

#endif
