#include "mjp/ffbs.hpp"

#include <cmath>
#include <limits>

namespace mjp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shared forward pass: normalized alpha vectors plus per-step max log-lik
// shifts and the accumulated log-normalizer.
struct ForwardPass {
  Eigen::MatrixXd alpha;     // (T+1) x N, row t normalized
  Eigen::VectorXd max_shift; // T+1
  double log_norm = 0.0;     // log of the product of normalizers through step T-1
};

double step_shift(const Eigen::MatrixXd& log_lik, const Eigen::VectorXd& alpha_row, int t) {
  double m = kNegInf;
  for (Eigen::Index s = 0; s < alpha_row.size(); ++s)
    if (alpha_row(s) > 0.0 && log_lik(t, s) > m) m = log_lik(t, s);
  if (m == kNegInf)
    throw model_error("observation sequence impossible under the model (forward pass died)");
  return m;
}

ForwardPass run_forward(const HmmProblem& p) {
  const int n = p.n_states();
  const int T = p.n_steps();
  ForwardPass fp;
  fp.alpha.resize(T + 1, n);
  fp.max_shift.resize(T + 1);
  fp.alpha.row(0) = p.pi0().probs().transpose();
  Eigen::VectorXd g(n), next(n);
  for (int t = 0; t < T; ++t) {
    fp.max_shift(t) = step_shift(p.log_lik(), fp.alpha.row(t).transpose(), t);
    for (int s = 0; s < n; ++s) {
      double e = p.log_lik()(t, s) - fp.max_shift(t);
      g(s) = e == kNegInf ? 0.0 : fp.alpha(t, s) * std::exp(e);
    }
    p.transition(t).apply(g, next);
    double norm = next.sum();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw model_error("observation sequence impossible under the model (forward pass died)");
    fp.alpha.row(t + 1) = next.transpose() / norm;
    fp.log_norm += std::log(norm) + fp.max_shift(t);
  }
  fp.max_shift(T) = step_shift(p.log_lik(), fp.alpha.row(T).transpose(), T);
  return fp;
}

}  // namespace

HmmProblem::HmmProblem(InitialDistribution pi0, std::vector<StochasticMatrix> matrix_pool,
                       std::vector<int> step_matrix, Eigen::MatrixXd log_lik)
    : pi0_(std::move(pi0)),
      pool_(std::move(matrix_pool)),
      step_matrix_(std::move(step_matrix)),
      log_lik_(std::move(log_lik)) {
  const int n = pi0_.n();
  require(log_lik_.cols() == n, "log_lik must have N columns");
  require(log_lik_.rows() == static_cast<Eigen::Index>(step_matrix_.size()) + 1,
          "log_lik must have T+1 rows");
  for (const auto& b : pool_) require(b.n() == n, "transition matrix size mismatch");
  for (int idx : step_matrix_)
    require(0 <= idx && idx < static_cast<int>(pool_.size()), "step matrix index out of range");
  for (Eigen::Index t = 0; t < log_lik_.rows(); ++t)
    for (Eigen::Index s = 0; s < n; ++s)
      require(!std::isnan(log_lik_(t, s)) && log_lik_(t, s) < std::numeric_limits<double>::infinity(),
              "log-likelihoods must be finite or -inf");
}

HmmProblem HmmProblem::homogeneous(InitialDistribution pi0, StochasticMatrix b,
                                   Eigen::MatrixXd log_lik) {
  std::vector<int> steps(static_cast<std::size_t>(log_lik.rows() - 1), 0);
  std::vector<StochasticMatrix> pool;
  pool.push_back(std::move(b));
  return HmmProblem(std::move(pi0), std::move(pool), std::move(steps), std::move(log_lik));
}

HmmSample ffbs_sample(const HmmProblem& problem, Rng& rng) {
  const int n = problem.n_states();
  const int T = problem.n_steps();
  ForwardPass fp = run_forward(problem);

  // Terminal draw from beta_T ~ alpha_T .* L_T.
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    double e = problem.log_lik()(T, s) - fp.max_shift(T);
    w[static_cast<std::size_t>(s)] = e == kNegInf ? 0.0 : fp.alpha(T, s) * std::exp(e);
  }
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0))
    throw model_error("observation sequence impossible under the model (terminal step)");
  HmmSample out;
  out.log_marginal = fp.log_norm + fp.max_shift(T) + std::log(total);
  out.states.assign(static_cast<std::size_t>(T) + 1, 0);
  out.states[static_cast<std::size_t>(T)] = rng.categorical(w);

  // Backward sampling: beta_t(s) ~ alpha_t(s) B_t(S_{t+1}, s) L_t(s).
  std::vector<int> support;
  std::vector<double> bw;
  for (int t = T - 1; t >= 0; --t) {
    support.clear();
    bw.clear();
    int next_state = out.states[static_cast<std::size_t>(t) + 1];
    problem.transition(t).for_each_in_row(next_state, [&](int s, double bval) {
      double e = problem.log_lik()(t, s) - fp.max_shift(t);
      double v = e == kNegInf ? 0.0 : fp.alpha(t, s) * std::exp(e) * bval;
      if (v > 0.0) {
        support.push_back(s);
        bw.push_back(v);
      }
    });
    if (support.empty())
      throw model_error("observation sequence impossible under the model (backward step)");
    out.states[static_cast<std::size_t>(t)] = support[static_cast<std::size_t>(rng.categorical(bw))];
  }
  return out;
}

FilteredMarginals forward_marginals(const HmmProblem& problem) {
  const int n = problem.n_states();
  const int T = problem.n_steps();
  ForwardPass fp = run_forward(problem);
  FilteredMarginals out;
  out.filtered.resize(T + 1, n);
  for (int t = 0; t <= T; ++t) {
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
      double e = problem.log_lik()(t, s) - fp.max_shift(t);
      double v = e == kNegInf ? 0.0 : fp.alpha(t, s) * std::exp(e);
      out.filtered(t, s) = v;
      total += v;
    }
    if (!(total > 0.0))
      throw model_error("observation sequence impossible under the model (filtering)");
    out.filtered.row(t) /= total;
    if (t == T) out.log_marginal = fp.log_norm + fp.max_shift(T) + std::log(total);
  }
  return out;
}

}  // namespace mjp
