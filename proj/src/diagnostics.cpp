#include "mjp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "mjp/stats.hpp"

namespace mjp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Degree-13 diagonal Pade coefficients.
const double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};

Eigen::MatrixXd expm_pade13(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m2 = m * m;
  Eigen::MatrixXd m4 = m2 * m2;
  Eigen::MatrixXd m6 = m4 * m2;
  Eigen::MatrixXd u =
      m * (m6 * (kPade13[13] * m6 + kPade13[11] * m4 + kPade13[9] * m2) + kPade13[7] * m6 +
           kPade13[5] * m4 + kPade13[3] * m2 + kPade13[1] * ident);
  Eigen::MatrixXd v = m6 * (kPade13[12] * m6 + kPade13[10] * m4 + kPade13[8] * m2) +
                      kPade13[6] * m6 + kPade13[4] * m4 + kPade13[2] * m2 + kPade13[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a, double t) {
  require(a.rows() == a.cols() && a.rows() >= 1, "matrix exponential needs a square matrix");
  require(std::isfinite(t), "matrix exponential needs finite time");
  for (Eigen::Index i = 0; i < a.size(); ++i)
    require(std::isfinite(a.data()[i]), "matrix exponential needs finite entries");

  Eigen::MatrixXd at = a * t;
  const double theta13 = 5.371920351148152;
  double norm = at.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    at /= std::pow(2.0, squarings);
  }
  Eigen::MatrixXd result = expm_pade13(at);
  for (int i = 0; i < squarings; ++i) result = result * result;
  // Tiny negative round-off (magnitude <= 1e-12) is clipped; anything a
  // generator produced beyond that would be a real error upstream.
  for (Eigen::Index i = 0; i < result.size(); ++i)
    if (result.data()[i] < 0.0 && result.data()[i] >= -1e-12) result.data()[i] = 0.0;
  return result;
}

SmoothedMarginals exact_smoothed_marginals(const RateMatrix& a, const InitialDistribution& pi0,
                                           const DiscreteObservations& obs,
                                           const TimeInterval& interval,
                                           const std::vector<double>& query_times) {
  const int n = a.n();
  require(n == pi0.n() && n == obs.n_states(), "dimension mismatch");
  require(n <= 16, "exact smoothing is capped at 16 states");
  const auto& times = obs.times();
  for (double t : times) require(interval.contains(t), "observation time outside the interval");
  for (double t : query_times) require(interval.contains(t), "query time outside the interval");

  const Eigen::MatrixXd dense_a = a.dense();
  const int m = static_cast<int>(times.size());

  // Per-observation likelihood vectors, shifted by their max for stability.
  std::vector<Eigen::VectorXd> lik(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    double mx = kNegInf;
    for (int s = 0; s < n; ++s) mx = std::max(mx, obs.log_lik()(j, s));
    Eigen::VectorXd l(n);
    for (int s = 0; s < n; ++s) {
      double e = obs.log_lik()(j, s) - mx;
      l(s) = e == kNegInf ? 0.0 : std::exp(e);
    }
    lik[static_cast<std::size_t>(j)] = l;
  }

  // Forward: fw[j] = normalized p(S(tau_j), X_{1..j}); log-normalizer tracked.
  std::vector<Eigen::VectorXd> fw(static_cast<std::size_t>(m));
  double log_marginal = 0.0;
  {
    Eigen::VectorXd v = pi0.probs();
    double prev_t = interval.t_start;
    for (int j = 0; j < m; ++j) {
      if (times[static_cast<std::size_t>(j)] > prev_t)
        v = matrix_exponential(dense_a, times[static_cast<std::size_t>(j)] - prev_t) * v;
      v = v.cwiseProduct(lik[static_cast<std::size_t>(j)]);
      double norm = v.sum();
      if (!(norm > 0.0)) throw model_error("observations impossible under the model");
      v /= norm;
      double mx = kNegInf;
      for (int s = 0; s < n; ++s) mx = std::max(mx, obs.log_lik()(j, s));
      log_marginal += std::log(norm) + mx;
      fw[static_cast<std::size_t>(j)] = v;
      prev_t = times[static_cast<std::size_t>(j)];
    }
  }

  // Backward: bk[j] ~ p(X_{j+1..m} | S(tau_j)), normalized per step.
  std::vector<Eigen::VectorXd> bk(static_cast<std::size_t>(m) + 1);
  bk[static_cast<std::size_t>(m)] = Eigen::VectorXd::Ones(n);
  for (int j = m - 1; j >= 0; --j) {
    Eigen::VectorXd w;
    if (j + 1 < m) {
      w = lik[static_cast<std::size_t>(j) + 1].cwiseProduct(bk[static_cast<std::size_t>(j) + 1]);
      double dt = times[static_cast<std::size_t>(j) + 1] - times[static_cast<std::size_t>(j)];
      w = dt > 0.0 ? Eigen::VectorXd(matrix_exponential(dense_a, dt).transpose() * w) : w;
    } else {
      w = Eigen::VectorXd::Ones(n);
    }
    double norm = w.maxCoeff();
    if (!(norm > 0.0)) throw model_error("observations impossible under the model");
    bk[static_cast<std::size_t>(j)] = w / norm;
  }

  SmoothedMarginals out;
  out.log_marginal = log_marginal;
  out.marginals.resize(static_cast<Eigen::Index>(query_times.size()), n);
  for (std::size_t q = 0; q < query_times.size(); ++q) {
    double t = query_times[q];
    // Last observation at or before t.
    int j = static_cast<int>(std::upper_bound(times.begin(), times.end(), t) - times.begin()) - 1;
    Eigen::VectorXd phi;
    double anchor = j >= 0 ? times[static_cast<std::size_t>(j)] : interval.t_start;
    const Eigen::VectorXd& base = j >= 0 ? fw[static_cast<std::size_t>(j)] : pi0.probs();
    phi = t > anchor ? Eigen::VectorXd(matrix_exponential(dense_a, t - anchor) * base) : base;
    Eigen::VectorXd psi;
    if (j + 1 < m) {
      Eigen::VectorXd w =
          lik[static_cast<std::size_t>(j) + 1].cwiseProduct(bk[static_cast<std::size_t>(j) + 1]);
      double dt = times[static_cast<std::size_t>(j) + 1] - t;
      psi = dt > 0.0 ? Eigen::VectorXd(matrix_exponential(dense_a, dt).transpose() * w) : w;
    } else {
      psi = Eigen::VectorXd::Ones(n);
    }
    Eigen::VectorXd marg = phi.cwiseProduct(psi);
    double norm = marg.sum();
    if (!(norm > 0.0)) throw model_error("query marginal vanished; observations inconsistent");
    out.marginals.row(static_cast<Eigen::Index>(q)) = (marg / norm).transpose();
  }
  return out;
}

EssResult effective_sample_size(const std::vector<double>& series) {
  const std::size_t n = series.size();
  require(n >= 10, "ESS needs a series of length >= 10");
  bool all_equal = true;
  for (double v : series)
    if (v != series[0]) {
      all_equal = false;
      break;
    }
  if (all_equal) return {static_cast<double>(n), true};
  // Anchor at the first element before centering: shifting every element by
  // an exactly representable constant then leaves c, and hence the ESS,
  // bit-identical.
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = series[i] - series[0];
  double m = stats::mean(c);
  for (std::size_t i = 0; i < n; ++i) c[i] -= m;
  double gamma0 = 0.0;
  for (double v : c) gamma0 += v * v;
  gamma0 /= static_cast<double>(n);
  if (gamma0 <= 0.0) return {static_cast<double>(n), true};

  auto rho = [&](std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) acc += c[i] * c[i + k];
    return acc / (static_cast<double>(n) * gamma0);
  };

  // Geyer initial positive sequence: sum adjacent-pair autocorrelations
  // while the pair sums stay positive.
  double tau = -1.0;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    double pair = rho(k) + rho(k + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  double ess = static_cast<double>(n) / std::max(tau, 1e-12);
  ess = std::min(ess, static_cast<double>(n));
  return {ess, false};
}

EssReport ess_report(const std::vector<std::vector<double>>& series, double wall_time_seconds) {
  require(!series.empty(), "ESS report needs at least one series");
  EssReport report;
  report.wall_time_seconds = wall_time_seconds;
  for (const auto& s : series) {
    EssResult r = effective_sample_size(s);
    report.ess.push_back(r.ess);
    if (r.constant) ++report.n_constant_series;
  }
  report.median_ess = stats::median(report.ess);
  report.ess_per_second = wall_time_seconds > 0.0 ? report.median_ess / wall_time_seconds : 0.0;
  return report;
}

RelativeErrorReport average_relative_error(const std::vector<double>& estimates,
                                           const std::vector<double>& references) {
  require(estimates.size() == references.size() && !estimates.empty(),
          "estimates/references size mismatch");
  RelativeErrorReport report;
  for (std::size_t j = 0; j < references.size(); ++j) {
    if (references[j] > 0.0) {
      double rel = std::abs(estimates[j] - references[j]) / references[j];
      report.per_statistic.push_back(rel);
      report.included.push_back(static_cast<int>(j));
      report.total += rel;
    } else {
      report.excluded_zero_reference.push_back(static_cast<int>(j));
    }
  }
  require(!report.included.empty(), "all reference statistics are zero");
  return report;
}

std::string to_json(const EssReport& report) {
  nlohmann::json j;
  j["ess"] = report.ess;
  j["median_ess"] = report.median_ess;
  j["wall_time_seconds"] = report.wall_time_seconds;
  j["ess_per_second"] = report.ess_per_second;
  j["n_constant_series"] = report.n_constant_series;
  return j.dump(2);
}

std::string to_json(const RelativeErrorReport& report) {
  nlohmann::json j;
  j["per_statistic"] = report.per_statistic;
  j["included"] = report.included;
  j["excluded_zero_reference"] = report.excluded_zero_reference;
  j["avg_relative_error"] = report.total;
  return j.dump(2);
}

}  // namespace mjp
