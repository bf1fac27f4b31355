#include "mjp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mjp/errors.hpp"

namespace mjp::stats {

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw model_error("gamma_p requires a > 0");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double chi_square_sf(double statistic, int dof) {
  if (dof <= 0) throw model_error("chi-square needs dof >= 1");
  if (statistic <= 0.0) return 1.0;
  if (statistic < 0.5 * dof + 1.0) return 1.0 - gamma_p(0.5 * dof, 0.5 * statistic);
  return gamma_q_contfrac(0.5 * dof, 0.5 * statistic);
}

double chi_square_gof_pvalue(const std::vector<double>& observed,
                             const std::vector<double>& expected, double min_expected) {
  require(observed.size() == expected.size() && !observed.empty(),
          "observed/expected size mismatch");
  double obs_kept = 0.0, exp_kept = 0.0;
  double obs_pool = 0.0, exp_pool = 0.0;
  double statistic = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] >= min_expected) {
      statistic += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
      obs_kept += observed[i];
      exp_kept += expected[i];
      ++bins;
    } else {
      obs_pool += observed[i];
      exp_pool += expected[i];
    }
  }
  if (exp_pool > 0.0) {
    statistic += (obs_pool - exp_pool) * (obs_pool - exp_pool) / exp_pool;
    ++bins;
  }
  require(bins >= 2, "chi-square needs at least 2 usable bins");
  return chi_square_sf(statistic, bins - 1);
}

double ks_test_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf) {
  require(samples.size() >= 5, "KS test needs at least 5 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * sign * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    sign = -sign;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

namespace {
std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    double avg = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "spearman needs matched series, n >= 2");
  auto rx = ranks(x);
  auto ry = ranks(y);
  double mx = mean(rx), my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  require(sxx > 0.0 && syy > 0.0, "spearman undefined for constant series");
  return sxy / std::sqrt(sxx * syy);
}

double mean(const std::vector<double>& xs) {
  require(!xs.empty(), "mean of empty series");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
  require(xs.size() >= 2, "variance needs n >= 2");
  double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

double batch_means_se(const std::vector<double>& series, int n_batches) {
  require(n_batches >= 2, "batch means needs >= 2 batches");
  require(series.size() >= static_cast<std::size_t>(2 * n_batches),
          "series too short for batch means");
  std::size_t batch = series.size() / static_cast<std::size_t>(n_batches);
  std::vector<double> bmeans(static_cast<std::size_t>(n_batches));
  for (int b = 0; b < n_batches; ++b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < batch; ++i) acc += series[b * batch + i];
    bmeans[static_cast<std::size_t>(b)] = acc / static_cast<double>(batch);
  }
  return std::sqrt(variance(bmeans) / static_cast<double>(n_batches));
}

double quantile(std::vector<double> xs, double q) {
  require(!xs.empty(), "quantile of empty series");
  require(0.0 <= q && q <= 1.0, "quantile level must be in [0,1]");
  std::sort(xs.begin(), xs.end());
  double pos = q * static_cast<double>(xs.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= xs.size()) return xs.back();
  double frac = pos - static_cast<double>(lo);
  return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "linear fit needs matched series, n >= 2");
  double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, "linear fit undefined for constant x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  require(p.size() == q.size(), "TV distance needs equal supports");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

}  // namespace mjp::stats
