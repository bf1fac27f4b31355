#ifndef MJP_STATS_HPP
#define MJP_STATS_HPP

#include <functional>
#include <vector>

namespace mjp::stats {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

double chi_square_sf(double statistic, int dof);

// Goodness-of-fit p-value; bins with expected count below `min_expected`
// are pooled into the smallest-expected neighbor-less "rest" bin first.
double chi_square_gof_pvalue(const std::vector<double>& observed,
                             const std::vector<double>& expected, double min_expected = 5.0);

// Two-sided Kolmogorov-Smirnov test of samples against a CDF (asymptotic
// p-value; samples need not be sorted).
double ks_test_pvalue(std::vector<double> samples, const std::function<double(double)>& cdf);

// Spearman rank correlation (average ranks on ties).
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);  // denominator n-1

// Monte Carlo standard error of the mean of a correlated series by the
// method of batch means.
double batch_means_se(const std::vector<double>& series, int n_batches = 20);

double quantile(std::vector<double> xs, double q);  // linear interpolation
double median(std::vector<double> xs);

// Ordinary least squares of y on x; returns (intercept, slope, r_squared).
struct LinearFit {
  double intercept;
  double slope;
  double r_squared;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Total variation distance between two distributions over the same support.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace mjp::stats

#endif
