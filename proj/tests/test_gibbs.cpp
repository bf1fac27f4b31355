#include <doctest.h>

#include <chrono>
#include <cmath>

#include "mjp/diagnostics.hpp"
#include "mjp/gibbs.hpp"
#include "mjp/stats.hpp"

using namespace mjp;

TEST_SUITE_BEGIN("gibbs");

namespace {

RateMatrix symmetric2(double rate) {
  Eigen::MatrixXd a(2, 2);
  a << -rate, rate, rate, -rate;
  return RateMatrix(a);
}

RateMatrix three_state() {
  Eigen::MatrixXd a(3, 3);
  a << -1.2, 0.4, 0.8,  //
      0.7, -0.9, 0.6,   //
      0.5, 0.5, -1.4;
  return RateMatrix(a);
}

// Estimate posterior p(S(t) = s) per query time from kept paths, with a
// batch-means standard error.
struct MarginalEstimate {
  Eigen::MatrixXd mean;  // |queries| x N
  Eigen::MatrixXd se;
};

MarginalEstimate marginal_from_paths(const std::vector<Trajectory>& paths,
                                     const std::vector<double>& queries, int n) {
  MarginalEstimate est;
  est.mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(queries.size()), n);
  est.se = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(queries.size()), n);
  std::vector<double> series(paths.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (int s = 0; s < n; ++s) {
      for (std::size_t i = 0; i < paths.size(); ++i)
        series[i] = paths[i].state_at(queries[q]) == s ? 1.0 : 0.0;
      est.mean(static_cast<Eigen::Index>(q), s) = stats::mean(series);
      est.se(static_cast<Eigen::Index>(q), s) = stats::batch_means_se(series);
    }
  }
  return est;
}

}  // namespace

TEST_CASE("no observations, symmetric chain: dwell splits evenly") {
  RateMatrix a = symmetric2(1.0);
  InitialDistribution pi0 = InitialDistribution::uniform(2);
  FlatObservations obs(2);
  Rng rng(19);
  Trajectory init = gillespie_sample(a, pi0, TimeInterval(0, 4), rng);
  GibbsConfig config;
  config.omega_multiplier = 2.0;
  config.n_burnin = 50;
  config.n_samples = 10000;
  config.seed = 7;
  ChainRun run = run_chain(init, a, pi0, obs, config);
  std::vector<double> frac(run.stats.size());
  for (std::size_t i = 0; i < run.stats.size(); ++i)
    frac[i] = run.stats[i].dwell_time(0) / 4.0;
  double mean = stats::mean(frac);
  double se = stats::batch_means_se(frac);
  CHECK(std::abs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("noiseless endpoints: midpoint marginal matches the bridge oracle") {
  RateMatrix a = symmetric2(1.0);
  InitialDistribution pi0 = InitialDistribution::uniform(2);
  DiscreteObservations obs = DiscreteObservations::exact_readings({0.0, 2.0}, {0, 0}, 2);
  Rng rng(23);
  // Initialize from a path consistent with the endpoints.
  Trajectory init(0, {}, {}, TimeInterval(0, 2), 2);
  GibbsConfig config;
  config.n_burnin = 200;
  config.n_samples = 10000;
  config.seed = 29;
  config.keep_paths = true;
  ChainRun run = run_chain(init, a, pi0, obs, config);
  auto est = marginal_from_paths(run.paths, {1.0}, 2);
  auto sm = exact_smoothed_marginals(a, pi0, obs, TimeInterval(0, 2), {1.0});
  double diff = std::abs(est.mean(0, 0) - sm.marginals(0, 0));
  CHECK(diff < 3.0 * est.se(0, 0) + 1e-9);
  CHECK(diff < 0.02);
}

TEST_CASE("noisy observations: posterior marginals match the smoothing oracle") {
  RateMatrix a = three_state();
  InitialDistribution pi0(Eigen::Vector3d(0.5, 0.3, 0.2));
  DiscreteObservations obs =
      DiscreteObservations::noisy_state_readings({0.7, 2.4}, {2, 0}, 3, 0.75);
  std::vector<double> queries{0.0, 0.7, 1.5, 2.4, 3.0};
  Rng rng(31);
  Trajectory init = gillespie_sample(a, pi0, TimeInterval(0, 3), rng);
  GibbsConfig config;
  config.n_burnin = 500;
  config.n_samples = 10000;
  config.seed = 37;
  config.keep_paths = true;
  ChainRun run = run_chain(init, a, pi0, obs, config);
  auto est = marginal_from_paths(run.paths, queries, 3);
  auto sm = exact_smoothed_marginals(a, pi0, obs, TimeInterval(0, 3), queries);
  for (Eigen::Index q = 0; q < est.mean.rows(); ++q) {
    for (int s = 0; s < 3; ++s) {
      double diff = std::abs(est.mean(q, s) - sm.marginals(q, s));
      CHECK(diff < 3.0 * est.se(q, s) + 1e-9);
      CHECK(diff < 0.02);
    }
  }
}

TEST_CASE("chains are deterministic given the seed") {
  RateMatrix a = three_state();
  InitialDistribution pi0 = InitialDistribution::uniform(3);
  DiscreteObservations obs = DiscreteObservations::noisy_state_readings({1.0}, {1}, 3, 0.8);
  Rng rng(3);
  Trajectory init = gillespie_sample(a, pi0, TimeInterval(0, 3), rng);
  GibbsConfig config;
  config.n_burnin = 10;
  config.n_samples = 200;
  config.seed = 41;
  ChainRun run1 = run_chain(init, a, pi0, obs, config);
  ChainRun run2 = run_chain(init, a, pi0, obs, config);
  REQUIRE(run1.stats.size() == run2.stats.size());
  for (std::size_t i = 0; i < run1.stats.size(); ++i) {
    CHECK(run1.stats[i].dwell_time == run2.stats[i].dwell_time);
    CHECK(run1.stats[i].transition_counts == run2.stats[i].transition_counts);
  }
}

TEST_CASE("empty sample request returns empty output") {
  RateMatrix a = symmetric2(1.0);
  InitialDistribution pi0 = InitialDistribution::uniform(2);
  FlatObservations obs(2);
  Trajectory init(0, {}, {}, TimeInterval(0, 1), 2);
  GibbsConfig config;
  config.n_samples = 0;
  ChainRun run = run_chain(init, a, pi0, obs, config);
  CHECK(run.stats.empty());
  CHECK(run.paths.empty());
}

TEST_CASE("initial trajectory draws from the prior") {
  RateMatrix a = three_state();
  FlatObservations obs(3);
  Rng rng(43);
  Trajectory traj = initial_trajectory(a, InitialDistribution::point_mass(3, 2), obs,
                                       TimeInterval(0, 2), rng);
  CHECK(traj.s0() == 2);
  CHECK(traj.interval().t_start == 0.0);
  CHECK(traj.interval().t_end == 2.0);
}

TEST_CASE("impossible observations surface the FFBS error on the first sweep") {
  RateMatrix a = symmetric2(1.0);
  InitialDistribution pi0 = InitialDistribution::uniform(2);
  Eigen::MatrixXd impossible(1, 2);
  impossible << -std::numeric_limits<double>::infinity(), 0.0;
  DiscreteObservations obs({0.5}, impossible);
  // A second, contradictory one makes the sequence impossible for any path.
  Eigen::MatrixXd ll(2, 2);
  ll << -std::numeric_limits<double>::infinity(), 0.0,  //
      0.0, -std::numeric_limits<double>::infinity();
  DiscreteObservations contradictory({0.5, 0.5}, ll);
  Rng rng(47);
  Trajectory init = gillespie_sample(a, pi0, TimeInterval(0, 1), rng);
  GibbsConfig config;
  config.n_samples = 1;
  config.seed = 1;
  CHECK_THROWS_AS((void)run_chain(init, a, pi0, contradictory, config), model_error);
}

TEST_CASE("config and kernel guards") {
  GibbsConfig config;
  config.omega_multiplier = 1.0;
  CHECK_THROWS_AS(config.validate(), model_error);
  RateMatrix a = symmetric2(1.0);
  Trajectory init(0, {}, {}, TimeInterval(0, 1), 2);
  FlatObservations obs(2);
  Rng rng(1);
  CHECK_THROWS_AS(
      (void)gibbs_kernel(init, a, InitialDistribution::uniform(2), obs, 1.0, rng),
      model_error);  // omega == max exit, guard is strict
  CHECK_NOTHROW((void)gibbs_kernel(init, a, InitialDistribution::uniform(2), obs, 1.5, rng));
}

TEST_CASE("zero generator: kernel resamples s0 from the data") {
  RateMatrix a(Eigen::MatrixXd::Zero(2, 2));
  InitialDistribution pi0 = InitialDistribution::uniform(2);
  DiscreteObservations obs = DiscreteObservations::exact_readings({0.5}, {1}, 2);
  Trajectory init(0, {}, {}, TimeInterval(0, 1), 2);
  Rng rng(53);
  Trajectory out = gibbs_kernel(init, a, pi0, obs, 0.0, rng);
  CHECK(out.s0() == 1);
  CHECK(out.n_jumps() == 0);
}

TEST_CASE("per-sweep cost grows linearly in the omega multiplier") {
  RateMatrix a = three_state();
  InitialDistribution pi0 = InitialDistribution::uniform(3);
  FlatObservations obs(3);
  Rng rng(59);
  Trajectory init = gillespie_sample(a, pi0, TimeInterval(0, 20), rng);
  std::vector<double> ks{1.5, 2.0, 3.0, 5.0, 8.0};
  std::vector<double> per_sweep;
  for (double k : ks) {
    GibbsConfig config;
    config.omega_multiplier = k;
    config.n_burnin = 50;
    config.n_samples = 1500;
    config.seed = 61;
    std::vector<double> reps;
    for (int rep = 0; rep < 3; ++rep) {
      auto start = std::chrono::steady_clock::now();
      ChainRun run = run_chain(init, a, pi0, obs, config);
      auto stop = std::chrono::steady_clock::now();
      reps.push_back(std::chrono::duration<double>(stop - start).count() / config.n_samples);
    }
    per_sweep.push_back(stats::median(reps));
  }
  auto fit = stats::linear_fit(ks, per_sweep);
  CHECK(fit.slope > 0.0);
  CHECK(fit.r_squared > 0.9);
}

TEST_SUITE_END();
