#include <doctest.h>

#include <cmath>
#include <set>

#include "mjp/diagnostics.hpp"
#include "mjp/ensemble.hpp"
#include "mjp/gibbs.hpp"
#include "mjp/gillespie.hpp"
#include "mjp/stats.hpp"
#include "mjp/uniformization.hpp"
#include "oracles.hpp"

using namespace mjp;

TEST_SUITE_BEGIN("uniformization");

namespace {

RateMatrix three_state() {
  Eigen::MatrixXd a(3, 3);
  a << -1.0, 0.5, 1.0,   //
      0.4, -2.0, 1.0,    //
      0.6, 1.5, -2.0;
  return RateMatrix(a);
}

}  // namespace

TEST_CASE("subordinated matrix examples") {
  CHECK(subordinated_transition_matrix(RateMatrix(Eigen::MatrixXd::Zero(2, 2)), 1.0).entry(0, 0) ==
        1.0);
  Eigen::MatrixXd m(2, 2);
  m << -1.0, 1.0, 1.0, -1.0;
  StochasticMatrix b = subordinated_transition_matrix(RateMatrix(m), 2.0);
  for (int to = 0; to < 2; ++to)
    for (int from = 0; from < 2; ++from) CHECK(b.entry(to, from) == doctest::Approx(0.5));
  Eigen::MatrixXd fast(2, 2);
  fast << -3.0, 3.0, 3.0, -3.0;
  CHECK_THROWS_AS((void)subordinated_transition_matrix(RateMatrix{fast}, 2.0), model_error);
}

TEST_CASE("uniformized grid is Poisson(omega * length)") {
  RateMatrix a = three_state();
  InitialDistribution pi0 = InitialDistribution::uniform(3);
  const int n = 100000;
  auto counts = ensemble::map<double>(n, 31, [&](int, Rng& rng) {
    return static_cast<double>(
        sample_uniformized(a, pi0, TimeInterval(0, 2), 5.0, rng).grid_times().size());
  });
  double mean = stats::mean(counts);
  double se = std::sqrt(stats::variance(counts) / n);
  CHECK(std::abs(mean - 10.0) < 3.0 * se);
}

TEST_CASE("zero generator keeps V constant") {
  RateMatrix a(Eigen::MatrixXd::Zero(2, 2));
  Rng rng(3);
  UniformizedPath path = sample_uniformized(a, InitialDistribution::point_mass(2, 1),
                                            TimeInterval(0, 4), 3.0, rng);
  for (int v : path.grid_states()) CHECK(v == 1);
  CHECK(thin(path).n_jumps() == 0);
}

TEST_CASE("thinned uniformized sampling matches Gillespie marginals (distributional equivalence)") {
  RateMatrix a = three_state();
  InitialDistribution pi0(Eigen::Vector3d(0.5, 0.25, 0.25));
  Eigen::VectorXd expected = matrix_exponential(a.dense(), 1.0) * pi0.probs();
  std::vector<double> exp_vec(expected.data(), expected.data() + 3);
  const int n = 100000;
  for (double k : {1.0, 2.0}) {
    double omega = k * a.max_exit_rate();
    auto finals = ensemble::map<int>(n, 555 + static_cast<int>(k), [&](int, Rng& rng) {
      return thin(sample_uniformized(a, pi0, TimeInterval(0, 1), omega, rng)).final_state();
    });
    CHECK(stats::total_variation(ensemble::state_histogram(finals, 3), exp_vec) < 0.01);
  }
}

TEST_CASE("thinning drops exactly the self-transitions") {
  UniformizedPath path(0, {1.0, 2.0, 3.0, 4.0}, {0, 1, 1, 2}, TimeInterval(0, 5), 2.0, 3);
  Trajectory traj = thin(path);
  CHECK(traj.s0() == 0);
  CHECK(traj.times() == std::vector<double>{2.0, 4.0});
  CHECK(traj.states() == std::vector<int>{1, 2});
}

TEST_CASE("virtual jump sampling follows the thinned-process rate") {
  RateMatrix a = three_state();  // exit rates 1, 2, 2
  SUBCASE("rate omega - |A_s| = 0 means no virtual jumps in that state") {
    Trajectory constant(1, {}, {}, TimeInterval(0, 10), 3);
    Rng rng(2);
    VirtualJumps u = detail::sample_virtual_jumps_allowing_equal(constant, a, 2.0, rng);
    CHECK(u.times.empty());
  }
  SUBCASE("count mean is (omega - |A_s|) * length") {
    Trajectory constant(0, {}, {}, TimeInterval(0, 10), 3);  // |A_0| = 1, omega = 2
    const int n = 100000;
    auto counts = ensemble::map<double>(n, 44, [&](int, Rng& rng) {
      return static_cast<double>(sample_virtual_jumps(constant, a, 2.0 + 1.0, rng).times.size());
    });
    // rate = 3 - 1 = 2 over length 10 => mean 20
    double mean = stats::mean(counts);
    double se = std::sqrt(stats::variance(counts) / n);
    CHECK(std::abs(mean - 20.0) < 3.0 * se);
  }
  SUBCASE("strict domination is enforced") {
    Trajectory constant(0, {}, {}, TimeInterval(0, 1), 3);
    Rng rng(1);
    CHECK_THROWS_AS((void)sample_virtual_jumps(constant, a, 2.0, rng), model_error);
    CHECK_THROWS_AS((void)sample_virtual_jumps(constant, a, 1.5, rng), model_error);
  }
}

TEST_CASE("augment merges and validates compatibility") {
  Trajectory traj(0, {2.0}, {1}, TimeInterval(0, 4), 2);
  SUBCASE("hand merge") {
    VirtualJumps u{{1.0, 3.0}, {0, 1}};
    UniformizedPath path = augment(traj, u, 5.0);
    CHECK(path.grid_times() == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(path.grid_states() == std::vector<int>{0, 1, 1});
    CHECK(path.v0() == 0);
  }
  SUBCASE("empty virtual set reproduces the trajectory grid") {
    UniformizedPath path = augment(traj, VirtualJumps{}, 5.0);
    CHECK(path.grid_times() == traj.times());
    CHECK(path.grid_states() == traj.states());
  }
  SUBCASE("incompatible states are rejected") {
    VirtualJumps wrong{{1.0}, {1}};  // trajectory is in state 0 at t=1
    CHECK_THROWS_AS((void)augment(traj, wrong, 5.0), model_error);
  }
  SUBCASE("duplicate times are a hard error") {
    VirtualJumps dup{{2.0}, {1}};
    CHECK_THROWS_AS((void)augment(traj, dup, 5.0), numeric_error);
  }
}

TEST_CASE("thin is a left inverse of augment") {
  RateMatrix a = three_state();
  Rng rng(91);
  for (int i = 0; i < 200; ++i) {
    Trajectory traj = gillespie_sample(a, InitialDistribution::uniform(3), TimeInterval(0, 3), rng);
    VirtualJumps u = sample_virtual_jumps(traj, a, 2.0 * a.max_exit_rate(), rng);
    Trajectory back = thin(augment(traj, u, 2.0 * a.max_exit_rate()));
    CHECK(back.s0() == traj.s0());
    CHECK(back.times() == traj.times());
    CHECK(back.states() == traj.states());
  }
}

TEST_CASE("augmentation correctness: |W| under warm Gibbs sweeps is Poisson(omega T)") {
  // With no observations the chain's stationary law is the prior, so the
  // merged grid size from (trajectory, resampled virtual jumps) must match
  // the unconditional Poisson count of the uniformized construction.
  RateMatrix a = three_state();
  InitialDistribution pi0 = InitialDistribution::uniform(3);
  FlatObservations obs(3);
  const double len = 2.0;
  const double omega = 2.0 * a.max_exit_rate();  // 4
  Rng rng(2024);
  Trajectory traj = gillespie_sample(a, pi0, TimeInterval(0, len), rng);
  for (int warm = 0; warm < 50; ++warm) traj = gibbs_kernel(traj, a, pi0, obs, omega, rng);

  const int sweeps = 100000;
  std::vector<double> observed(40, 0.0);
  for (int i = 0; i < sweeps; ++i) {
    VirtualJumps u = sample_virtual_jumps(traj, a, omega, rng);
    long w = static_cast<long>(u.times.size()) + traj.n_jumps();
    observed[static_cast<std::size_t>(std::min<long>(w, 39))] += 1.0;
    UniformizedPath grid = augment(traj, u, omega);
    HmmProblem problem = detail::interval_problem(grid, a, pi0, obs);
    HmmSample sample = ffbs_sample(problem, rng);
    UniformizedPath relabeled(sample.states.front(), grid.grid_times(),
                              std::vector<int>(sample.states.begin() + 1, sample.states.end()),
                              grid.interval(), omega, 3);
    traj = thin(relabeled);
  }
  std::vector<double> expected(40, 0.0);
  for (int k = 0; k < 39; ++k) expected[static_cast<std::size_t>(k)] = sweeps * oracle::poisson_pmf(k, omega * len);
  double tail = sweeps;
  for (int k = 0; k < 39; ++k) tail -= expected[static_cast<std::size_t>(k)];
  expected[39] = tail;
  CHECK(stats::chi_square_gof_pvalue(observed, expected) > 0.001);
}

TEST_CASE("degenerate omega freezes the jump set") {
  // All exit rates equal and omega at the bound: virtual-jump intensity is
  // zero and B has zero diagonal, so the jump times can never change.
  Eigen::MatrixXd m(3, 3);
  m << -2.0, 1.0, 1.0,  //
      1.0, -2.0, 1.0,   //
      1.0, 1.0, -2.0;
  RateMatrix a(m);
  InitialDistribution pi0 = InitialDistribution::uniform(3);
  FlatObservations obs(3);
  Rng rng(77);
  Trajectory traj = gillespie_sample(a, pi0, TimeInterval(0, 5), rng);
  const std::vector<double> original = traj.times();
  REQUIRE(traj.n_jumps() > 0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    VirtualJumps u = detail::sample_virtual_jumps_allowing_equal(traj, a, a.max_exit_rate(), rng);
    CHECK(u.times.empty());
    traj = detail::gibbs_kernel_core(traj, a, pi0, obs, a.max_exit_rate(), rng);
    CHECK(traj.times() == original);
  }
}

TEST_SUITE_END();
