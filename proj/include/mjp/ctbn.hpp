#ifndef MJP_CTBN_HPP
#define MJP_CTBN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mjp/ffbs.hpp"
#include "mjp/observation.hpp"
#include "mjp/types.hpp"

namespace mjp {

// Initial distribution over the joint state: either a product over nodes or
// an explicit joint table (node 0 fastest-varying in the flat index).
struct CtbnInitial {
  std::variant<std::vector<Eigen::VectorXd>, Eigen::VectorXd> dist;

  static CtbnInitial product(std::vector<Eigen::VectorXd> per_node);
  static CtbnInitial joint(Eigen::VectorXd table);
  static CtbnInitial uniform(const std::vector<int>& cardinalities);
};

// Directed graph (cycles allowed, no self-edges) with one conditional
// generator per node per parent configuration. Parent configurations are
// indexed mixed-radix over the node's sorted parent list, first parent
// fastest-varying.
class CtbnModel {
 public:
  struct Node {
    std::string name;
    int n_states;
  };

  CtbnModel(std::vector<Node> nodes, std::vector<std::pair<int, int>> edges,
            std::vector<std::vector<RateMatrix>> rate_tables, CtbnInitial pi0);

  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int k) const { return nodes_[static_cast<std::size_t>(k)]; }
  int n_states(int k) const { return nodes_[static_cast<std::size_t>(k)].n_states; }
  const std::vector<int>& parents(int k) const { return parents_[static_cast<std::size_t>(k)]; }
  const std::vector<int>& children(int k) const { return children_[static_cast<std::size_t>(k)]; }
  int n_parent_configs(int k) const {
    return static_cast<int>(rates_[static_cast<std::size_t>(k)].size());
  }
  const RateMatrix& rate(int k, int parent_config) const {
    return rates_[static_cast<std::size_t>(k)][static_cast<std::size_t>(parent_config)];
  }
  // Mixed-radix index of node k's parent configuration under a joint state.
  int parent_config_index(int k, const std::vector<int>& joint_state) const;
  // Stride of parent p inside node k's configuration index.
  int parent_stride(int k, int p) const;

  const CtbnInitial& initial() const { return pi0_; }
  std::vector<int> cardinalities() const;
  long product_space_size() const;

  std::vector<int> sample_initial(Rng& rng) const;
  // pi0(s_k | s_{-k}): the conditional the node sweep starts from.
  InitialDistribution initial_conditional(int k, const std::vector<int>& joint_state) const;
  // Flattened initial distribution over the product space.
  InitialDistribution initial_flat(long cap = 10000) const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<RateMatrix>> rates_;
  CtbnInitial pi0_;
};

// Sparse joint trajectory: one node changes per jump.
class CtbnTrajectory {
 public:
  CtbnTrajectory(std::vector<int> s0, std::vector<double> times, std::vector<int> nodes,
                 std::vector<int> states, TimeInterval interval,
                 std::vector<int> cardinalities);

  const std::vector<int>& s0() const { return s0_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<int>& nodes() const { return nodes_; }
  const std::vector<int>& states() const { return states_; }
  const TimeInterval& interval() const { return interval_; }
  const std::vector<int>& cardinalities() const { return cards_; }
  int n_jumps() const { return static_cast<int>(times_.size()); }

  std::vector<int> state_at(double t) const;
  // Node k's path as a plain trajectory on its own state space.
  Trajectory node_path(int k) const;

 private:
  std::vector<int> s0_;
  std::vector<double> times_;
  std::vector<int> nodes_;
  std::vector<int> states_;
  TimeInterval interval_;
  std::vector<int> cards_;
};

// Per-node observation series; nodes without observations use empty series.
class CtbnObservations {
 public:
  explicit CtbnObservations(std::vector<DiscreteObservations> per_node);
  static CtbnObservations none(const CtbnModel& model);

  int n_nodes() const { return static_cast<int>(per_node_.size()); }
  const DiscreteObservations& node(int k) const { return per_node_[static_cast<std::size_t>(k)]; }
  double node_interval_log_likelihood(int k, int state, double a, double b,
                                      bool closed_right) const {
    return per_node_[static_cast<std::size_t>(k)].interval_log_likelihood(state, a, b,
                                                                          closed_right);
  }

 private:
  std::vector<DiscreteObservations> per_node_;
};

// Forward simulation by the competing-exponentials race: every node draws a
// waiting time from its current conditional exit rate, the minimum wins.
CtbnTrajectory ctbn_simulate(const CtbnModel& model, const TimeInterval& interval, Rng& rng);

// Flatten to a single MJP on the product space (transitions change exactly
// one node). Guarded by a product-space cap.
std::pair<RateMatrix, InitialDistribution> amalgamate(const CtbnModel& model, long cap = 10000);

// Resample node k's path conditioned on its Markov blanket: virtual jumps
// from the piecewise dominating rate, inhomogeneous FFBS with per-segment
// B_i = I + A^{k,w_i}/Omega^{w_i} and child-trajectory likelihoods, thin,
// splice back.
CtbnTrajectory node_gibbs_kernel(const CtbnTrajectory& joint, int k, const CtbnModel& model,
                                 const CtbnObservations& obs, double k_multiplier, Rng& rng);

// One full sweep over nodes in ascending index order.
CtbnTrajectory ctbn_gibbs_sweep(const CtbnTrajectory& joint, const CtbnModel& model,
                                const CtbnObservations& obs, double k_multiplier, Rng& rng);

struct CtbnGibbsConfig {
  double omega_multiplier = 2.0;
  int n_burnin = 0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  bool random_scan = false;  // default is the fixed ascending sweep order

  void validate() const;
};

struct CtbnChainRun {
  // stats[sweep][node]
  std::vector<std::vector<SufficientStats>> stats;
  std::vector<CtbnTrajectory> paths;  // kept only when keep_paths
  bool keep_paths = false;
};

CtbnChainRun ctbn_run_chain(const CtbnTrajectory& init, const CtbnModel& model,
                            const CtbnObservations& obs, const CtbnGibbsConfig& config,
                            bool keep_paths = false);

// Two-node cyclic predator-prey CTBN, birth-death on {0..cap} per node:
// prey births alpha*x, prey deaths beta*x*y, predator births delta*x*y,
// predator deaths gamma*y; rates leaving the cap are clipped.
CtbnModel lotka_volterra_model(double alpha, double beta, double gamma, double delta, int cap);

// The predator-prey observation noise: p(X | S) proportional to
// 1 / (2^{|X-S|} + 1e-6), normalized over {0..cap}.
Eigen::MatrixXd power2_noise_log_lik(const std::vector<int>& observed_values, int n_states);

namespace detail {

// Piecewise parent-configuration segments of node k under a joint path.
struct ParentSegments {
  std::vector<double> breaks;   // t_start, interior breakpoints..., t_end
  std::vector<int> configs;     // one per segment
};
ParentSegments node_parent_segments(const CtbnModel& model, const CtbnTrajectory& joint, int k);

// FFBS instance for node k over a fixed candidate grid (exposed for the
// likelihood-locality tests; no RNG involved).
HmmProblem node_problem(const CtbnModel& model, const CtbnTrajectory& joint, int k,
                        const CtbnObservations& obs, const std::vector<double>& grid,
                        double k_multiplier);

}  // namespace detail

}  // namespace mjp

#endif
