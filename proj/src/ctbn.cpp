#include "mjp/ctbn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "mjp/gillespie.hpp"
#include "mjp/uniformization.hpp"

namespace mjp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- CtbnInitial

CtbnInitial CtbnInitial::product(std::vector<Eigen::VectorXd> per_node) {
  require(!per_node.empty(), "product initial distribution needs >= 1 node");
  return CtbnInitial{std::move(per_node)};
}

CtbnInitial CtbnInitial::joint(Eigen::VectorXd table) {
  require(table.size() >= 1, "joint initial table must be nonempty");
  return CtbnInitial{std::move(table)};
}

CtbnInitial CtbnInitial::uniform(const std::vector<int>& cardinalities) {
  std::vector<Eigen::VectorXd> per_node;
  for (int c : cardinalities) per_node.push_back(Eigen::VectorXd::Constant(c, 1.0 / c));
  return product(std::move(per_node));
}

// ---------------------------------------------------------------- CtbnModel

CtbnModel::CtbnModel(std::vector<Node> nodes, std::vector<std::pair<int, int>> edges,
                     std::vector<std::vector<RateMatrix>> rate_tables, CtbnInitial pi0)
    : nodes_(std::move(nodes)), rates_(std::move(rate_tables)), pi0_(std::move(pi0)) {
  const int m = n_nodes();
  require(m >= 1, "CTBN needs at least one node");
  std::set<std::string> names;
  for (const auto& nd : nodes_) {
    require(nd.n_states >= 1, "node cardinality must be >= 1");
    require(names.insert(nd.name).second, "node names must be unique");
  }
  parents_.assign(static_cast<std::size_t>(m), {});
  children_.assign(static_cast<std::size_t>(m), {});
  std::set<std::pair<int, int>> seen;
  for (auto [p, c] : edges) {
    require(0 <= p && p < m && 0 <= c && c < m, "edge endpoint out of range");
    require(p != c, "self-edges are not allowed");
    require(seen.insert({p, c}).second, "duplicate edge");
    parents_[static_cast<std::size_t>(c)].push_back(p);
    children_[static_cast<std::size_t>(p)].push_back(c);
  }
  for (auto& v : parents_) std::sort(v.begin(), v.end());
  for (auto& v : children_) std::sort(v.begin(), v.end());

  require(static_cast<int>(rates_.size()) == m, "one rate table per node required");
  for (int k = 0; k < m; ++k) {
    long configs = 1;
    for (int p : parents_[static_cast<std::size_t>(k)]) configs *= n_states(p);
    require(static_cast<long>(rates_[static_cast<std::size_t>(k)].size()) == configs,
            "rate table must cover every parent configuration exactly once");
    for (const auto& a : rates_[static_cast<std::size_t>(k)])
      require(a.n() == n_states(k), "conditional generator has the wrong dimension");
  }

  if (auto* prod = std::get_if<std::vector<Eigen::VectorXd>>(&pi0_.dist)) {
    require(static_cast<int>(prod->size()) == m, "product pi0 needs one factor per node");
    for (int k = 0; k < m; ++k) {
      require((*prod)[static_cast<std::size_t>(k)].size() == n_states(k),
              "product pi0 factor has the wrong length");
      (void)InitialDistribution{(*prod)[static_cast<std::size_t>(k)]};  // validates
    }
  } else {
    const auto& joint_table = std::get<Eigen::VectorXd>(pi0_.dist);
    require(joint_table.size() == product_space_size(), "joint pi0 table has the wrong size");
    (void)InitialDistribution{joint_table};  // validates normalization
  }
}

int CtbnModel::parent_config_index(int k, const std::vector<int>& joint_state) const {
  int idx = 0;
  int stride = 1;
  for (int p : parents_[static_cast<std::size_t>(k)]) {
    idx += joint_state[static_cast<std::size_t>(p)] * stride;
    stride *= n_states(p);
  }
  return idx;
}

int CtbnModel::parent_stride(int k, int p) const {
  int stride = 1;
  for (int q : parents_[static_cast<std::size_t>(k)]) {
    if (q == p) return stride;
    stride *= n_states(q);
  }
  throw model_error("node is not a parent of the target");
}

std::vector<int> CtbnModel::cardinalities() const {
  std::vector<int> c;
  for (const auto& nd : nodes_) c.push_back(nd.n_states);
  return c;
}

long CtbnModel::product_space_size() const {
  long size = 1;
  for (const auto& nd : nodes_) {
    size *= nd.n_states;
    require(size > 0 && size < (1L << 40), "product space overflow");
  }
  return size;
}

std::vector<int> CtbnModel::sample_initial(Rng& rng) const {
  if (auto* prod = std::get_if<std::vector<Eigen::VectorXd>>(&pi0_.dist)) {
    std::vector<int> s(static_cast<std::size_t>(n_nodes()));
    for (int k = 0; k < n_nodes(); ++k) {
      const auto& p = (*prod)[static_cast<std::size_t>(k)];
      s[static_cast<std::size_t>(k)] =
          rng.categorical({p.data(), static_cast<std::size_t>(p.size())});
    }
    return s;
  }
  const auto& joint = std::get<Eigen::VectorXd>(pi0_.dist);
  long flat = rng.categorical({joint.data(), static_cast<std::size_t>(joint.size())});
  std::vector<int> s(static_cast<std::size_t>(n_nodes()));
  for (int k = 0; k < n_nodes(); ++k) {
    s[static_cast<std::size_t>(k)] = static_cast<int>(flat % n_states(k));
    flat /= n_states(k);
  }
  return s;
}

InitialDistribution CtbnModel::initial_conditional(int k, const std::vector<int>& joint_state) const {
  if (auto* prod = std::get_if<std::vector<Eigen::VectorXd>>(&pi0_.dist)) {
    return InitialDistribution((*prod)[static_cast<std::size_t>(k)]);
  }
  const auto& joint = std::get<Eigen::VectorXd>(pi0_.dist);
  // Flat index with node k's digit replaced.
  long base = 0;
  long stride_k = 1;
  long stride = 1;
  for (int j = 0; j < n_nodes(); ++j) {
    if (j == k)
      stride_k = stride;
    else
      base += static_cast<long>(joint_state[static_cast<std::size_t>(j)]) * stride;
    stride *= n_states(j);
  }
  Eigen::VectorXd slice(n_states(k));
  for (int s = 0; s < n_states(k); ++s) slice(s) = joint(base + s * stride_k);
  double total = slice.sum();
  if (!(total > 0.0))
    throw model_error("joint pi0 assigns zero mass to every state of the node being updated");
  return InitialDistribution(slice / total);
}

InitialDistribution CtbnModel::initial_flat(long cap) const {
  long size = product_space_size();
  require(size <= cap, "product space exceeds the flattening cap");
  if (auto* joint = std::get_if<Eigen::VectorXd>(&pi0_.dist)) {
    Eigen::VectorXd p = *joint;
    return InitialDistribution(p / p.sum());
  }
  const auto& prod = std::get<std::vector<Eigen::VectorXd>>(pi0_.dist);
  Eigen::VectorXd p(size);
  for (long u = 0; u < size; ++u) {
    long rem = u;
    double prob = 1.0;
    for (int k = 0; k < n_nodes(); ++k) {
      prob *= prod[static_cast<std::size_t>(k)](rem % n_states(k));
      rem /= n_states(k);
    }
    p(u) = prob;
  }
  return InitialDistribution(p / p.sum());
}

// ---------------------------------------------------------------- CtbnTrajectory

CtbnTrajectory::CtbnTrajectory(std::vector<int> s0, std::vector<double> times,
                               std::vector<int> nodes, std::vector<int> states,
                               TimeInterval interval, std::vector<int> cardinalities)
    : s0_(std::move(s0)),
      times_(std::move(times)),
      nodes_(std::move(nodes)),
      states_(std::move(states)),
      interval_(interval),
      cards_(std::move(cardinalities)) {
  const int m = static_cast<int>(cards_.size());
  require(m >= 1 && static_cast<int>(s0_.size()) == m, "initial state has the wrong arity");
  for (int k = 0; k < m; ++k)
    require(0 <= s0_[static_cast<std::size_t>(k)] && s0_[static_cast<std::size_t>(k)] < cards_[static_cast<std::size_t>(k)],
            "initial state out of range");
  require(times_.size() == nodes_.size() && times_.size() == states_.size(),
          "event arrays must have equal length");
  std::vector<int> cur = s0_;
  double prev_t = interval_.t_start;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    require(times_[i] > prev_t, "event times must be strictly increasing");
    require(times_[i] <= interval_.t_end, "event outside the interval");
    int k = nodes_[i];
    require(0 <= k && k < m, "event node out of range");
    require(0 <= states_[i] && states_[i] < cards_[static_cast<std::size_t>(k)],
            "event state out of range");
    require(states_[i] != cur[static_cast<std::size_t>(k)],
            "exactly one node must change state at each event");
    cur[static_cast<std::size_t>(k)] = states_[i];
    prev_t = times_[i];
  }
}

std::vector<int> CtbnTrajectory::state_at(double t) const {
  require(interval_.contains(t), "state_at query outside the interval");
  std::vector<int> cur = s0_;
  for (std::size_t i = 0; i < times_.size() && times_[i] <= t; ++i)
    cur[static_cast<std::size_t>(nodes_[i])] = states_[i];
  return cur;
}

Trajectory CtbnTrajectory::node_path(int k) const {
  std::vector<double> t;
  std::vector<int> s;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (nodes_[i] == k) {
      t.push_back(times_[i]);
      s.push_back(states_[i]);
    }
  }
  return Trajectory(s0_[static_cast<std::size_t>(k)], std::move(t), std::move(s), interval_,
                    cards_[static_cast<std::size_t>(k)]);
}

// ---------------------------------------------------------------- CtbnObservations

CtbnObservations::CtbnObservations(std::vector<DiscreteObservations> per_node)
    : per_node_(std::move(per_node)) {
  require(!per_node_.empty(), "per-node observation list is empty");
}

CtbnObservations CtbnObservations::none(const CtbnModel& model) {
  std::vector<DiscreteObservations> per_node;
  for (int k = 0; k < model.n_nodes(); ++k)
    per_node.push_back(DiscreteObservations({}, Eigen::MatrixXd(0, model.n_states(k))));
  return CtbnObservations(std::move(per_node));
}

// ---------------------------------------------------------------- simulation

CtbnTrajectory ctbn_simulate(const CtbnModel& model, const TimeInterval& interval, Rng& rng) {
  const int m = model.n_nodes();
  std::vector<int> cur = model.sample_initial(rng);
  const std::vector<int> s0 = cur;
  std::vector<double> times;
  std::vector<int> nodes, states;
  double t = interval.t_start;
  std::vector<double> weights;
  std::vector<int> targets;
  for (;;) {
    // Competing exponentials: each node races with its conditional exit rate.
    double best_z = std::numeric_limits<double>::infinity();
    int winner = -1;
    for (int k = 0; k < m; ++k) {
      const RateMatrix& a = model.rate(k, model.parent_config_index(k, cur));
      double z = rng.exponential(a.exit_rate(cur[static_cast<std::size_t>(k)]));
      if (z < best_z) {
        best_z = z;
        winner = k;
      }
    }
    if (winner < 0 || t + best_z > interval.t_end) break;
    t += best_z;
    const RateMatrix& a = model.rate(winner, model.parent_config_index(winner, cur));
    weights.clear();
    targets.clear();
    a.for_each_out_rate(cur[static_cast<std::size_t>(winner)], [&](int to, double rate) {
      targets.push_back(to);
      weights.push_back(rate);
    });
    if (targets.empty()) break;
    int to = targets[static_cast<std::size_t>(rng.categorical(weights))];
    cur[static_cast<std::size_t>(winner)] = to;
    times.push_back(t);
    nodes.push_back(winner);
    states.push_back(to);
  }
  return CtbnTrajectory(s0, std::move(times), std::move(nodes), std::move(states), interval,
                        model.cardinalities());
}

std::pair<RateMatrix, InitialDistribution> amalgamate(const CtbnModel& model, long cap) {
  long size = model.product_space_size();
  require(size <= cap, "product space exceeds the amalgamation cap");
  const int m = model.n_nodes();
  RateMatrix::Builder builder(static_cast<int>(size));
  std::vector<int> state(static_cast<std::size_t>(m));
  std::vector<long> stride(static_cast<std::size_t>(m));
  {
    long acc = 1;
    for (int k = 0; k < m; ++k) {
      stride[static_cast<std::size_t>(k)] = acc;
      acc *= model.n_states(k);
    }
  }
  for (long u = 0; u < size; ++u) {
    long rem = u;
    for (int k = 0; k < m; ++k) {
      state[static_cast<std::size_t>(k)] = static_cast<int>(rem % model.n_states(k));
      rem /= model.n_states(k);
    }
    for (int k = 0; k < m; ++k) {
      const RateMatrix& a = model.rate(k, model.parent_config_index(k, state));
      int from = state[static_cast<std::size_t>(k)];
      a.for_each_out_rate(from, [&](int to, double rate) {
        long v = u + (static_cast<long>(to) - from) * stride[static_cast<std::size_t>(k)];
        builder.add(static_cast<int>(v), static_cast<int>(u), rate);
      });
    }
  }
  return {std::move(builder).build(), model.initial_flat(cap)};
}

// ---------------------------------------------------------------- node sweep

namespace detail {

ParentSegments node_parent_segments(const CtbnModel& model, const CtbnTrajectory& joint, int k) {
  ParentSegments segs;
  std::vector<int> cur = joint.s0();
  const auto& parents = model.parents(k);
  segs.breaks.push_back(joint.interval().t_start);
  segs.configs.push_back(model.parent_config_index(k, cur));
  for (std::size_t i = 0; i < joint.times().size(); ++i) {
    int u = joint.nodes()[i];
    cur[static_cast<std::size_t>(u)] = joint.states()[i];
    if (std::binary_search(parents.begin(), parents.end(), u)) {
      segs.breaks.push_back(joint.times()[i]);
      segs.configs.push_back(model.parent_config_index(k, cur));
    }
  }
  segs.breaks.push_back(joint.interval().t_end);
  return segs;
}

HmmProblem node_problem(const CtbnModel& model, const CtbnTrajectory& joint, int k,
                        const CtbnObservations& obs, const std::vector<double>& grid,
                        double k_multiplier) {
  const int nk = model.n_states(k);
  const double t_start = joint.interval().t_start;
  const double t_end = joint.interval().t_end;
  ParentSegments segs = node_parent_segments(model, joint, k);

  // One pooled transition matrix per distinct parent configuration.
  std::map<int, int> pool_of_config;
  std::vector<StochasticMatrix> pool;
  auto pool_index = [&](int config) {
    auto it = pool_of_config.find(config);
    if (it != pool_of_config.end()) return it->second;
    const RateMatrix& a = model.rate(k, config);
    double omega = k_multiplier * a.max_exit_rate();
    pool.push_back(StochasticMatrix::uniformized(a, omega));
    int idx = static_cast<int>(pool.size()) - 1;
    pool_of_config.emplace(config, idx);
    return idx;
  };
  std::vector<int> step_matrix(grid.size());
  {
    std::size_t seg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      while (seg + 1 < segs.configs.size() && grid[i] >= segs.breaks[seg + 1]) ++seg;
      step_matrix[i] = pool_index(segs.configs[seg]);
    }
  }

  // Direct observations of node k.
  Eigen::MatrixXd log_lik = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()) + 1, nk);
  const int last = static_cast<int>(grid.size());
  for (int i = 0; i <= last; ++i) {
    double lo = i == 0 ? t_start : grid[static_cast<std::size_t>(i) - 1];
    double hi = i == last ? t_end : grid[static_cast<std::size_t>(i)];
    for (int s = 0; s < nk; ++s)
      log_lik(i, s) += obs.node_interval_log_likelihood(k, s, lo, hi, i == last);
  }

  // Child-trajectory terms: per window, each child contributes its dwell
  // exponent and the factors of its transitions, with node k's state
  // hypothesized per column. Only events of the children and of the
  // children's other parents matter; everything else is skipped so the
  // likelihood is bit-identical under changes outside the Markov blanket.
  const auto& children = model.children(k);
  if (!children.empty()) {
    std::vector<int> relevant_mark(static_cast<std::size_t>(model.n_nodes()), 0);
    std::vector<std::vector<int>> children_of_parent(static_cast<std::size_t>(model.n_nodes()));
    for (int c : children) {
      relevant_mark[static_cast<std::size_t>(c)] = 1;
      for (int p : model.parents(c)) {
        if (p == k) continue;
        relevant_mark[static_cast<std::size_t>(p)] = 1;
        children_of_parent[static_cast<std::size_t>(p)].push_back(c);
      }
    }
    std::vector<int> cur = joint.s0();
    // Child c's parent-config index decomposes as base_c + s_k * sigma_c.
    std::vector<long> base(children.size(), 0);
    std::vector<long> sigma(children.size(), 0);
    std::vector<std::size_t> child_slot(static_cast<std::size_t>(model.n_nodes()), 0);
    for (std::size_t ci = 0; ci < children.size(); ++ci) {
      int c = children[ci];
      child_slot[static_cast<std::size_t>(c)] = ci;
      sigma[ci] = model.parent_stride(c, k);
      long b = 0;
      for (int p : model.parents(c))
        if (p != k) b += static_cast<long>(cur[static_cast<std::size_t>(p)]) * model.parent_stride(c, p);
      base[ci] = b;
    }
    auto rebase = [&](int c) {
      std::size_t ci = child_slot[static_cast<std::size_t>(c)];
      long b = 0;
      for (int p : model.parents(c))
        if (p != k) b += static_cast<long>(cur[static_cast<std::size_t>(p)]) * model.parent_stride(c, p);
      base[ci] = b;
    };
    auto add_dwell = [&](int window, double lo, double hi) {
      if (hi <= lo) return;
      double len = hi - lo;
      for (std::size_t ci = 0; ci < children.size(); ++ci) {
        int sc = cur[static_cast<std::size_t>(children[ci])];
        for (int s = 0; s < nk; ++s) {
          const RateMatrix& ac = model.rate(children[ci], static_cast<int>(base[ci] + s * sigma[ci]));
          log_lik(window, s) -= ac.exit_rate(sc) * len;
        }
      }
    };

    std::size_t ev = 0;  // index into the joint event list
    const auto& times = joint.times();
    const auto& nodes = joint.nodes();
    const auto& states = joint.states();
    for (int i = 0; i <= last; ++i) {
      double lo = i == 0 ? t_start : grid[static_cast<std::size_t>(i) - 1];
      double hi = i == last ? t_end : grid[static_cast<std::size_t>(i)];
      double cursor = lo;
      while (ev < times.size() && (times[ev] < hi || (i == last && times[ev] <= hi))) {
        int u = nodes[ev];
        if (!relevant_mark[static_cast<std::size_t>(u)]) {
          // A node outside the Markov blanket; its state is never read.
          cur[static_cast<std::size_t>(u)] = states[ev];
          ++ev;
          continue;
        }
        add_dwell(i, cursor, times[ev]);
        cursor = times[ev];
        bool is_child = std::binary_search(children.begin(), children.end(), u);
        if (is_child) {
          std::size_t ci = child_slot[static_cast<std::size_t>(u)];
          int old_state = cur[static_cast<std::size_t>(u)];
          int new_state = states[ev];
          for (int s = 0; s < nk; ++s) {
            const RateMatrix& ac = model.rate(u, static_cast<int>(base[ci] + s * sigma[ci]));
            double rate = ac.entry(new_state, old_state);
            log_lik(i, s) += rate > 0.0 ? std::log(rate) : kNegInf;
          }
        }
        cur[static_cast<std::size_t>(u)] = states[ev];
        for (int c : children_of_parent[static_cast<std::size_t>(u)]) rebase(c);
        ++ev;
      }
      add_dwell(i, cursor, hi);
    }
  }

  return HmmProblem(model.initial_conditional(k, joint.s0()), std::move(pool),
                    std::move(step_matrix), std::move(log_lik));
}

}  // namespace detail

CtbnTrajectory node_gibbs_kernel(const CtbnTrajectory& joint, int k, const CtbnModel& model,
                                 const CtbnObservations& obs, double k_multiplier, Rng& rng) {
  require(k_multiplier > 1.0, "omega multiplier must be > 1");
  require(0 <= k && k < model.n_nodes(), "node index out of range");
  const double t_end = joint.interval().t_end;

  detail::ParentSegments segs = detail::node_parent_segments(model, joint, k);
  Trajectory own = joint.node_path(k);

  // Virtual jump times from the piecewise rate Omega^t - |A^{k,t}_{S^k(t)}|,
  // walked over the refinement of parent segments by the node's own jumps.
  std::vector<double> virtual_times;
  {
    std::size_t seg = 0;
    double cursor = joint.interval().t_start;
    int state = own.s0();
    std::size_t jump = 0;
    while (cursor < t_end) {
      while (seg + 1 < segs.configs.size() && segs.breaks[seg + 1] <= cursor) ++seg;
      double seg_end = segs.breaks[seg + 1];
      double next_jump = jump < own.times().size() ? own.times()[jump] : t_end;
      double piece_end = std::min(seg_end, next_jump);
      if (piece_end > cursor) {
        const RateMatrix& a = model.rate(k, segs.configs[seg]);
        double omega = k_multiplier * a.max_exit_rate();
        double rate = omega - a.exit_rate(state);
        auto u = detail::poisson_segment_times(rate, cursor, piece_end, rng);
        virtual_times.insert(virtual_times.end(), u.begin(), u.end());
      }
      cursor = piece_end;
      if (jump < own.times().size() && piece_end == own.times()[jump]) {
        state = own.states()[jump];
        ++jump;
      }
    }
  }

  // Candidate grid W = own jump times merged with the virtual times.
  std::vector<double> grid;
  grid.reserve(own.times().size() + virtual_times.size());
  {
    std::size_t i = 0, j = 0;
    while (i < own.times().size() || j < virtual_times.size()) {
      bool take_own = j == virtual_times.size() ||
                      (i < own.times().size() && own.times()[i] < virtual_times[j]);
      if (i < own.times().size() && j < virtual_times.size() &&
          own.times()[i] == virtual_times[j])
        throw numeric_error("virtual jump collided with an existing jump time");
      grid.push_back(take_own ? own.times()[i++] : virtual_times[j++]);
    }
  }

  HmmProblem problem = detail::node_problem(model, joint, k, obs, grid, k_multiplier);
  HmmSample sample = ffbs_sample(problem, rng);

  // Thin, then splice the resampled node path into the joint trajectory.
  std::vector<double> new_times;
  std::vector<int> new_states;
  int cur = sample.states.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    int v = sample.states[i + 1];
    if (v != cur) {
      new_times.push_back(grid[i]);
      new_states.push_back(v);
      cur = v;
    }
  }

  std::vector<double> times;
  std::vector<int> nodes, states;
  std::size_t i = 0, j = 0;
  const auto& jt = joint.times();
  while (i < jt.size() || j < new_times.size()) {
    bool other_available = false;
    std::size_t next_other = i;
    while (next_other < jt.size() && joint.nodes()[next_other] == k) ++next_other;
    other_available = next_other < jt.size();
    bool take_other;
    if (!other_available)
      take_other = false;
    else if (j == new_times.size())
      take_other = true;
    else if (jt[next_other] == new_times[j])
      throw numeric_error("resampled jump collided with another node's jump time");
    else
      take_other = jt[next_other] < new_times[j];
    if (take_other) {
      times.push_back(jt[next_other]);
      nodes.push_back(joint.nodes()[next_other]);
      states.push_back(joint.states()[next_other]);
      i = next_other + 1;
    } else if (j < new_times.size()) {
      times.push_back(new_times[j]);
      nodes.push_back(k);
      states.push_back(new_states[j]);
      ++j;
    } else {
      break;
    }
  }

  std::vector<int> s0 = joint.s0();
  s0[static_cast<std::size_t>(k)] = sample.states.front();
  return CtbnTrajectory(std::move(s0), std::move(times), std::move(nodes), std::move(states),
                        joint.interval(), joint.cardinalities());
}

CtbnTrajectory ctbn_gibbs_sweep(const CtbnTrajectory& joint, const CtbnModel& model,
                                const CtbnObservations& obs, double k_multiplier, Rng& rng) {
  CtbnTrajectory cur = joint;
  for (int k = 0; k < model.n_nodes(); ++k)
    cur = node_gibbs_kernel(cur, k, model, obs, k_multiplier, rng);
  return cur;
}

void CtbnGibbsConfig::validate() const {
  require(omega_multiplier > 1.0, "omega multiplier must be > 1");
  require(n_burnin >= 0 && n_samples >= 0, "sweep counts must be >= 0");
}

CtbnChainRun ctbn_run_chain(const CtbnTrajectory& init, const CtbnModel& model,
                            const CtbnObservations& obs, const CtbnGibbsConfig& config,
                            bool keep_paths) {
  config.validate();
  Rng rng(config.seed);
  CtbnChainRun run;
  run.keep_paths = keep_paths;
  CtbnTrajectory cur = init;
  for (int sweep = 0; sweep < config.n_burnin + config.n_samples; ++sweep) {
    if (config.random_scan) {
      for (int step = 0; step < model.n_nodes(); ++step) {
        int k = static_cast<int>(rng.uniform() * model.n_nodes());
        k = std::min(k, model.n_nodes() - 1);
        cur = node_gibbs_kernel(cur, k, model, obs, config.omega_multiplier, rng);
      }
    } else {
      cur = ctbn_gibbs_sweep(cur, model, obs, config.omega_multiplier, rng);
    }
    if (sweep >= config.n_burnin) {
      std::vector<SufficientStats> per_node;
      for (int k = 0; k < model.n_nodes(); ++k)
        per_node.push_back(sufficient_stats(cur.node_path(k)));
      run.stats.push_back(std::move(per_node));
      if (keep_paths) run.paths.push_back(cur);
    }
  }
  return run;
}

// ---------------------------------------------------------------- Lotka-Volterra

CtbnModel lotka_volterra_model(double alpha, double beta, double gamma, double delta, int cap) {
  require(cap >= 1, "population cap must be >= 1");
  require(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0 && delta >= 0.0,
          "rates must be nonnegative");
  const int n = cap + 1;
  std::vector<CtbnModel::Node> nodes = {{"prey", n}, {"predator", n}};
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 0}};

  // Prey (node 0) conditioned on predator population y: births alpha*x
  // (clipped at the cap), deaths beta*x*y.
  std::vector<RateMatrix> prey_rates;
  prey_rates.reserve(static_cast<std::size_t>(n));
  for (int y = 0; y < n; ++y) {
    RateMatrix::Builder b(n);
    for (int x = 0; x < n; ++x) {
      if (x + 1 < n) b.add(x + 1, x, alpha * x);
      if (x - 1 >= 0) b.add(x - 1, x, beta * static_cast<double>(x) * y);
    }
    prey_rates.push_back(std::move(b).build());
  }
  // Predator (node 1) conditioned on prey population x: births delta*x*y,
  // deaths gamma*y.
  std::vector<RateMatrix> pred_rates;
  pred_rates.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    RateMatrix::Builder b(n);
    for (int y = 0; y < n; ++y) {
      if (y + 1 < n) b.add(y + 1, y, delta * static_cast<double>(x) * y);
      if (y - 1 >= 0) b.add(y - 1, y, gamma * y);
    }
    pred_rates.push_back(std::move(b).build());
  }
  return CtbnModel(std::move(nodes), std::move(edges),
                   {std::move(prey_rates), std::move(pred_rates)},
                   CtbnInitial::uniform({n, n}));
}

Eigen::MatrixXd power2_noise_log_lik(const std::vector<int>& observed_values, int n_states) {
  Eigen::MatrixXd ll(static_cast<Eigen::Index>(observed_values.size()), n_states);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n_states);
  for (int s = 0; s < n_states; ++s)
    for (int x = 0; x < n_states; ++x)
      z(s) += 1.0 / (std::pow(2.0, std::abs(x - s)) + 1e-6);
  for (std::size_t j = 0; j < observed_values.size(); ++j) {
    int x = observed_values[j];
    require(0 <= x && x < n_states, "observed value out of range");
    for (int s = 0; s < n_states; ++s)
      ll(static_cast<Eigen::Index>(j), s) =
          std::log(1.0 / (std::pow(2.0, std::abs(x - s)) + 1e-6) / z(s));
  }
  return ll;
}

}  // namespace mjp
