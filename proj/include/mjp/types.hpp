#ifndef MJP_TYPES_HPP
#define MJP_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mjp/errors.hpp"
#include "mjp/rng.hpp"

namespace mjp {

// ---------------------------------------------------------------------------
// Convention used throughout this codebase: rate and transition matrices are
// indexed (to, from) and their COLUMNS sum to zero (generators) or one
// (stochastic matrices). A(s', s) is the rate from s to s', and marginals
// evolve as pi_t = exp(A t) * pi_0. Most textbooks use the transposed (row)
// convention; everything here, including serialized matrices, is columns.
// ---------------------------------------------------------------------------

struct StateSpace {
  explicit StateSpace(int n) : n_states(n) {
    require(n >= 1, "state space needs at least one state");
  }
  int n_states;
};

struct TimeInterval {
  TimeInterval(double start, double end) : t_start(start), t_end(end) {
    require(start < end, "time interval requires t_start < t_end");
  }
  double length() const { return t_end - t_start; }
  bool contains(double t) const { return t_start <= t && t <= t_end; }
  double t_start;
  double t_end;
};

class InitialDistribution {
 public:
  explicit InitialDistribution(Eigen::VectorXd probs);
  static InitialDistribution uniform(int n);
  static InitialDistribution point_mass(int n, int state);

  int n() const { return static_cast<int>(probs_.size()); }
  double prob(int s) const { return probs_(s); }
  const Eigen::VectorXd& probs() const { return probs_; }
  int sample(Rng& rng) const;

 private:
  Eigen::VectorXd probs_;
};

// Generator of a finite-state MJP. Off-diagonals are nonnegative rates,
// diagonals A_ss = -|A_s| make columns sum to zero. Storage switches to
// compressed (off-diagonal) columns when the matrix is large and >= 90%
// zero, so birth-death style generators stay cheap at high state counts.
class RateMatrix {
 public:
  explicit RateMatrix(const Eigen::MatrixXd& a);

  int n() const { return n_; }
  bool is_sparse() const { return sparse_; }

  double entry(int to, int from) const;
  // Total rate of leaving state s, |A_s| = -A_ss >= 0.
  double exit_rate(int s) const { return exit_(s); }
  double max_exit_rate() const { return max_exit_; }
  const Eigen::VectorXd& exit_rates() const { return exit_; }

  // Visit off-diagonal nonzeros of column `from`: f(to, rate).
  template <typename F>
  void for_each_out_rate(int from, F&& f) const {
    if (!sparse_) {
      for (int to = 0; to < n_; ++to) {
        if (to == from) continue;
        double r = dense_(to, from);
        if (r > 0.0) f(to, r);
      }
    } else {
      for (int i = col_ptr_[from]; i < col_ptr_[from + 1]; ++i)
        f(row_idx_[i], val_[i]);
    }
  }

  std::size_t nnz_off_diagonal() const;
  Eigen::MatrixXd dense() const;

  class Builder {
   public:
    explicit Builder(int n) : n_(n) {
      require(n >= 1, "rate matrix needs at least one state");
    }
    // Accumulates rate from `from` to `to`.
    Builder& add(int to, int from, double rate);
    RateMatrix build() &&;

   private:
    int n_;
    std::vector<int> to_, from_;
    std::vector<double> rate_;
    friend class RateMatrix;
  };

 private:
  RateMatrix() = default;
  void finalize();

  int n_ = 0;
  bool sparse_ = false;
  Eigen::MatrixXd dense_;           // used when !sparse_
  std::vector<int> col_ptr_;        // used when sparse_ (off-diagonals only)
  std::vector<int> row_idx_;
  std::vector<double> val_;
  Eigen::VectorXd exit_;
  double max_exit_ = 0.0;
};

// A pure-jump path (s0, S, T) on an interval: strictly increasing jump times
// in (t_start, t_end], no self-transitions. Immutable after construction.
class Trajectory {
 public:
  Trajectory(int s0, std::vector<double> jump_times, std::vector<int> jump_states,
             TimeInterval interval, int n_states);

  int s0() const { return s0_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<int>& states() const { return states_; }
  const TimeInterval& interval() const { return interval_; }
  int n_states() const { return n_states_; }
  int n_jumps() const { return static_cast<int>(times_.size()); }

  // State at time t; right-continuous, so state_at(t_i) is the post-jump state.
  int state_at(double t) const;
  int final_state() const { return times_.empty() ? s0_ : states_.back(); }

  // Visit the constant segments [a, b) partitioning the interval
  // (the final segment is [t_n, t_end]): f(a, b, state).
  template <typename F>
  void for_each_segment(F&& f) const {
    double a = interval_.t_start;
    int s = s0_;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      f(a, times_[i], s);
      a = times_[i];
      s = states_[i];
    }
    f(a, interval_.t_end, s);
  }

 private:
  int s0_;
  std::vector<double> times_;
  std::vector<int> states_;
  TimeInterval interval_;
  int n_states_;
};

// Dwell times T_s and transition counts n_{s's} (indexed counts(to, from),
// zero diagonal) of a trajectory; the conjugate-update sufficient statistics.
struct SufficientStats {
  Eigen::VectorXd dwell_time;
  Eigen::MatrixXi transition_counts;

  int n() const { return static_cast<int>(dwell_time.size()); }
  long total_transitions() const;
};

}  // namespace mjp

#endif
