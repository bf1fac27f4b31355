#include "mjp/types.hpp"

#include <algorithm>
#include <cmath>

namespace mjp {

namespace {
constexpr double kColumnSumTol = 1e-9;
constexpr double kProbSumTol = 1e-12;
// Switch to compressed columns for big, mostly-zero generators.
constexpr int kSparseMinStates = 32;
constexpr double kSparseZeroFraction = 0.9;
}  // namespace

// ---------------------------------------------------------------- InitialDistribution

InitialDistribution::InitialDistribution(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  require(probs_.size() >= 1, "initial distribution needs >= 1 state");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    require(std::isfinite(probs_(i)) && probs_(i) >= 0.0,
            "initial distribution entries must be finite and nonnegative");
    sum += probs_(i);
  }
  require(std::abs(sum - 1.0) <= kProbSumTol, "initial distribution must sum to 1");
}

InitialDistribution InitialDistribution::uniform(int n) {
  require(n >= 1, "uniform distribution needs n >= 1");
  return InitialDistribution(Eigen::VectorXd::Constant(n, 1.0 / n));
}

InitialDistribution InitialDistribution::point_mass(int n, int state) {
  require(0 <= state && state < n, "point mass state out of range");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p(state) = 1.0;
  return InitialDistribution(std::move(p));
}

int InitialDistribution::sample(Rng& rng) const {
  return rng.categorical({probs_.data(), static_cast<std::size_t>(probs_.size())});
}

// ---------------------------------------------------------------- RateMatrix

RateMatrix::RateMatrix(const Eigen::MatrixXd& a) {
  require(a.rows() == a.cols() && a.rows() >= 1, "rate matrix must be square");
  n_ = static_cast<int>(a.rows());
  std::size_t zeros = 0;
  for (int from = 0; from < n_; ++from) {
    double col_sum = 0.0;
    for (int to = 0; to < n_; ++to) {
      double v = a(to, from);
      require(std::isfinite(v), "rate matrix entries must be finite");
      col_sum += v;
      if (to == from) {
        require(v <= 0.0, "rate matrix diagonal must be <= 0");
      } else {
        require(v >= 0.0, "rate matrix off-diagonals must be >= 0");
        if (v == 0.0) ++zeros;
      }
    }
    require(std::abs(col_sum) <= kColumnSumTol, "rate matrix columns must sum to 0");
  }

  std::size_t off = static_cast<std::size_t>(n_) * (n_ - 1);
  sparse_ = n_ >= kSparseMinStates && off > 0 &&
            static_cast<double>(zeros) >= kSparseZeroFraction * static_cast<double>(off);
  exit_ = Eigen::VectorXd(n_);
  for (int s = 0; s < n_; ++s) exit_(s) = -a(s, s);
  if (!sparse_) {
    dense_ = a;
  } else {
    col_ptr_.assign(n_ + 1, 0);
    for (int from = 0; from < n_; ++from) {
      col_ptr_[from] = static_cast<int>(row_idx_.size());
      for (int to = 0; to < n_; ++to) {
        if (to == from) continue;
        double v = a(to, from);
        if (v > 0.0) {
          row_idx_.push_back(to);
          val_.push_back(v);
        }
      }
    }
    col_ptr_[n_] = static_cast<int>(row_idx_.size());
  }
  finalize();
}

RateMatrix::Builder& RateMatrix::Builder::add(int to, int from, double rate) {
  require(0 <= to && to < n_ && 0 <= from && from < n_, "rate index out of range");
  require(to != from, "rates are added off-diagonal only");
  require(std::isfinite(rate) && rate >= 0.0, "rates must be finite and >= 0");
  if (rate > 0.0) {
    to_.push_back(to);
    from_.push_back(from);
    rate_.push_back(rate);
  }
  return *this;
}

RateMatrix RateMatrix::Builder::build() && {
  RateMatrix m;
  m.n_ = n_;
  std::size_t off = static_cast<std::size_t>(n_) * (n_ - 1);
  m.sparse_ = n_ >= kSparseMinStates && off > 0 &&
              static_cast<double>(off - rate_.size()) >=
                  kSparseZeroFraction * static_cast<double>(off);
  m.exit_ = Eigen::VectorXd::Zero(n_);
  if (!m.sparse_) {
    m.dense_ = Eigen::MatrixXd::Zero(n_, n_);
    for (std::size_t i = 0; i < rate_.size(); ++i) {
      m.dense_(to_[i], from_[i]) += rate_[i];
      m.exit_(from_[i]) += rate_[i];
    }
    for (int s = 0; s < n_; ++s) m.dense_(s, s) = -m.exit_(s);
  } else {
    // Counting sort by column.
    std::vector<int> count(n_ + 1, 0);
    for (int f : from_) ++count[f + 1];
    for (int c = 0; c < n_; ++c) count[c + 1] += count[c];
    m.col_ptr_ = count;
    m.row_idx_.resize(rate_.size());
    m.val_.resize(rate_.size());
    std::vector<int> next(count.begin(), count.end() - 1);
    for (std::size_t i = 0; i < rate_.size(); ++i) {
      int slot = next[from_[i]]++;
      m.row_idx_[slot] = to_[i];
      m.val_[slot] = rate_[i];
      m.exit_(from_[i]) += rate_[i];
    }
  }
  m.finalize();
  return m;
}

void RateMatrix::finalize() {
  max_exit_ = exit_.size() > 0 ? exit_.maxCoeff() : 0.0;
}

double RateMatrix::entry(int to, int from) const {
  if (to == from) return -exit_(from);
  if (!sparse_) return dense_(to, from);
  for (int i = col_ptr_[from]; i < col_ptr_[from + 1]; ++i)
    if (row_idx_[i] == to) return val_[i];
  return 0.0;
}

std::size_t RateMatrix::nnz_off_diagonal() const {
  if (sparse_) return val_.size();
  std::size_t nnz = 0;
  for (int from = 0; from < n_; ++from)
    for (int to = 0; to < n_; ++to)
      if (to != from && dense_(to, from) != 0.0) ++nnz;
  return nnz;
}

Eigen::MatrixXd RateMatrix::dense() const {
  if (!sparse_) return dense_;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int from = 0; from < n_; ++from) {
    for (int i = col_ptr_[from]; i < col_ptr_[from + 1]; ++i)
      a(row_idx_[i], from) = val_[i];
    a(from, from) = -exit_(from);
  }
  return a;
}

// ---------------------------------------------------------------- Trajectory

Trajectory::Trajectory(int s0, std::vector<double> jump_times, std::vector<int> jump_states,
                       TimeInterval interval, int n_states)
    : s0_(s0),
      times_(std::move(jump_times)),
      states_(std::move(jump_states)),
      interval_(interval),
      n_states_(n_states) {
  require(n_states_ >= 1, "trajectory needs a positive state count");
  require(0 <= s0_ && s0_ < n_states_, "trajectory s0 out of range");
  require(times_.size() == states_.size(), "trajectory |T| must equal |S|");
  int prev = s0_;
  double prev_t = interval_.t_start;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    require(times_[i] > prev_t, "trajectory jump times must be strictly increasing");
    require(times_[i] <= interval_.t_end, "trajectory jumps must lie inside the interval");
    require(0 <= states_[i] && states_[i] < n_states_, "trajectory state out of range");
    require(states_[i] != prev, "trajectory may not self-transition");
    prev_t = times_[i];
    prev = states_[i];
  }
}

int Trajectory::state_at(double t) const {
  require(interval_.contains(t), "state_at query outside the interval");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return s0_;
  return states_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

long SufficientStats::total_transitions() const {
  return transition_counts.cast<long>().sum();
}

}  // namespace mjp
