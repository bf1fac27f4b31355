#include "mjp/stochastic_matrix.hpp"

#include <cmath>

namespace mjp {

namespace {
constexpr double kStochasticTol = 1e-12;
}

StochasticMatrix::StochasticMatrix(const Eigen::MatrixXd& b) {
  require(b.rows() == b.cols() && b.rows() >= 1, "stochastic matrix must be square");
  n_ = static_cast<int>(b.rows());
  sparse_ = false;
  dense_ = b;
  validate();
}

StochasticMatrix StochasticMatrix::uniformized(const RateMatrix& a, double omega) {
  require(omega >= a.max_exit_rate(),
          "uniformization rate must be >= the max exit rate (B would go negative)");
  StochasticMatrix b;
  b.n_ = a.n();
  if (omega == 0.0) {
    b.sparse_ = false;
    b.dense_ = Eigen::MatrixXd::Identity(a.n(), a.n());
    return b;
  }
  if (!a.is_sparse()) {
    b.sparse_ = false;
    b.dense_ = a.dense() / omega;
    for (int from = 0; from < b.n_; ++from) {
      b.dense_(from, from) = 0.0;
      double off = b.dense_.col(from).sum();
      b.dense_(from, from) = std::max(0.0, 1.0 - off);
    }
    b.validate();
    return b;
  }

  // Compressed rows from the generator's compressed columns plus diagonal.
  int n = a.n();
  std::vector<double> col_off_sum(n, 0.0);
  b.sparse_ = true;
  b.row_ptr_.assign(n + 1, 0);
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  for (int from = 0; from < n; ++from) {
    a.for_each_out_rate(from, [&](int to, double rate) {
      double v = rate / omega;
      rows[to].push_back({from, v});
      col_off_sum[from] += v;
    });
  }
  for (int s = 0; s < n; ++s) rows[s].push_back({s, std::max(0.0, 1.0 - col_off_sum[s])});
  for (int to = 0; to < n; ++to) {
    auto& r = rows[to];
    std::sort(r.begin(), r.end());
    b.row_ptr_[to] = static_cast<int>(b.col_idx_.size());
    for (auto& [from, v] : r) {
      if (v == 0.0) continue;
      b.col_idx_.push_back(from);
      b.val_.push_back(v);
    }
  }
  b.row_ptr_[n] = static_cast<int>(b.col_idx_.size());
  b.validate();
  return b;
}

void StochasticMatrix::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  if (!sparse_) {
    y.noalias() = dense_ * x;
    return;
  }
  y.setZero(n_);
  for (int to = 0; to < n_; ++to) {
    double acc = 0.0;
    for (int i = row_ptr_[to]; i < row_ptr_[to + 1]; ++i) acc += val_[i] * x(col_idx_[i]);
    y(to) = acc;
  }
}

double StochasticMatrix::entry(int to, int from) const {
  if (!sparse_) return dense_(to, from);
  for (int i = row_ptr_[to]; i < row_ptr_[to + 1]; ++i)
    if (col_idx_[i] == from) return val_[i];
  return 0.0;
}

double StochasticMatrix::column_sum_error() const {
  Eigen::VectorXd col_sum = Eigen::VectorXd::Zero(n_);
  if (!sparse_) {
    col_sum = dense_.colwise().sum();
  } else {
    for (int to = 0; to < n_; ++to)
      for (int i = row_ptr_[to]; i < row_ptr_[to + 1]; ++i)
        col_sum(col_idx_[i]) += val_[i];
  }
  return (col_sum.array() - 1.0).abs().maxCoeff();
}

void StochasticMatrix::validate() const {
  if (!sparse_) {
    for (int from = 0; from < n_; ++from)
      for (int to = 0; to < n_; ++to)
        require(std::isfinite(dense_(to, from)) && dense_(to, from) >= 0.0,
                "stochastic matrix entries must be finite and >= 0");
  } else {
    for (double v : val_)
      require(std::isfinite(v) && v >= 0.0,
              "stochastic matrix entries must be finite and >= 0");
  }
  require(column_sum_error() <= kStochasticTol, "stochastic matrix columns must sum to 1");
}

}  // namespace mjp
