#ifndef MJP_STOCHASTIC_MATRIX_HPP
#define MJP_STOCHASTIC_MATRIX_HPP

#include <Eigen/Dense>
#include <vector>

#include "mjp/types.hpp"

namespace mjp {

// Column-stochastic matrix B, indexed (to, from). Dense for small or filled
// matrices, compressed rows otherwise, so forward filtering costs O(nnz)
// per step. Row access serves backward sampling (row = destination state).
class StochasticMatrix {
 public:
  explicit StochasticMatrix(const Eigen::MatrixXd& b);

  // B = I + A/omega; omega == 0 is accepted only for the all-zero generator
  // and yields the identity.
  static StochasticMatrix uniformized(const RateMatrix& a, double omega);

  int n() const { return n_; }
  bool is_sparse() const { return sparse_; }
  double entry(int to, int from) const;

  // y = B x.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  // Visit nonzeros of row `to`: f(from, value).
  template <typename F>
  void for_each_in_row(int to, F&& f) const {
    if (!sparse_) {
      for (int from = 0; from < n_; ++from) {
        double v = dense_(to, from);
        if (v != 0.0) f(from, v);
      }
    } else {
      for (int i = row_ptr_[to]; i < row_ptr_[to + 1]; ++i) f(col_idx_[i], val_[i]);
    }
  }

  // Max |column sum - 1| over columns; construction enforces <= 1e-12.
  double column_sum_error() const;

 private:
  StochasticMatrix() = default;
  void validate() const;

  int n_ = 0;
  bool sparse_ = false;
  Eigen::MatrixXd dense_;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> val_;
};

}  // namespace mjp

#endif
