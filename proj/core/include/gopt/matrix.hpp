#pragma once

#include <cstddef>
#include <vector>

namespace gopt {

/// Dense row-major matrix of doubles. The solvers in this library target
/// desk-scale problems (a few thousand atoms per side), so everything is
/// stored densely and reductions run in a fixed left-to-right order to keep
/// results reproducible.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  double sum() const;
  double min_coeff() const;
  double max_coeff() const;
  bool all_finite() const;

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

}  // namespace gopt
