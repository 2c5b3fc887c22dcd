#include "gopt/matrix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gopt {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int m = n > 0 ? static_cast<int>(rows[0].size()) : 0;
  Matrix out(n, m);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != m)
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    for (int j = 0; j < m; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

std::vector<double> Matrix::row_sums() const {
  std::vector<double> out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
    out[i] = s;
  }
  return out;
}

std::vector<double> Matrix::col_sums() const {
  std::vector<double> out(cols_, 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[j] += (*this)(i, j);
  return out;
}

double Matrix::sum() const {
  double s = 0.0;
  for (double x : data_) s += x;
  return s;
}

double Matrix::min_coeff() const {
  double m = std::numeric_limits<double>::infinity();
  for (double x : data_) m = std::min(m, x);
  return m;
}

double Matrix::max_coeff() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : data_) m = std::max(m, x);
  return m;
}

bool Matrix::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace gopt
