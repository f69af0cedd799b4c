#include "rwlap/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwlap/kernels.hpp"

namespace rwlap {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const double* src = data_.data() + rows[a] * cols_;
    double* dst = out.data() + a * cols.size();
    for (std::size_t b = 0; b < cols.size(); ++b) dst[b] = src[cols[b]];
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.data() + i * c.cols();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double aip = a(i, p);
      if (aip != 0.0) k.axpy(aip, b.data() + p * b.cols(), ci, b.cols());
    }
  }
  return c;
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("Matrix: shape mismatch");
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  kernels::axpy(1.0, b.data(), c.data(), a.rows() * a.cols());
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  kernels::axpy(-1.0, b.data(), c.data(), a.rows() * a.cols());
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  kernels::axpy(s, a.data(), c.data(), a.rows() * a.cols());
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("Matrix-vector product: shape mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = kernels::dot(a.row(i).data(), x.data(), x.size());
  return y;
}

Vector left_multiply(std::span<const double> x, const Matrix& a) {
  if (a.rows() != x.size()) throw std::invalid_argument("vector-Matrix product: shape mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (x[i] != 0.0) kernels::axpy(x[i], a.row(i).data(), y.data(), a.cols());
  return y;
}

Vector row_sums(const Matrix& a) {
  Vector s(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) s[i] = kernels::sum(a.row(i).data(), a.cols());
  return s;
}

Vector column_sums(const Matrix& a) {
  Vector s(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) kernels::axpy(1.0, a.row(i).data(), s.data(), a.cols());
  return s;
}

double norm_inf(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.row(i)) s += std::fabs(v);
    best = std::max(best, s);
  }
  return best;
}

double max_abs(const Matrix& a) { return kernels::max_abs(a.data(), a.rows() * a.cols()); }

double max_abs(std::span<const double> x) { return kernels::max_abs(x.data(), x.size()); }

double max_abs_diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

double max_rel_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) {
    const double d = std::fabs(a.data()[i] - b.data()[i]) / std::max(1.0, std::fabs(b.data()[i]));
    worst = std::max(worst, d);
  }
  return worst;
}

IndexSet complement(std::size_t n, std::span<const std::size_t> excluded) {
  std::vector<bool> drop(n, false);
  for (std::size_t e : excluded)
    if (e < n) drop[e] = true;
  IndexSet out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!drop[i]) out.push_back(i);
  return out;
}

}  // namespace rwlap
