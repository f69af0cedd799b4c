#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rwlap {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  Matrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

// Row vector times matrix: x^T A.
Vector left_multiply(std::span<const double> x, const Matrix& a);

Vector row_sums(const Matrix& a);
Vector column_sums(const Matrix& a);

// Maximum absolute row sum.
double norm_inf(const Matrix& a);
// Largest |a_ij|.
double max_abs(const Matrix& a);
double max_abs(std::span<const double> x);
double max_abs_diff(const Matrix& a, const Matrix& b);
// max |a_ij - b_ij| / max(1, |b_ij|)
double max_rel_diff(const Matrix& a, const Matrix& b);

// All indices in [0, n) not in `excluded` (which need not be sorted).
IndexSet complement(std::size_t n, std::span<const std::size_t> excluded);

}  // namespace rwlap
