#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rwlap/matrix.hpp"

namespace rwlap {

// LU factorization with partial pivoting, P A = L U, stored compactly.
//
// A matrix is rejected as singular when some pivot satisfies
// |u_kk| <= pivot_tolerance * ||A||_inf.
class LuDecomposition {
 public:
  static constexpr double kDefaultPivotTolerance = 1e-12;

  explicit LuDecomposition(Matrix a, double pivot_tolerance = kDefaultPivotTolerance);

  std::size_t size() const noexcept { return lu_.rows(); }

  Vector solve(std::span<const double> b) const;
  // Solves A X = B for all columns of B at once.
  Matrix solve(const Matrix& b) const;
  Matrix inverse() const;

  double min_pivot() const noexcept { return min_pivot_; }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double min_pivot_ = 0.0;
};

Matrix invert(const Matrix& a, double pivot_tolerance = LuDecomposition::kDefaultPivotTolerance);

// Process-wide instrumentation: every LuDecomposition records its dimension.
namespace factorization_probe {

std::size_t count();
// Number of factorizations of dimension >= min_dim.
std::size_t count_at_least(std::size_t min_dim);
std::vector<std::size_t> dimensions();
void reset();

}  // namespace factorization_probe

}  // namespace rwlap
