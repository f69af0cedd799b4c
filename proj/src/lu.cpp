#include "rwlap/lu.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "rwlap/error.hpp"
#include "rwlap/kernels.hpp"

namespace rwlap {

namespace factorization_probe {
namespace {

std::mutex& probe_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::size_t>& probe_log() {
  static std::vector<std::size_t> log;
  return log;
}

void record(std::size_t dim) {
  std::lock_guard lock(probe_mutex());
  probe_log().push_back(dim);
}

}  // namespace

std::size_t count() {
  std::lock_guard lock(probe_mutex());
  return probe_log().size();
}

std::size_t count_at_least(std::size_t min_dim) {
  std::lock_guard lock(probe_mutex());
  return static_cast<std::size_t>(
      std::count_if(probe_log().begin(), probe_log().end(), [&](std::size_t d) { return d >= min_dim; }));
}

std::vector<std::size_t> dimensions() {
  std::lock_guard lock(probe_mutex());
  return probe_log();
}

void reset() {
  std::lock_guard lock(probe_mutex());
  probe_log().clear();
}

}  // namespace factorization_probe

LuDecomposition::LuDecomposition(Matrix a, double pivot_tolerance) : lu_(std::move(a)) {
  if (!lu_.square()) throw std::invalid_argument("LU: matrix must be square");
  const std::size_t n = lu_.rows();
  factorization_probe::record(n);

  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  if (n == 0) return;

  const double threshold = pivot_tolerance * norm_inf(lu_);
  const auto& k = kernels::active();
  min_pivot_ = INFINITY;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::fabs(lu_(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(lu_(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (!(best > threshold)) {
      std::ostringstream msg;
      msg << "matrix is numerically singular (pivot " << best << " at column " << col << ", threshold "
          << threshold << ")";
      throw SingularError(msg.str());
    }
    min_pivot_ = std::min(min_pivot_, best);
    if (piv != col) {
      std::swap_ranges(lu_.row(col).begin(), lu_.row(col).end(), lu_.row(piv).begin());
      std::swap(perm_[col], perm_[piv]);
    }
    const double inv_pivot = 1.0 / lu_(col, col);
    const double* pivot_tail = lu_.row(col).data() + col + 1;
    const std::size_t tail = n - col - 1;
    for (std::size_t r = col + 1; r < n; ++r) {
      double& l = lu_(r, col);
      if (l == 0.0) continue;
      l *= inv_pivot;
      k.axpy(-l, pivot_tail, lu_.row(r).data() + col + 1, tail);
    }
  }
}

Matrix LuDecomposition::solve(const Matrix& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw std::invalid_argument("LU solve: shape mismatch");
  const std::size_t m = b.cols();
  const auto& k = kernels::active();

  // Row-oriented substitution so the inner loops are contiguous axpys.
  Matrix x(n, m);
  for (std::size_t i = 0; i < n; ++i) std::copy(b.row(perm_[i]).begin(), b.row(perm_[i]).end(), x.row(i).begin());
  for (std::size_t i = 0; i < n; ++i) {
    double* xi = x.row(i).data();
    for (std::size_t p = 0; p < i; ++p) {
      const double l = lu_(i, p);
      if (l != 0.0) k.axpy(-l, x.row(p).data(), xi, m);
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double* xi = x.row(ii).data();
    for (std::size_t p = ii + 1; p < n; ++p) {
      const double u = lu_(ii, p);
      if (u != 0.0) k.axpy(-u, x.row(p).data(), xi, m);
    }
    const double inv = 1.0 / lu_(ii, ii);
    for (std::size_t c = 0; c < m; ++c) xi[c] *= inv;
  }
  return x;
}

Vector LuDecomposition::solve(std::span<const double> b) const {
  Matrix column(b.size(), 1);
  std::copy(b.begin(), b.end(), column.data());
  Matrix x = solve(column);
  return Vector(x.data(), x.data() + x.rows());
}

Matrix LuDecomposition::inverse() const { return solve(Matrix::identity(size())); }

Matrix invert(const Matrix& a, double pivot_tolerance) { return LuDecomposition(a, pivot_tolerance).inverse(); }

}  // namespace rwlap
