#include "rwlap/laplacian.hpp"

#include <sstream>

#include "rwlap/error.hpp"
#include "rwlap/kernels.hpp"
#include "rwlap/lu.hpp"

namespace rwlap {

Matrix normalized_laplacian(const TransitionMatrix& p) {
  const std::size_t n = p.size();
  Matrix l = Matrix::identity(n);
  kernels::axpy(-1.0, p.probabilities().data(), l.data(), n * n);
  return l;
}

StationaryDistribution stationary_distribution(const TransitionMatrix& p, const NullityOneFactors& factors) {
  const std::size_t n = p.size();
  if (n == 1) return {{1.0}};
  const std::size_t last = n - 1;
  if (factors.block_inverse.rows() != last || factors.block_inverse.cols() != last) {
    throw std::invalid_argument("stationary_distribution: block inverse has the wrong shape");
  }

  // pi^T L = 0 with pi_n = 1 gives pi_alpha^T = -l_na L_aa^-1 = P_na L_aa^-1.
  // (The right-hand analogue -L_aa^-1 l_an is the all-ones right null vector.)
  Vector p_na(last);
  for (std::size_t j = 0; j < last; ++j) p_na[j] = p(last, j);
  Vector pi = left_multiply(p_na, factors.block_inverse);
  pi.push_back(0.0);
  pi[last] = 1.0;

  const double total = kernels::sum(pi.data(), n);
  for (double& v : pi) v /= total;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pi[i] >= StationaryDistribution::kMinProbability)) {
      std::ostringstream msg;
      msg << "stationary probability of node " << i << " is " << pi[i]
          << "; the chain is numerically not strongly connected";
      throw ValidationError(msg.str(), {i});
    }
  }
  return {std::move(pi)};
}

Matrix rw_laplacian(const Matrix& laplacian, const StationaryDistribution& pi) {
  if (laplacian.rows() != pi.size()) throw std::invalid_argument("rw_laplacian: shape mismatch");
  Matrix out = laplacian;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (double& v : out.row(i)) v *= pi[i];
  return out;
}

Matrix pinv_nullity1(const NullityOneFactors& f) {
  const std::size_t m = f.block_inverse.rows();
  if (f.u.size() != m || f.v.size() != m) throw std::invalid_argument("pinv_nullity1: vector size mismatch");
  const std::size_t n = m + 1;
  Matrix out(n, n);
  if (m == 0) return out;

  // Y = X R_u = X - (X u) u^T / (1 + u^T u)
  Matrix y = f.block_inverse;
  const double su = 1.0 + kernels::dot(f.u.data(), f.u.data(), m);
  for (std::size_t i = 0; i < m; ++i) {
    const double xu = kernels::dot(y.row(i).data(), f.u.data(), m);
    kernels::axpy(-xu / su, f.u.data(), y.row(i).data(), m);
  }
  // M_aa = R_v Y = Y - v (v^T Y) / (1 + v^T v)
  const double sv = 1.0 + kernels::dot(f.v.data(), f.v.data(), m);
  const Vector vty = left_multiply(f.v, y);
  for (std::size_t i = 0; i < m; ++i) {
    double* dst = out.row(i).data();
    std::copy(y.row(i).begin(), y.row(i).end(), dst);
    kernels::axpy(-f.v[i] / sv, vty.data(), dst, m);
  }

  // m_an = -M_aa u, m_na^T = -v^T M_aa, m_nn = v^T M_aa u
  Vector maa_u(m);
  for (std::size_t i = 0; i < m; ++i) maa_u[i] = kernels::dot(out.row(i).data(), f.u.data(), m);
  Vector vt_maa(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) kernels::axpy(f.v[i], out.row(i).data(), vt_maa.data(), m);
  for (std::size_t i = 0; i < m; ++i) {
    out(i, m) = -maa_u[i];
    out(m, i) = -vt_maa[i];
  }
  out(m, m) = kernels::dot(f.v.data(), maa_u.data(), m);
  return out;
}

LaplacianPinv rw_laplacian_pinv(const TransitionMatrix& p, bool with_normalized) {
  if (!p.strongly_connected()) {
    auto pair = find_unreachable_pair(p.probabilities());
    throw NotStronglyConnectedError(pair ? pair->first : 0, pair ? pair->second : 0);
  }
  const std::size_t n = p.size();
  LaplacianPinv out;
  out.transition_ = p.probabilities();

  if (n == 1) {
    out.pinv_ = Matrix(1, 1);
    out.pi_ = {{1.0}};
    out.rw_laplacian_ = Matrix(1, 1);
    if (with_normalized) out.normalized_pinv_ = Matrix(1, 1);
    return out;
  }

  const std::size_t m = n - 1;
  IndexSet alpha(m);
  for (std::size_t i = 0; i < m; ++i) alpha[i] = i;

  // The one inversion.
  const Matrix lap = normalized_laplacian(p);
  out.block_inverse_ = invert(lap.submatrix(alpha, alpha));

  // Stationary distribution from the same inverse.
  NullityOneFactors normalized{out.block_inverse_, {}, Vector(m, 1.0)};
  out.pi_ = stationary_distribution(p, normalized);
  const Vector& pi = out.pi_.pi;

  // Pi (I - P)
  out.rw_laplacian_ = rw_laplacian(lap, out.pi_);

  // [Lrw_aa^-1]_ij = [L_aa^-1]_ij / pi_j
  Vector inv_pi(m);
  for (std::size_t j = 0; j < m; ++j) inv_pi[j] = 1.0 / pi[j];
  out.rw_block_inverse_ = Matrix(m, m);
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < m; ++i) {
    k.mul(out.block_inverse_.row(i).data(), inv_pi.data(), out.rw_block_inverse_.row(i).data(), m);
  }

  // b = (1/n) X 1, c^T = (1/n) 1^T X, s = c^T 1 / n = 1^T b / n
  const double inv_n = 1.0 / static_cast<double>(n);
  Vector b = row_sums(out.rw_block_inverse_);
  Vector c = column_sums(out.rw_block_inverse_);
  for (double& v : b) v *= inv_n;
  for (double& v : c) v *= inv_n;
  const double s = k.sum(c.data(), m) * inv_n;

  // [M_aa]_ij = X_ij - b_i - c_j + s
  out.pinv_ = Matrix(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    k.sub_shift(out.rw_block_inverse_.row(i).data(), c.data(), s - b[i], out.pinv_.row(i).data(), m);
  }
  // The last row and column are fixed by M 1 = 0 and 1^T M = 0,
  // which gives m_an = s 1 - b and m_na = s 1 - c.
  for (std::size_t i = 0; i < m; ++i) {
    out.pinv_(i, m) = s - b[i];
    out.pinv_(m, i) = s - c[i];
  }
  out.pinv_(m, m) = s;

  if (with_normalized) {
    normalized.u.resize(m);
    for (std::size_t i = 0; i < m; ++i) normalized.u[i] = pi[i] / pi[m];
    out.normalized_pinv_ = pinv_nullity1(normalized);
  }
  return out;
}

}  // namespace rwlap
