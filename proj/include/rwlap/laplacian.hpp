#pragma once

// Laplacians of a strongly connected random walk and the Moore-Penrose
// pseudoinverse of the random-walk Laplacian, obtained from a single
// (n-1)x(n-1) inversion.
//
// Throughout, the last internal index plays the role of the partitioned-off
// node; alpha denotes all other indices.

#include <cstddef>
#include <optional>

#include "rwlap/graph.hpp"
#include "rwlap/matrix.hpp"

namespace rwlap {

struct StationaryDistribution {
  // Smallest admissible entry after normalization.
  static constexpr double kMinProbability = 1e-14;

  Vector pi;

  std::size_t size() const noexcept { return pi.size(); }
  double operator[](std::size_t i) const noexcept { return pi[i]; }
};

// Inverse of the upper-left block of a nullity-one matrix together with the
// vectors describing its annihilators: (u^T, 1) L = 0 and L (v; 1) = 0.
struct NullityOneFactors {
  Matrix block_inverse;
  Vector u;
  Vector v;
};

// Pseudoinverse of the random-walk Laplacian Pi (I - P), plus what was
// computed on the way there. Immutable after construction.
class LaplacianPinv {
 public:
  std::size_t size() const noexcept { return pinv_.rows(); }

  // M; both annihilating vectors are all-ones.
  const Matrix& pinv() const noexcept { return pinv_; }
  double m(std::size_t i, std::size_t j) const noexcept { return pinv_(i, j); }

  const StationaryDistribution& stationary() const noexcept { return pi_; }
  const Vector& pi() const noexcept { return pi_.pi; }

  // Inverse of the upper-left block of Pi (I - P).
  const Matrix& block_inverse() const noexcept { return rw_block_inverse_; }
  // Inverse of the upper-left block of I - P (the fundamental matrix with the
  // last node absorbing).
  const Matrix& normalized_block_inverse() const noexcept { return block_inverse_; }

  const Matrix& rw_laplacian() const noexcept { return rw_laplacian_; }
  const Matrix& transition() const noexcept { return transition_; }

  // Pseudoinverse of I - P, present when requested at construction.
  const std::optional<Matrix>& normalized_pinv() const noexcept { return normalized_pinv_; }

 private:
  friend LaplacianPinv rw_laplacian_pinv(const TransitionMatrix&, bool);

  Matrix pinv_;
  StationaryDistribution pi_;
  Matrix block_inverse_;
  Matrix rw_block_inverse_;
  Matrix rw_laplacian_;
  Matrix transition_;
  std::optional<Matrix> normalized_pinv_;
};

// I - P
Matrix normalized_laplacian(const TransitionMatrix& p);

// Solves for pi from the block inverse of I - P, then rescales to unit 1-norm.
// Throws if an entry falls below StationaryDistribution::kMinProbability.
StationaryDistribution stationary_distribution(const TransitionMatrix& p, const NullityOneFactors& factors);

// Pi * L
Matrix rw_laplacian(const Matrix& laplacian, const StationaryDistribution& pi);

// Moore-Penrose pseudoinverse of the unique nullity-one matrix described by
// `factors`, in O(n^2) on top of the given block inverse.
Matrix pinv_nullity1(const NullityOneFactors& factors);

// The full pipeline. Performs exactly one LU factorization, of dimension n-1.
// Throws NotStronglyConnectedError before factorizing when P is reducible.
LaplacianPinv rw_laplacian_pinv(const TransitionMatrix& p, bool with_normalized = false);

}  // namespace rwlap
