#pragma once

// Random-walk fundamental tensor N(i,j,k): expected number of departures from j
// on walks that start at i and stop on first reaching k. Entries come from the
// Laplacian pseudoinverse in O(1) each; nothing here inverts an n x n matrix.

#include <cstddef>
#include <optional>
#include <vector>

#include "rwlap/laplacian.hpp"
#include "rwlap/matrix.hpp"

namespace rwlap {

// Non-owning view; the LaplacianPinv must outlive it.
class FundamentalTensor {
 public:
  explicit FundamentalTensor(const LaplacianPinv& pinv) : pinv_(&pinv) {}

  std::size_t size() const noexcept { return pinv_->size(); }
  const LaplacianPinv& pinv() const noexcept { return *pinv_; }

  // (m_ij - m_kj - m_ik + m_kk) pi_j, and exactly 0 when i == k or j == k.
  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    if (i == k || j == k) return 0.0;
    const Matrix& m = pinv_->pinv();
    return ((m(i, j) - m(k, j)) + (m(k, k) - m(i, k))) * pinv_->pi()[j];
  }

 private:
  const LaplacianPinv* pinv_;
};

double tensor_entry(const FundamentalTensor& t, std::size_t i, std::size_t j, std::size_t k);

// N(:,:,k) as an n x n matrix with zero row and column k.
Matrix fundamental_slice(const FundamentalTensor& t, std::size_t k);

// Bytes needed to materialize all n slices.
std::size_t full_tensor_bytes(std::size_t n);
// Slice k is element k. Needs full_tensor_bytes(n) of memory.
std::vector<Matrix> full_tensor(const FundamentalTensor& t);

// Node sets for avoidance queries. Walks start in `beta`, stop at `target`, and
// must not touch `gamma`. Nodes outside beta, gamma and target are treated as
// avoided as well; `exit_set()` is that full avoided set.
class Partition {
 public:
  Partition(std::size_t n, IndexSet beta, IndexSet gamma, std::size_t target);
  // beta = every node except gamma and target.
  static Partition avoiding(std::size_t n, IndexSet gamma, std::size_t target);

  std::size_t node_count() const noexcept { return n_; }
  const IndexSet& beta() const noexcept { return beta_; }
  const IndexSet& gamma() const noexcept { return gamma_; }
  std::size_t target() const noexcept { return target_; }
  const IndexSet& exit_set() const noexcept { return exit_; }

  // Position of node i within beta().
  std::optional<std::size_t> beta_position(std::size_t i) const;
  // As above but throws DomainError for nodes outside beta.
  std::size_t require_beta(std::size_t i, const char* role) const;

 private:
  std::size_t n_;
  IndexSet beta_;
  IndexSet gamma_;
  std::size_t target_;
  IndexSet exit_;
  std::vector<std::ptrdiff_t> position_;
};

enum class BlockInverseRoute { automatic, schur, direct };

// (I - P_bb)^-1 = N(beta, beta, {exit, target}), indexed in beta() order.
//
// The Schur route uses only the slice at the target:
//   N_bb - N_bg N_gg^-1 N_gb
// and costs O(|g|^3 + |g| n^2). When more than half the nodes are avoided the
// automatic route inverts I - P_bb directly instead; both agree to roundoff.
// Throws DomainError when the avoided set disconnects the target.
Matrix schur_block_inverse(const FundamentalTensor& t, const Partition& p,
                           BlockInverseRoute route = BlockInverseRoute::automatic);

// Visit counts conditioned on reaching the target without touching the
// avoided set. All matrices are |beta| x |beta| in beta() order.
struct AvoidanceCounts {
  // Rows whose absorption probability is below this are flagged unreachable.
  static constexpr double kReachabilityThreshold = 1e-12;

  Partition partition;
  // N(i, j, {gamma, n}) = [(I - P_bb)^-1]_ij
  Matrix block_inverse;
  // Pr(target is the first node reached outside beta), per source.
  Vector absorption;
  // Pr(i -> j -> n avoiding gamma)
  Matrix passage;
  // N(i, j, n, gamma) = passage_ij * N(j, j, {gamma, n})
  Matrix counts;
  std::vector<bool> reachable_mask;

  // Global node indices. Throw DomainError for nodes outside beta and
  // UnreachableError for flagged sources.
  double count(std::size_t i, std::size_t j) const;
  double passage_probability(std::size_t i, std::size_t j) const;
  bool reachable(std::size_t i) const;

  // Expected visits to j restricted to walks that avoid the exit set, without
  // conditioning: count(i,j) * absorption_i. The ratio of two such entries in
  // one column is N(i,j,{gamma,n}) / N(j,j,{gamma,n}).
  double restricted_count(std::size_t i, std::size_t j) const;
};

AvoidanceCounts visits_avoiding(const FundamentalTensor& t, const Partition& p,
                                BlockInverseRoute route = BlockInverseRoute::automatic);

}  // namespace rwlap
