#include "rwlap/tensor.hpp"

#include <algorithm>
#include <string>

#include "rwlap/error.hpp"
#include "rwlap/kernels.hpp"
#include "rwlap/lu.hpp"

namespace rwlap {

double tensor_entry(const FundamentalTensor& t, std::size_t i, std::size_t j, std::size_t k) { return t(i, j, k); }

Matrix fundamental_slice(const FundamentalTensor& t, std::size_t k) {
  const std::size_t n = t.size();
  if (k >= n) throw DomainError("slice index out of range", {k});
  const Matrix& m = t.pinv().pinv();
  const Vector& pi = t.pinv().pi();
  const auto& kern = kernels::active();

  Matrix out(n, n);
  const double* mk = m.row(k).data();
  const double mkk = m(k, k);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == k) continue;
    kern.diff_shift_mul(m.row(i).data(), mk, mkk - m(i, k), pi.data(), out.row(i).data(), n);
    out(i, k) = 0.0;
  }
  return out;
}

std::size_t full_tensor_bytes(std::size_t n) { return n * n * n * sizeof(double); }

std::vector<Matrix> full_tensor(const FundamentalTensor& t) {
  std::vector<Matrix> slices;
  slices.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) slices.push_back(fundamental_slice(t, k));
  return slices;
}

Partition::Partition(std::size_t n, IndexSet beta, IndexSet gamma, std::size_t target)
    : n_(n), beta_(std::move(beta)), gamma_(std::move(gamma)), target_(target), position_(n, -1) {
  if (target_ >= n_) throw DomainError("target out of range", {target_});
  if (beta_.empty()) throw DomainError("partition: beta must be non-empty");
  std::vector<int> owner(n_, 0);
  owner[target_] = 3;
  auto claim = [&](const IndexSet& set, int tag, const char* name) {
    for (std::size_t v : set) {
      if (v >= n_) throw DomainError(std::string("partition: ") + name + " index out of range", {v});
      if (owner[v] != 0) throw DomainError(std::string("partition: node in ") + name + " overlaps another set", {v});
      owner[v] = tag;
    }
  };
  claim(beta_, 1, "beta");
  claim(gamma_, 2, "gamma");
  for (std::size_t a = 0; a < beta_.size(); ++a) position_[beta_[a]] = static_cast<std::ptrdiff_t>(a);
  for (std::size_t v = 0; v < n_; ++v)
    if (owner[v] == 0 || owner[v] == 2) exit_.push_back(v);
}

Partition Partition::avoiding(std::size_t n, IndexSet gamma, std::size_t target) {
  IndexSet excluded = gamma;
  excluded.push_back(target);
  IndexSet beta = complement(n, excluded);
  for (std::size_t g : gamma)
    if (g == target) throw DomainError("the target cannot be avoided", {g});
  return Partition(n, std::move(beta), std::move(gamma), target);
}

std::optional<std::size_t> Partition::beta_position(std::size_t i) const {
  if (i >= n_ || position_[i] < 0) return std::nullopt;
  return static_cast<std::size_t>(position_[i]);
}

std::size_t Partition::require_beta(std::size_t i, const char* role) const {
  if (auto pos = beta_position(i)) return *pos;
  throw DomainError(std::string(role) + " node " + std::to_string(i) +
                        " is not in the allowed set (it is the target or avoided)",
                    {i});
}

namespace {

Matrix slice_block(const FundamentalTensor& t, const IndexSet& rows, const IndexSet& cols, std::size_t k) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = t(rows[a], cols[b], k);
  return out;
}

[[noreturn]] void throw_disconnected(const Partition& p) {
  throw DomainError("avoidance set disconnects target", p.gamma());
}

}  // namespace

Matrix schur_block_inverse(const FundamentalTensor& t, const Partition& p, BlockInverseRoute route) {
  if (p.node_count() != t.size()) throw DomainError("partition does not match the graph size");
  const IndexSet& beta = p.beta();
  const IndexSet& exit = p.exit_set();
  const std::size_t k = p.target();

  if (exit.empty()) return slice_block(t, beta, beta, k);

  if (route == BlockInverseRoute::automatic) {
    route = 2 * exit.size() > t.size() ? BlockInverseRoute::direct : BlockInverseRoute::schur;
  }

  try {
    if (route == BlockInverseRoute::direct) {
      const Matrix& pm = t.pinv().transition();
      Matrix a = Matrix::identity(beta.size()) - pm.submatrix(beta, beta);
      return invert(a);
    }
    const Matrix n_bb = slice_block(t, beta, beta, k);
    const Matrix n_bg = slice_block(t, beta, exit, k);
    const Matrix n_gb = slice_block(t, exit, beta, k);
    const LuDecomposition n_gg(slice_block(t, exit, exit, k));
    return n_bb - n_bg * n_gg.solve(n_gb);
  } catch (const SingularError&) {
    throw_disconnected(p);
  }
}

AvoidanceCounts visits_avoiding(const FundamentalTensor& t, const Partition& p, BlockInverseRoute route) {
  AvoidanceCounts out{p, schur_block_inverse(t, p, route), {}, {}, {}, {}};
  const IndexSet& beta = p.beta();
  const std::size_t nb = beta.size();
  const Matrix& pm = t.pinv().transition();
  const Matrix& f = out.block_inverse;

  // b = (I - P_bb)^-1 P_{b,target}
  Vector to_target(nb);
  for (std::size_t a = 0; a < nb; ++a) to_target[a] = pm(beta[a], p.target());
  out.absorption = f * to_target;

  out.reachable_mask.resize(nb);
  out.passage = Matrix(nb, nb);
  out.counts = Matrix(nb, nb);
  for (std::size_t a = 0; a < nb; ++a) {
    const double bi = out.absorption[a];
    out.reachable_mask[a] = bi >= AvoidanceCounts::kReachabilityThreshold;
    if (!out.reachable_mask[a]) continue;
    for (std::size_t c = 0; c < nb; ++c) {
      const double pr = (f(a, c) / f(c, c)) * (out.absorption[c] / bi);
      out.passage(a, c) = pr;
      out.counts(a, c) = pr * f(c, c);
    }
  }
  return out;
}

bool AvoidanceCounts::reachable(std::size_t i) const {
  return reachable_mask[partition.require_beta(i, "source")];
}

double AvoidanceCounts::count(std::size_t i, std::size_t j) const {
  const std::size_t a = partition.require_beta(i, "source");
  const std::size_t c = partition.require_beta(j, "visited");
  if (!reachable_mask[a]) {
    throw UnreachableError("target is unreachable from node " + std::to_string(i) + " while avoiding the given set",
                           {i, partition.target()});
  }
  return counts(a, c);
}

double AvoidanceCounts::passage_probability(std::size_t i, std::size_t j) const {
  const std::size_t a = partition.require_beta(i, "source");
  const std::size_t c = partition.require_beta(j, "intermediate");
  if (!reachable_mask[a]) {
    throw UnreachableError("target is unreachable from node " + std::to_string(i) + " while avoiding the given set",
                           {i, partition.target()});
  }
  return passage(a, c);
}

double AvoidanceCounts::restricted_count(std::size_t i, std::size_t j) const {
  const std::size_t a = partition.require_beta(i, "source");
  const std::size_t c = partition.require_beta(j, "visited");
  // f_ac * b_c, identical to counts(a,c) * b_a on reachable rows.
  return block_inverse(a, c) * absorption[c];
}

}  // namespace rwlap
