#pragma once

// Graph ingestion and the random-walk transition matrix P = D^-1 A.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwlap/matrix.hpp"

namespace rwlap {

// Labeled, weighted digraph with a dense adjacency matrix. Immutable once built.
//
// Invariants: labels are unique, weights are finite and >= 0, and every node
// has positive out-degree. Index i refers to labels()[i] for the lifetime of
// the object.
class Digraph {
 public:
  Digraph(std::vector<std::string> labels, Matrix adjacency);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const Matrix& adjacency() const noexcept { return adj_; }

  std::optional<std::size_t> find(std::string_view label) const;
  // Throws DomainError for an unknown label.
  std::size_t index_of(std::string_view label) const;

  Vector out_degrees() const { return row_sums(adj_); }

 private:
  std::vector<std::string> labels_;
  Matrix adj_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class GraphFormat { edge_list, dense_matrix };

// Edge list: one `src dst [weight]` per line, `#` starts a comment, missing
// weights default to 1. Dense: first line `n`, then n rows of n weights.
Digraph load_graph(std::istream& in, GraphFormat format);
// `path == "-"` reads standard input.
Digraph load_graph_file(const std::string& path, GraphFormat format);

// Row-stochastic matrix with a strong-connectivity certificate.
class TransitionMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  // Validates entries in [0,1] and unit row sums.
  static TransitionMatrix from_probabilities(Matrix p);

  std::size_t size() const noexcept { return p_.rows(); }
  const Matrix& probabilities() const noexcept { return p_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return p_(i, j); }
  bool strongly_connected() const noexcept { return strongly_connected_; }

 private:
  TransitionMatrix(Matrix p, bool strongly_connected) : p_(std::move(p)), strongly_connected_(strongly_connected) {}

  Matrix p_;
  bool strongly_connected_ = false;
};

TransitionMatrix transition_matrix(const Digraph& g);

bool check_strong_connectivity(const Digraph& g);

// Strong connectivity of the pattern {(i,j) : m_ij > 0}, by a forward and a
// reverse traversal from node 0.
bool is_strongly_connected(const Matrix& pattern);

// Some ordered pair (from, to) with no directed path from `from` to `to`.
std::optional<std::pair<std::size_t, std::size_t>> find_unreachable_pair(const Matrix& pattern);

}  // namespace rwlap
