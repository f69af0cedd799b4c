#include "rwlap/graph.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "rwlap/error.hpp"

namespace rwlap {

Digraph::Digraph(std::vector<std::string> labels, Matrix adjacency)
    : labels_(std::move(labels)), adj_(std::move(adjacency)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw ValidationError("graph has no nodes");
  if (adj_.rows() != n || adj_.cols() != n) {
    throw ValidationError("adjacency matrix is " + std::to_string(adj_.rows()) + "x" + std::to_string(adj_.cols()) +
                          " but there are " + std::to_string(n) + " labels");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw ValidationError("duplicate node label '" + labels_[i] + "'", {i}, {labels_[i]});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = adj_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw ValidationError("edge " + labels_[i] + " -> " + labels_[j] + " has invalid weight", {i, j},
                              {labels_[i], labels_[j]});
      }
      degree += w;
    }
    if (!(degree > 0.0)) {
      throw ValidationError("node '" + labels_[i] + "' has zero out-degree", {i}, {labels_[i]});
    }
  }
}

std::optional<std::size_t> Digraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Digraph::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw DomainError("unknown node '" + std::string(label) + "'");
}

namespace {

std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_weight(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("invalid number '" + std::string(token) + "'", line_no);
  }
  if (!std::isfinite(value) || value < 0.0) {
    throw ParseError("weight must be finite and non-negative, got '" + std::string(token) + "'", line_no);
  }
  return value;
}

Digraph check_degrees_and_build(std::vector<std::string> labels, Matrix adj) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double degree = 0.0;
    for (double w : adj.row(i)) degree += w;
    if (!(degree > 0.0)) throw ValidationError("node '" + labels[i] + "' has zero out-degree", {i}, {labels[i]});
  }
  return Digraph(std::move(labels), std::move(adj));
}

Digraph load_edge_list(std::istream& in) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> index;
  struct Edge {
    double weight;
    std::size_t line;
  };
  std::map<std::pair<std::size_t, std::size_t>, Edge> edges;

  auto intern = [&](std::string_view name) {
    auto [it, inserted] = index.emplace(std::string(name), labels.size());
    if (inserted) labels.emplace_back(name);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw ParseError("expected 'src dst [weight]', got " + std::to_string(tokens.size()) + " field(s)", line_no);
    }
    const double w = tokens.size() == 3 ? parse_weight(tokens[2], line_no) : 1.0;
    const std::size_t src = intern(tokens[0]);
    const std::size_t dst = intern(tokens[1]);
    auto [it, inserted] = edges.emplace(std::pair{src, dst}, Edge{w, line_no});
    if (!inserted && it->second.weight != w) {
      throw ParseError("edge " + labels[src] + " -> " + labels[dst] + " redefined with a different weight (first at line " +
                           std::to_string(it->second.line) + ")",
                       line_no);
    }
  }
  if (labels.empty()) throw ParseError("empty input: no edges", 0);

  Matrix adj(labels.size(), labels.size());
  for (const auto& [key, e] : edges) adj(key.first, key.second) = e.weight;
  return check_degrees_and_build(std::move(labels), std::move(adj));
}

Digraph load_dense(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_n = false;
  std::size_t row = 0;
  Matrix adj;

  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(strip_comment(line));
    if (tokens.empty()) continue;
    if (!have_n) {
      if (tokens.size() != 1) throw ParseError("expected node count on the first line", line_no);
      auto [ptr, ec] = std::from_chars(tokens[0].data(), tokens[0].data() + tokens[0].size(), n);
      if (ec != std::errc{} || ptr != tokens[0].data() + tokens[0].size() || n == 0) {
        throw ParseError("invalid node count '" + std::string(tokens[0]) + "'", line_no);
      }
      adj = Matrix(n, n);
      have_n = true;
      continue;
    }
    if (row == n) throw ParseError("unexpected extra row", line_no);
    if (tokens.size() != n) {
      throw ParseError("expected " + std::to_string(n) + " weights, got " + std::to_string(tokens.size()), line_no);
    }
    for (std::size_t j = 0; j < n; ++j) adj(row, j) = parse_weight(tokens[j], line_no);
    ++row;
  }
  if (!have_n) throw ParseError("empty input: missing node count", 0);
  if (row != n) throw ParseError("expected " + std::to_string(n) + " rows, got " + std::to_string(row), line_no);

  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i + 1);
  return check_degrees_and_build(std::move(labels), std::move(adj));
}

}  // namespace

Digraph load_graph(std::istream& in, GraphFormat format) {
  return format == GraphFormat::edge_list ? load_edge_list(in) : load_dense(in);
}

Digraph load_graph_file(const std::string& path, GraphFormat format) {
  if (path == "-") return load_graph(std::cin, format);
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open '" + path + "'", 0);
  return load_graph(file, format);
}

namespace {

std::vector<bool> reachable_from(const Matrix& pattern, std::size_t start, bool reverse) {
  const std::size_t n = pattern.rows();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v) {
      const double w = reverse ? pattern(v, u) : pattern(u, v);
      if (w > 0.0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> find_unreachable_pair(const Matrix& pattern) {
  const std::size_t n = pattern.rows();
  if (n == 0) return std::nullopt;
  auto fwd = reachable_from(pattern, 0, false);
  for (std::size_t v = 0; v < n; ++v)
    if (!fwd[v]) return std::pair{std::size_t{0}, v};
  auto rev = reachable_from(pattern, 0, true);
  for (std::size_t v = 0; v < n; ++v)
    if (!rev[v]) return std::pair{v, std::size_t{0}};
  return std::nullopt;
}

bool is_strongly_connected(const Matrix& pattern) { return !find_unreachable_pair(pattern).has_value(); }

bool check_strong_connectivity(const Digraph& g) { return is_strongly_connected(g.adjacency()); }

TransitionMatrix TransitionMatrix::from_probabilities(Matrix p) {
  if (!p.square() || p.rows() == 0) throw ValidationError("transition matrix must be square and non-empty");
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("transition probability outside [0,1]", {i, j});
      s += v;
    }
    if (std::fabs(s - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg << "row " << i << " of the transition matrix sums to " << s;
      throw ValidationError(msg.str(), {i});
    }
  }
  const bool sc = is_strongly_connected(p);
  return TransitionMatrix(std::move(p), sc);
}

TransitionMatrix transition_matrix(const Digraph& g) {
  const std::size_t n = g.size();
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = g.adjacency().row(i);
    double degree = 0.0;
    for (double w : row) degree += w;
    if (!(degree > 0.0)) throw ValidationError("node '" + g.label(i) + "' has zero out-degree", {i}, {g.label(i)});
    for (std::size_t j = 0; j < n; ++j) p(i, j) = row[j] / degree;
  }
  return TransitionMatrix::from_probabilities(std::move(p));
}

}  // namespace rwlap
