#include "rwlap/measures.hpp"

#include <stdexcept>

#include "rwlap/error.hpp"
#include "rwlap/kernels.hpp"

namespace rwlap {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::hitting: return "hitting";
    case MeasureKind::commute: return "commute";
    case MeasureKind::commute_centrality: return "commute-centrality";
    case MeasureKind::closeness: return "closeness";
    case MeasureKind::betweenness: return "betweenness";
    case MeasureKind::passage: return "passage";
    case MeasureKind::conditional_hitting: return "conditional-hitting";
  }
  return "unknown";
}

bool MeasureReport::satisfies_bounds() const {
  constexpr double eps = 1e-9;
  for (const auto& [key, v] : values) {
    if (!(v >= -eps)) return false;
    if (is_probability() && !(v <= 1.0 + eps)) return false;
  }
  return true;
}

namespace {

void check_index(const FundamentalTensor& t, std::size_t i) {
  if (i >= t.size()) throw DomainError("node index out of range", {i});
}

}  // namespace

double hitting_time(const FundamentalTensor& t, std::size_t i, std::size_t k) {
  check_index(t, i);
  check_index(t, k);
  if (i == k) return 0.0;
  const Matrix& m = t.pinv().pinv();
  const Vector& pi = t.pinv().pi();
  const std::size_t n = t.size();
  const auto& kern = kernels::active();
  const double wi = kern.dot(m.row(i).data(), pi.data(), n);
  const double wk = kern.dot(m.row(k).data(), pi.data(), n);
  return m(k, k) - m(i, k) + (wi - wk);
}

double hitting_time_by_sum(const FundamentalTensor& t, std::size_t i, std::size_t k) {
  check_index(t, i);
  check_index(t, k);
  double h = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) h += t(i, j, k);
  return h;
}

Matrix hitting_times(const FundamentalTensor& t) {
  const Matrix& m = t.pinv().pinv();
  const std::size_t n = t.size();
  const Vector w = m * std::span<const double>(t.pinv().pi());
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (i != k) h(i, k) = m(k, k) - m(i, k) + (w[i] - w[k]);
  return h;
}

double commute_time(const FundamentalTensor& t, std::size_t i, std::size_t k) {
  check_index(t, i);
  check_index(t, k);
  if (i == k) return 0.0;
  const Matrix& m = t.pinv().pinv();
  return m(k, k) + m(i, i) - m(i, k) - m(k, i);
}

double commute_time_by_sum(const FundamentalTensor& t, std::size_t i, std::size_t k) {
  return hitting_time_by_sum(t, i, k) + hitting_time_by_sum(t, k, i);
}

double commute_centrality(const FundamentalTensor& t, std::size_t k) {
  check_index(t, k);
  double total = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) total += commute_time(t, i, k);
  return total / static_cast<double>(t.size());
}

CentralityClosedForms commute_centrality_closed_forms(const FundamentalTensor& t, std::size_t k) {
  check_index(t, k);
  const Matrix& m = t.pinv().pinv();
  const double n = static_cast<double>(t.size());
  double trace = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) trace += m(i, i);
  return {m(k, k) + trace / n, (m(k, k) + trace) / n};
}

double closeness(const FundamentalTensor& t, std::size_t k) {
  check_index(t, k);
  double total = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) total += hitting_time(t, i, k);
  return total;
}

double passage_probability(const FundamentalTensor& t, std::size_t i, std::size_t j, std::size_t k) {
  check_index(t, i);
  check_index(t, j);
  check_index(t, k);
  if (j == k) throw DomainError("passage probability needs an intermediate node distinct from the target", {j, k});
  if (i == j) return 1.0;
  return t(i, j, k) / t(j, j, k);
}

double betweenness(const FundamentalTensor& t, std::size_t j, bool exclude_diagonal) {
  check_index(t, j);
  const std::size_t n = t.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j || (exclude_diagonal && i == k)) continue;
      total += passage_probability(t, i, j, k);
    }
  }
  return total;
}

double passage_probability_avoiding(const AvoidanceCounts& counts, std::size_t i, std::size_t j) {
  return counts.passage_probability(i, j);
}

double passage_probability_avoiding(const FundamentalTensor& t, std::size_t i, std::size_t j, const Partition& p) {
  return passage_probability_avoiding(visits_avoiding(t, p), i, j);
}

double conditional_hitting_time(const AvoidanceCounts& counts, std::size_t i) {
  double total = 0.0;
  for (std::size_t j : counts.partition.beta()) total += counts.count(i, j);
  return total;
}

double conditional_hitting_time(const FundamentalTensor& t, std::size_t i, const Partition& p) {
  return conditional_hitting_time(visits_avoiding(t, p), i);
}

MeasureReport centrality_report(const FundamentalTensor& t, MeasureKind kind, bool exclude_diagonal) {
  MeasureReport r{kind, {}};
  for (std::size_t k = 0; k < t.size(); ++k) {
    double v = 0.0;
    switch (kind) {
      case MeasureKind::commute_centrality: v = commute_centrality(t, k); break;
      case MeasureKind::closeness: v = closeness(t, k); break;
      case MeasureKind::betweenness: v = betweenness(t, k, exclude_diagonal); break;
      default: throw std::invalid_argument("centrality_report: not a per-node measure");
    }
    r.values[{k}] = v;
  }
  return r;
}

}  // namespace rwlap
