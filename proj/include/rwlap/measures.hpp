#pragma once

// Walk-based node and pair measures read off the fundamental tensor. None of
// these re-invert anything except the small Schur solve behind avoidance
// queries.

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "rwlap/tensor.hpp"

namespace rwlap {

enum class MeasureKind { hitting, commute, commute_centrality, closeness, betweenness, passage, conditional_hitting };

std::string_view to_string(MeasureKind kind);

struct MeasureReport {
  MeasureKind kind;
  // Keyed by the node tuple the value belongs to: (k), (i,k) or (i,j,k).
  std::map<std::vector<std::size_t>, double> values;

  bool is_probability() const noexcept { return kind == MeasureKind::passage; }
  // Probabilities within [-1e-9, 1+1e-9], step counts >= -1e-9.
  bool satisfies_bounds() const;
};

// Expected steps from i to first arrival at k:
//   m_kk - m_ik + sum_j (m_ij - m_kj) pi_j
double hitting_time(const FundamentalTensor& t, std::size_t i, std::size_t k);
// sum_j N(i,j,k)
double hitting_time_by_sum(const FundamentalTensor& t, std::size_t i, std::size_t k);
// H(i,k) for all pairs in O(n^2).
Matrix hitting_times(const FundamentalTensor& t);

// m_kk + m_ii - m_ik - m_ki
double commute_time(const FundamentalTensor& t, std::size_t i, std::size_t k);
// H(i,k) + H(k,i) with both hitting times summed from tensor entries.
double commute_time_by_sum(const FundamentalTensor& t, std::size_t i, std::size_t k);

// (1/n) sum_i C(i,k)
double commute_centrality(const FundamentalTensor& t, std::size_t k);

// Two candidate closed forms for commute_centrality, kept for diagnostics.
// `termwise` is m_kk + trace(M)/n; `lumped` is (m_kk + trace(M))/n. Only the
// termwise form equals the definition in general.
struct CentralityClosedForms {
  double termwise;
  double lumped;
};
CentralityClosedForms commute_centrality_closed_forms(const FundamentalTensor& t, std::size_t k);

// sum_i H(i,k)
double closeness(const FundamentalTensor& t, std::size_t k);

// Pr(i -> j -> k) = N(i,j,k) / N(j,j,k). Throws DomainError when j == k.
double passage_probability(const FundamentalTensor& t, std::size_t i, std::size_t j, std::size_t k);

// sum over i != j, k != j of Pr(i -> j -> k). The i == k terms are zero under
// the departure convention; `exclude_diagonal` skips them outright.
double betweenness(const FundamentalTensor& t, std::size_t j, bool exclude_diagonal = false);

// Pr(i -> j -> target | walk never touches the avoided set).
double passage_probability_avoiding(const FundamentalTensor& t, std::size_t i, std::size_t j, const Partition& p);
double passage_probability_avoiding(const AvoidanceCounts& counts, std::size_t i, std::size_t j);

// H(i, target, gamma) = sum_{j in beta} N(i, j, target, gamma)
double conditional_hitting_time(const FundamentalTensor& t, std::size_t i, const Partition& p);
double conditional_hitting_time(const AvoidanceCounts& counts, std::size_t i);

// Per-node report for commute_centrality, closeness or betweenness.
MeasureReport centrality_report(const FundamentalTensor& t, MeasureKind kind, bool exclude_diagonal = false);

}  // namespace rwlap
