#include "rwlap/trust.hpp"

#include <algorithm>
#include <cmath>

#include "rwlap/error.hpp"
#include "rwlap/measures.hpp"

namespace rwlap {

TrustNetwork augment_evaporation(const Digraph& g, double rate) {
  if (!(rate > 0.0 && rate < 1.0)) throw DomainError("evaporation rate must lie strictly between 0 and 1");
  const TransitionMatrix base = transition_matrix(g);
  const std::size_t n = g.size();
  Matrix p(n + 1, n + 1);
  const double keep = 1.0 - rate;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) p(i, j) = keep * base(i, j);
    p(i, n) = rate;
  }
  const double back = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) p(n, j) = back;

  TransitionMatrix augmented = TransitionMatrix::from_probabilities(std::move(p));
  auto pinv = std::make_shared<const LaplacianPinv>(rw_laplacian_pinv(augmented));
  return TrustNetwork(std::make_shared<const Digraph>(g), rate, std::move(augmented), std::move(pinv));
}

namespace {

void check_nodes(const TrustNetwork& net, std::size_t viewpoint, std::size_t subject) {
  const std::size_t e = net.evaporation_node();
  if (viewpoint >= e) throw DomainError("viewpoint must be an original node", {viewpoint});
  if (subject >= e) throw DomainError("subject must be an original node", {subject});
}

Partition trust_partition(const TrustNetwork& net, std::size_t viewpoint, const IndexSet& avoid) {
  for (std::size_t g : avoid) {
    if (g >= net.evaporation_node()) throw DomainError("avoid set may only name original nodes", {g});
    if (g == viewpoint) throw DomainError("the viewpoint cannot be avoided", {g});
  }
  return Partition::avoiding(net.size(), avoid, net.evaporation_node());
}

double restricted_ratio(const AvoidanceCounts& counts, std::size_t viewpoint, std::size_t subject) {
  const Partition& p = counts.partition;
  const std::size_t a = p.require_beta(viewpoint, "viewpoint");
  if (!counts.reachable_mask[a]) {
    throw UnreachableError("viewpoint cannot reach the evaporation node while avoiding the given set",
                           {viewpoint, p.target()});
  }
  auto c = p.beta_position(subject);
  if (!c) return 0.0;
  return counts.block_inverse(a, *c) / counts.block_inverse(*c, *c);
}

}  // namespace

double pht(const TrustNetwork& net, std::size_t viewpoint, std::size_t subject) {
  check_nodes(net, viewpoint, subject);
  return passage_probability(net.tensor(), viewpoint, subject, net.evaporation_node());
}

double pht_avoiding(const TrustNetwork& net, std::size_t viewpoint, std::size_t subject, const IndexSet& avoid) {
  check_nodes(net, viewpoint, subject);
  if (avoid.empty()) return pht(net, viewpoint, subject);
  const AvoidanceCounts counts = visits_avoiding(net.tensor(), trust_partition(net, viewpoint, avoid));
  return restricted_ratio(counts, viewpoint, subject);
}

std::vector<TrustScore> rank_subjects(const TrustNetwork& net, std::size_t viewpoint, const IndexSet& avoid) {
  check_nodes(net, viewpoint, viewpoint);
  std::vector<TrustScore> scores;
  const std::size_t n = net.evaporation_node();
  if (avoid.empty()) {
    for (std::size_t j = 0; j < n; ++j)
      if (j != viewpoint) scores.push_back({j, pht(net, viewpoint, j)});
  } else {
    const AvoidanceCounts counts = visits_avoiding(net.tensor(), trust_partition(net, viewpoint, avoid));
    for (std::size_t j = 0; j < n; ++j)
      if (j != viewpoint) scores.push_back({j, restricted_ratio(counts, viewpoint, j)});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const TrustScore& a, const TrustScore& b) { return a.score > b.score; });
  return scores;
}

}  // namespace rwlap
