#pragma once

// Personalized hitting time (PHT) trust scores over a network augmented with a
// global evaporation node.

#include <cstddef>
#include <memory>
#include <vector>

#include "rwlap/graph.hpp"
#include "rwlap/laplacian.hpp"
#include "rwlap/tensor.hpp"

namespace rwlap {

class TrustNetwork {
 public:
  const Digraph& base() const noexcept { return *base_; }
  double evaporation_rate() const noexcept { return rate_; }
  // (n+1) x (n+1); the evaporation node is last.
  const TransitionMatrix& augmented() const noexcept { return augmented_; }
  std::size_t evaporation_node() const noexcept { return augmented_.size() - 1; }
  std::size_t size() const noexcept { return augmented_.size(); }

  const LaplacianPinv& pinv() const noexcept { return *pinv_; }
  FundamentalTensor tensor() const { return FundamentalTensor(*pinv_); }

 private:
  friend TrustNetwork augment_evaporation(const Digraph& g, double rate);
  TrustNetwork(std::shared_ptr<const Digraph> base, double rate, TransitionMatrix augmented,
               std::shared_ptr<const LaplacianPinv> pinv)
      : base_(std::move(base)), rate_(rate), augmented_(std::move(augmented)), pinv_(std::move(pinv)) {}

  std::shared_ptr<const Digraph> base_;
  double rate_;
  TransitionMatrix augmented_;
  std::shared_ptr<const LaplacianPinv> pinv_;
};

// Row i of the base walk keeps (1 - rate) of its mass and sends `rate` to the
// evaporation node, which returns uniformly to every original node. Builds the
// pseudoinverse of the augmented walk (one factorization).
// Throws DomainError unless 0 < rate < 1.
TrustNetwork augment_evaporation(const Digraph& g, double rate);

// PHT(i,j) = Pr(i -> j -> evaporation) = N(i,j,e) / N(j,j,e)
double pht(const TrustNetwork& net, std::size_t viewpoint, std::size_t subject);

// PHT restricted to walks that stay clear of `avoid`:
//   N(i,j,e,avoid) / N(j,j,e,avoid)
// taken over the restricted (unconditioned) counts, which reduces to
// [(I - P_bb)^-1]_ij / [(I - P_bb)^-1]_jj. Avoided subjects score 0.
double pht_avoiding(const TrustNetwork& net, std::size_t viewpoint, std::size_t subject, const IndexSet& avoid);

struct TrustScore {
  std::size_t subject;
  double score;
};

// Scores for every original node except the viewpoint, highest first; ties
// keep index order.
std::vector<TrustScore> rank_subjects(const TrustNetwork& net, std::size_t viewpoint, const IndexSet& avoid = {});

}  // namespace rwlap
