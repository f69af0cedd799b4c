#pragma once

// Independent reference computations: per-target direct inversion (through
// Eigen, sharing no code with the pseudoinverse pipeline) and seeded Monte
// Carlo simulation of the walk.

#include <cstddef>
#include <cstdint>

#include "rwlap/graph.hpp"
#include "rwlap/matrix.hpp"

namespace rwlap {

// (I - P_aa)^-1 with node k absorbing, padded with a zero row and column at k.
// Throws SingularError if the reduced matrix is not invertible.
Matrix brute_force_slice(const TransitionMatrix& p, std::size_t k);

// (I - P_bb)^-1 by direct inversion, rows and columns in `beta` order.
Matrix brute_force_block_inverse(const TransitionMatrix& p, const IndexSet& beta);

struct WalkOptions {
  static constexpr std::size_t kDefaultStepCap = 1'000'000;
  static constexpr std::size_t kBatchSize = 8192;

  std::size_t step_cap = kDefaultStepCap;
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Empirical estimators over simulated walks from `start` until first arrival
// at `target`. A visit is one departure from a node.
//
// Walks that touch the avoid set are discarded at that step (rejection); the
// visit, hitting-time and passage estimators are conditional on acceptance.
// `exit_passage_freq` is instead taken over every uncapped walk and counts
// walks that visited j before touching the avoid set or the target.
struct WalkStats {
  std::uint64_t seed = 0;
  std::size_t walks = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t capped = 0;

  Vector visit_mean;
  Vector visit_stderr;
  double hit_time_mean = 0.0;
  double hit_time_stderr = 0.0;
  Vector passage_freq;
  Vector passage_stderr;
  Vector exit_passage_freq;
  Vector exit_passage_stderr;

  double acceptance_rate() const noexcept {
    const std::size_t finished = walks - capped;
    return finished == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(finished);
  }

  friend bool operator==(const WalkStats&, const WalkStats&) = default;
};

// Deterministic for a given seed regardless of thread count: batch b draws from
// std::mt19937_64 seeded with std::seed_seq{seed_lo, seed_hi, b}, and batches
// are merged in index order. Uniforms use the top 53 bits of each draw.
// Throws EstimationError when no walk is accepted.
WalkStats simulate_walks(const TransitionMatrix& p, std::size_t start, std::size_t target, const IndexSet& avoid,
                         std::size_t walks, std::uint64_t seed, const WalkOptions& options = {});

}  // namespace rwlap
