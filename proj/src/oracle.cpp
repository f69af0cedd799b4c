#include "rwlap/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "rwlap/error.hpp"

namespace rwlap {
namespace {

Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) out(i, j) = e(i, j);
  return out;
}

Eigen::MatrixXd reduced_laplacian(const TransitionMatrix& p, const IndexSet& keep) {
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) a(r, c) = (r == c ? 1.0 : 0.0) - p(keep[r], keep[c]);
  return a;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& a) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw SingularError("oracle: reduced matrix I - P_bb is singular");
  return lu.inverse();
}

}  // namespace

Matrix brute_force_slice(const TransitionMatrix& p, std::size_t k) {
  const std::size_t n = p.size();
  if (k >= n) throw DomainError("slice index out of range", {k});
  const IndexSet alpha = complement(n, std::span(&k, 1));
  Matrix out(n, n);
  if (alpha.empty()) return out;
  const Eigen::MatrixXd inv = checked_inverse(reduced_laplacian(p, alpha));
  for (std::size_t r = 0; r < alpha.size(); ++r)
    for (std::size_t c = 0; c < alpha.size(); ++c) out(alpha[r], alpha[c]) = inv(r, c);
  return out;
}

Matrix brute_force_block_inverse(const TransitionMatrix& p, const IndexSet& beta) {
  return from_eigen(checked_inverse(reduced_laplacian(p, beta)));
}

namespace {

// Per-row cumulative distribution over the nonzero entries.
struct Sampler {
  std::vector<std::vector<double>> cum;
  std::vector<std::vector<std::size_t>> cols;

  explicit Sampler(const TransitionMatrix& p) : cum(p.size()), cols(p.size()) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p(i, j) > 0.0) {
          acc += p(i, j);
          cum[i].push_back(acc);
          cols[i].push_back(j);
        }
      }
    }
  }

  std::size_t next(std::size_t i, double u) const {
    const auto& c = cum[i];
    auto it = std::upper_bound(c.begin(), c.end(), u);
    // Final-bucket clamp for u beyond the rounded total.
    const std::size_t pos = it == c.end() ? c.size() - 1 : static_cast<std::size_t>(it - c.begin());
    return cols[i][pos];
  }
};

struct BatchTotals {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t capped = 0;
  Vector visit_sum, visit_sq;
  double steps_sum = 0.0;
  double steps_sq = 0.0;
  Vector passage, exit_passage;

  explicit BatchTotals(std::size_t n) : visit_sum(n, 0.0), visit_sq(n, 0.0), passage(n, 0.0), exit_passage(n, 0.0) {}
};

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

BatchTotals run_batch(const Sampler& sampler, std::size_t n, std::size_t start, std::size_t target,
                      const std::vector<bool>& avoid, std::size_t count, std::uint64_t seed, std::size_t batch,
                      std::size_t step_cap) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
  std::mt19937_64 rng(seq);
  BatchTotals t(n);
  std::vector<double> visits(n);
  std::vector<std::size_t> touched;

  for (std::size_t w = 0; w < count; ++w) {
    std::fill(visits.begin(), visits.end(), 0.0);
    touched.clear();
    std::size_t cur = start;
    std::size_t steps = 0;
    bool rejected = false;
    bool capped = false;
    while (cur != target) {
      if (avoid[cur]) {
        rejected = true;
        break;
      }
      if (steps == step_cap) {
        capped = true;
        break;
      }
      if (visits[cur] == 0.0) touched.push_back(cur);
      visits[cur] += 1.0;
      ++steps;
      cur = sampler.next(cur, uniform01(rng));
    }
    if (capped) {
      ++t.capped;
      continue;
    }
    for (std::size_t j : touched) t.exit_passage[j] += 1.0;
    if (rejected) {
      ++t.rejected;
      continue;
    }
    ++t.accepted;
    for (std::size_t j : touched) {
      t.visit_sum[j] += visits[j];
      t.visit_sq[j] += visits[j] * visits[j];
      t.passage[j] += 1.0;
    }
    const double s = static_cast<double>(steps);
    t.steps_sum += s;
    t.steps_sq += s * s;
  }
  return t;
}

double stderr_of(double sum, double sq, double m) {
  if (m < 2.0) return 0.0;
  const double mean = sum / m;
  const double var = std::max(0.0, (sq - m * mean * mean) / (m - 1.0));
  return std::sqrt(var / m);
}

}  // namespace

WalkStats simulate_walks(const TransitionMatrix& p, std::size_t start, std::size_t target, const IndexSet& avoid,
                         std::size_t walks, std::uint64_t seed, const WalkOptions& options) {
  const std::size_t n = p.size();
  if (walks == 0) throw DomainError("at least one walk is required");
  if (start >= n || target >= n) throw DomainError("walk endpoint out of range", {start, target});
  std::vector<bool> avoid_mask(n, false);
  for (std::size_t g : avoid) {
    if (g >= n) throw DomainError("avoid index out of range", {g});
    if (g == target) throw DomainError("the target cannot be avoided", {g});
    avoid_mask[g] = true;
  }
  if (avoid_mask[start]) throw DomainError("the start node is in the avoid set", {start});

  const Sampler sampler(p);
  const std::size_t batches = (walks + WalkOptions::kBatchSize - 1) / WalkOptions::kBatchSize;
  std::vector<BatchTotals> totals(batches, BatchTotals(0));

  auto work = [&](std::size_t b) {
    const std::size_t count = std::min(WalkOptions::kBatchSize, walks - b * WalkOptions::kBatchSize);
    totals[b] = run_batch(sampler, n, start, target, avoid_mask, count, seed, b, options.step_cap);
  };

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(batches)));
  if (threads == 1) {
    for (std::size_t b = 0; b < batches; ++b) work(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t b = t; b < batches; b += threads) work(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  BatchTotals all(n);
  for (const auto& t : totals) {
    all.accepted += t.accepted;
    all.rejected += t.rejected;
    all.capped += t.capped;
    all.steps_sum += t.steps_sum;
    all.steps_sq += t.steps_sq;
    for (std::size_t j = 0; j < n; ++j) {
      all.visit_sum[j] += t.visit_sum[j];
      all.visit_sq[j] += t.visit_sq[j];
      all.passage[j] += t.passage[j];
      all.exit_passage[j] += t.exit_passage[j];
    }
  }

  WalkStats s;
  s.seed = seed;
  s.walks = walks;
  s.accepted = all.accepted;
  s.rejected = all.rejected;
  s.capped = all.capped;
  if (s.accepted == 0) {
    std::ostringstream msg;
    msg << "no accepted walks (" << s.rejected << " rejected, " << s.capped << " capped); acceptance rate "
        << s.acceptance_rate();
    throw EstimationError(msg.str(), s.acceptance_rate());
  }

  const double m = static_cast<double>(s.accepted);
  const double finished = static_cast<double>(s.accepted + s.rejected);
  s.visit_mean.resize(n);
  s.visit_stderr.resize(n);
  s.passage_freq.resize(n);
  s.passage_stderr.resize(n);
  s.exit_passage_freq.resize(n);
  s.exit_passage_stderr.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.visit_mean[j] = all.visit_sum[j] / m;
    s.visit_stderr[j] = stderr_of(all.visit_sum[j], all.visit_sq[j], m);
    const double q = all.passage[j] / m;
    s.passage_freq[j] = q;
    s.passage_stderr[j] = std::sqrt(q * (1.0 - q) / m);
    const double e = all.exit_passage[j] / finished;
    s.exit_passage_freq[j] = e;
    s.exit_passage_stderr[j] = std::sqrt(e * (1.0 - e) / finished);
  }
  s.hit_time_mean = all.steps_sum / m;
  s.hit_time_stderr = stderr_of(all.steps_sum, all.steps_sq, m);
  return s;
}

}  // namespace rwlap
