// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Every tolerance is pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rwlap/lu.hpp"
#include "rwlap/measures.hpp"
#include "rwlap/oracle.hpp"
#include "rwlap/trust.hpp"
#include "support/graphs.hpp"

using namespace rwlap;

namespace {

constexpr double kGoldenPinvTol = 1e-12;
constexpr double kGoldenPiTol = 1e-12;
constexpr double kGoldenTensorTol = 1e-9;
constexpr double kGoldenTrustTol = 5e-4;
constexpr std::size_t kScaleN = 500;
constexpr double kScaleSeconds = 60.0;
constexpr std::size_t kQueries = 1'000'000;
constexpr double kQueryMicros = 1.0;
constexpr double kSliceRelTol = 1e-8;
constexpr double kSchurRelTol = 1e-9;
constexpr double kPropertyTol = 1e-9;
constexpr double kSigmas = 3.0;
constexpr double kSeFloor = 1e-9;
constexpr std::size_t kWalks = 100'000;
constexpr std::uint64_t kSeed = 20240601;
constexpr std::size_t kGraphsPerSize = 25;
constexpr std::size_t kPartitionsPerGraph = 10;
const std::vector<std::size_t> kSizes = {3, 5, 10, 20, 30};

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct FourNode {
  TransitionMatrix p = transition_matrix(testing::four_node_graph());
  LaplacianPinv pinv = rw_laplacian_pinv(p, true);
  FundamentalTensor t{pinv};
};

// Random corpus shared by criteria 6-8.
struct CorpusGraph {
  TransitionMatrix p;
  LaplacianPinv pinv;
};

std::vector<CorpusGraph> build_corpus() {
  std::vector<CorpusGraph> out;
  for (std::size_t n : kSizes) {
    for (std::size_t s = 0; s < kGraphsPerSize; ++s) {
      auto p = transition_matrix(testing::random_strongly_connected(n, 100'000 * n + s));
      auto pinv = rw_laplacian_pinv(p);
      out.push_back({std::move(p), std::move(pinv)});
    }
  }
  return out;
}

Outcome golden_pinv() {
  FourNode f;
  const Matrix expected =
      (1.0 / 28.0) * Matrix{{8, -3, -3, -10}, {0, 21, -7, -14}, {-8, -11, 17, 10}, {0, -7, -7, 14}};
  const double err = max_abs_diff(*f.pinv.normalized_pinv(), expected);
  return {err <= kGoldenPinvTol, fmt("max abs error %.3g", err)};
}

Outcome golden_pi() {
  FourNode f;
  const Vector expected{0.4, 0.2, 0.2, 0.2};
  double err = 0.0;
  for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::fabs(f.pinv.pi()[i] - expected[i]));
  return {err <= kGoldenPiTol, fmt("max abs error %.3g", err)};
}

Outcome golden_tensor() {
  FourNode f;
  const auto golden = testing::golden_four_node_slices();
  double err = 0.0;
  for (std::size_t k = 0; k < 4; ++k) err = std::max(err, max_abs_diff(fundamental_slice(f.t, k), golden[k]));
  return {err <= kGoldenTensorTol, fmt("max abs error over 4 slices %.3g", err)};
}

Outcome golden_trust() {
  const auto net = augment_evaporation(testing::trust_base_graph(), 0.15);
  const std::size_t viewpoint = 3;
  const double plain[] = {0.5962, 0.2913, 0.5332, 1.0, 0.6573};
  const double avoid[] = {0.5962, 0.0, 0.3872, 1.0, 0.5426};
  double err = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    err = std::max(err, std::fabs(pht(net, viewpoint, j) - plain[j]));
    err = std::max(err, std::fabs(pht_avoiding(net, viewpoint, j, {1}) - avoid[j]));
  }
  const auto top_plain = rank_subjects(net, viewpoint).front().subject;
  const auto top_avoid = rank_subjects(net, viewpoint, {1}).front().subject;
  const bool shift = top_plain == 4 && top_avoid == 0;
  return {err <= kGoldenTrustTol && shift,
          fmt("max abs error %.3g", err) + ", argmax " + std::to_string(top_plain + 1) + " -> " +
              std::to_string(top_avoid + 1)};
}

Outcome single_inversion() {
  const auto p = transition_matrix(testing::random_strongly_connected(kScaleN, 5, 0.05));
  factorization_probe::reset();
  const auto t0 = std::chrono::steady_clock::now();
  const auto pinv = rw_laplacian_pinv(p);
  const FundamentalTensor t(pinv);
  double checksum = 0.0;
  for (std::size_t k = 0; k < kScaleN; ++k) checksum += fundamental_slice(t, k)(0, 1);
  const Matrix h = hitting_times(t);
  checksum += h(1, 0);
  const double pipeline = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::size_t factorizations = factorization_probe::count();

  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::uint32_t> pick(0, kScaleN - 1);
  std::vector<std::uint32_t> idx(3 * kQueries);
  for (auto& v : idx) v = pick(rng);
  const auto q0 = std::chrono::steady_clock::now();
  double acc = 0.0;
  for (std::size_t q = 0; q < kQueries; ++q) acc += t(idx[3 * q], idx[3 * q + 1], idx[3 * q + 2]);
  const double query_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - q0).count();
  const double per_query_us = query_s * 1e6 / static_cast<double>(kQueries);
  checksum += acc;

  const bool pass = factorizations == 1 && pipeline <= kScaleSeconds && per_query_us <= kQueryMicros &&
                    std::isfinite(checksum);
  return {pass, "factorizations " + std::to_string(factorizations) + ", n=500 pipeline " +
                    fmt("%.2f s", pipeline) + ", " + fmt("%.4f us/query", per_query_us)};
}

Outcome oracle_equivalence(const std::vector<CorpusGraph>& corpus) {
  std::mt19937_64 rng(kSeed);
  double slice_err = 0.0, schur_err = 0.0;
  std::size_t partitions = 0;
  for (const auto& g : corpus) {
    const std::size_t n = g.p.size();
    const FundamentalTensor t(g.pinv);
    for (std::size_t k = 0; k < n; ++k)
      slice_err = std::max(slice_err, max_rel_diff(fundamental_slice(t, k), brute_force_slice(g.p, k)));
    for (std::size_t r = 0; r < kPartitionsPerGraph; ++r) {
      const std::size_t gsize = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
      const auto rp = testing::random_partition(n, gsize, rng);
      const Partition part = Partition::avoiding(n, rp.gamma, rp.target);
      const Matrix fresh = brute_force_block_inverse(g.p, part.beta());
      schur_err = std::max(schur_err, max_rel_diff(schur_block_inverse(t, part), fresh));
      ++partitions;
    }
  }
  return {slice_err <= kSliceRelTol && schur_err <= kSchurRelTol,
          fmt("slice rel error %.3g", slice_err) + fmt(", Schur rel error %.3g", schur_err) + " over " +
              std::to_string(partitions) + " partitions"};
}

Outcome moore_penrose(const std::vector<CorpusGraph>& corpus) {
  double worst = 0.0;
  for (const auto& g : corpus) {
    const Matrix& m = g.pinv.pinv();
    const Matrix& l = g.pinv.rw_laplacian();
    const Matrix ml = m * l, lm = l * m;
    worst = std::max({worst, norm_inf(l * m * l - l), norm_inf(m * l * m - m), norm_inf(ml - ml.transpose()),
                      norm_inf(lm - lm.transpose()), max_abs(row_sums(m)), max_abs(column_sums(m))});
  }
  return {worst <= kPropertyTol, fmt("worst residual %.3g", worst)};
}

Outcome closed_forms(const std::vector<CorpusGraph>& corpus) {
  double two_form = 0.0, symmetry = 0.0, commute = 0.0;
  for (const auto& g : corpus) {
    const FundamentalTensor t(g.pinv);
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        two_form = std::max(two_form, std::fabs(hitting_time(t, i, k) - hitting_time_by_sum(t, i, k)));
        symmetry = std::max(symmetry, std::fabs(commute_time(t, i, k) - commute_time(t, k, i)));
        commute = std::max(commute, std::fabs(commute_time(t, i, k) - commute_time_by_sum(t, i, k)));
      }
    }
  }
  return {two_form <= kPropertyTol && symmetry <= kPropertyTol && commute <= kPropertyTol,
          fmt("hitting two-form %.3g", two_form) + fmt(", commute symmetry %.3g", symmetry) +
              fmt(", commute sum form vs tensor sum %.3g", commute)};
}

struct Concordance {
  std::size_t checked = 0;
  std::size_t outside = 0;
  double worst_z = 0.0;

  void add(double estimate, double se, double closed) {
    ++checked;
    const double gap = std::fabs(estimate - closed);
    if (gap > kSigmas * se + kSeFloor) ++outside;
    if (se > 0.0) worst_z = std::max(worst_z, gap / se);
  }
};

Outcome monte_carlo() {
  Concordance c;
  std::uint64_t seed = kSeed;

  FourNode f;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (i == k) continue;
      const auto s = simulate_walks(f.p, i, k, {}, kWalks, seed++);
      c.add(s.hit_time_mean, s.hit_time_stderr, hitting_time(f.t, i, k));
      for (std::size_t j = 0; j < 4; ++j)
        if (j != k && j != i) c.add(s.passage_freq[j], s.passage_stderr[j], passage_probability(f.t, i, j, k));
    }
  }
  const auto four_counts = visits_avoiding(f.t, Partition::avoiding(4, {1}, 3));
  for (std::size_t i : four_counts.partition.beta()) {
    const auto s = simulate_walks(f.p, i, 3, {1}, kWalks, seed++);
    for (std::size_t j : four_counts.partition.beta()) c.add(s.visit_mean[j], s.visit_stderr[j], four_counts.count(i, j));
  }

  const auto net = augment_evaporation(testing::trust_base_graph(), 0.15);
  const auto t = net.tensor();
  const std::size_t e = net.evaporation_node();
  for (std::size_t i = 0; i < 5; ++i) {
    const auto s = simulate_walks(net.augmented(), i, e, {}, kWalks, seed++);
    c.add(s.hit_time_mean, s.hit_time_stderr, hitting_time(t, i, e));
    for (std::size_t j = 0; j < 5; ++j)
      if (j != i) c.add(s.passage_freq[j], s.passage_stderr[j], passage_probability(t, i, j, e));
  }
  const auto trust_counts = visits_avoiding(t, Partition::avoiding(6, {1}, e));
  for (std::size_t i : trust_counts.partition.beta()) {
    const auto s = simulate_walks(net.augmented(), i, e, {1}, kWalks, seed++);
    for (std::size_t j : trust_counts.partition.beta()) c.add(s.visit_mean[j], s.visit_stderr[j], trust_counts.count(i, j));
    c.add(s.hit_time_mean, s.hit_time_stderr, conditional_hitting_time(trust_counts, i));
  }

  return {c.outside == 0, std::to_string(c.checked) + " estimates, " + std::to_string(c.outside) +
                              " outside 3 SE, " + fmt("largest |z| %.2f", c.worst_z)};
}

Outcome diagonal_invariance() {
  std::mt19937_64 rng(kSeed);
  std::size_t exact_mismatch = 0;
  Concordance c;
  for (std::size_t r = 0; r < kPartitionsPerGraph; ++r) {
    const std::size_t n = 5 + r % 6;
    const auto p = transition_matrix(testing::random_strongly_connected(n, 900 + r, 0.4));
    const auto pinv = rw_laplacian_pinv(p);
    const FundamentalTensor t(pinv);
    const auto rp = testing::random_partition(n, 1 + r % 2, rng);
    const Partition part = Partition::avoiding(n, rp.gamma, rp.target);
    const auto counts = visits_avoiding(t, part);
    const Matrix block = schur_block_inverse(t, part);
    for (std::size_t a = 0; a < part.beta().size(); ++a) {
      if (!counts.reachable_mask[a]) continue;
      if (counts.counts(a, a) != block(a, a)) ++exact_mismatch;
      const std::size_t j = part.beta()[a];
      const auto s = simulate_walks(p, j, rp.target, part.exit_set(), kWalks, kSeed + 1000 * r + a);
      c.add(s.visit_mean[j], s.visit_stderr[j], counts.counts(a, a));
    }
  }
  return {exact_mismatch == 0 && c.outside == 0,
          std::to_string(exact_mismatch) + " inexact diagonals, " + std::to_string(c.checked) +
              " self-visit estimates, " + std::to_string(c.outside) + " outside 3 SE, " +
              fmt("largest |z| %.2f", c.worst_z)};
}

}  // namespace

int main() {
  report(1, "golden normalized pseudoinverse", golden_pinv());
  report(2, "golden stationary distribution", golden_pi());
  report(3, "golden tensor slices from the pseudoinverse", golden_tensor());
  report(4, "golden trust scores and ranking shift", golden_trust());
  report(5, "single inversion, n=500 wall clock, per-entry query time", single_inversion());
  const auto corpus = build_corpus();
  report(6, "slice and Schur block inverse vs brute force", oracle_equivalence(corpus));
  report(7, "Moore-Penrose conditions and annihilation", moore_penrose(corpus));
  report(8, "hitting two-form, commute symmetry, commute sum form", closed_forms(corpus));
  report(9, "Monte Carlo concordance on both example graphs", monte_carlo());
  report(10, "diagonal invariance under avoidance", diagonal_invariance());
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
