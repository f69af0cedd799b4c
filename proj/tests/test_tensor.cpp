#include "doctest.h"

#include <cmath>
#include <random>

#include "rwlap/error.hpp"
#include "rwlap/lu.hpp"
#include "rwlap/oracle.hpp"
#include "rwlap/tensor.hpp"
#include "support/graphs.hpp"

using namespace rwlap;

namespace {

struct FourNode {
  TransitionMatrix p = transition_matrix(testing::four_node_graph());
  LaplacianPinv pinv = rw_laplacian_pinv(p);
  FundamentalTensor t{pinv};
};

}  // namespace

TEST_CASE("four-node slices reproduce the reference tensor") {
  FourNode f;
  const auto golden = testing::golden_four_node_slices();
  for (std::size_t k = 0; k < 4; ++k) {
    CAPTURE(k);
    const Matrix slice = fundamental_slice(f.t, k);
    CHECK(max_abs_diff(slice, golden[k]) <= 1e-9);
    CHECK(max_abs_diff(brute_force_slice(f.p, k), golden[k]) <= 1e-12);
  }
  CHECK(tensor_entry(f.t, 0, 1, 3) == doctest::Approx(1.0));
  CHECK(tensor_entry(f.t, 1, 1, 3) == doctest::Approx(2.0));
  CHECK(tensor_entry(f.t, 2, 2, 1) == doctest::Approx(2.0));
}

TEST_CASE("target rows and columns are exactly zero") {
  const auto p = transition_matrix(testing::random_strongly_connected(12, 5));
  const auto pinv = rw_laplacian_pinv(p);
  const FundamentalTensor t(pinv);
  for (std::size_t k = 0; k < 12; ++k) {
    const Matrix slice = fundamental_slice(t, k);
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(slice(i, k) == 0.0);
      CHECK(slice(k, i) == 0.0);
      CHECK(t(i, k, k) == 0.0);
      CHECK(t(k, i, k) == 0.0);
      for (std::size_t j = 0; j < 12; ++j) {
        CHECK(slice(i, j) >= -1e-9);
        CHECK(slice(i, j) == t(i, j, k));
      }
    }
  }
}

TEST_CASE("two-cycle entry") {
  const auto pinv = rw_laplacian_pinv(TransitionMatrix::from_probabilities(Matrix{{0, 1}, {1, 0}}));
  CHECK(tensor_entry(FundamentalTensor(pinv), 0, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("full tensor materialization") {
  FourNode f;
  CHECK(full_tensor_bytes(4) == 4 * 4 * 4 * sizeof(double));
  const auto all = full_tensor(f.t);
  REQUIRE(all.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(all[k] == fundamental_slice(f.t, k));
}

TEST_CASE("slices match brute-force inversion on random digraphs") {
  for (std::size_t n : {3u, 5u, 10u, 20u, 30u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = transition_matrix(testing::random_strongly_connected(n, 31 * n + seed));
      const auto pinv = rw_laplacian_pinv(p);
      const FundamentalTensor t(pinv);
      for (std::size_t k = 0; k < n; ++k) {
        CAPTURE(n);
        CAPTURE(k);
        CHECK(max_rel_diff(fundamental_slice(t, k), brute_force_slice(p, k)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(Partition(4, {}, {1}, 3), DomainError);
  CHECK_THROWS_AS(Partition(4, {0, 1}, {1}, 3), DomainError);
  CHECK_THROWS_AS(Partition(4, {0}, {1}, 4), DomainError);
  CHECK_THROWS_AS(Partition(4, {0, 3}, {1}, 3), DomainError);
  CHECK_THROWS_AS(Partition::avoiding(4, {3}, 3), DomainError);
  const Partition p(5, {0, 2}, {1}, 4);
  CHECK(p.exit_set() == IndexSet{1, 3});
  CHECK(p.beta_position(2) == 1u);
  CHECK_FALSE(p.beta_position(1).has_value());
  CHECK_THROWS_AS(p.require_beta(1, "source"), DomainError);
  CHECK(Partition::avoiding(4, {1}, 3).beta() == IndexSet{0, 2});
}

TEST_CASE("four-node avoidance examples") {
  FourNode f;
  const Partition part(4, {0, 2}, {1}, 3);
  for (auto route : {BlockInverseRoute::schur, BlockInverseRoute::direct, BlockInverseRoute::automatic}) {
    CHECK(max_abs_diff(schur_block_inverse(f.t, part, route), Matrix{{1, 0.5}, {0, 1}}) <= 1e-12);
  }
  const auto counts = visits_avoiding(f.t, part);
  CHECK(max_abs_diff(counts.counts, Matrix{{1, 1}, {0, 1}}) <= 1e-12);
  CHECK(counts.count(0, 2) == doctest::Approx(1.0));
  CHECK(counts.passage_probability(0, 2) == doctest::Approx(1.0));
  CHECK(counts.reachable(0));
  CHECK_THROWS_AS(counts.count(1, 0), DomainError);

  const auto blocked = visits_avoiding(f.t, Partition::avoiding(4, {2}, 3));
  CHECK_FALSE(blocked.reachable(0));
  CHECK_FALSE(blocked.reachable(1));
  CHECK_THROWS_AS(blocked.count(0, 1), UnreachableError);
}

TEST_CASE("empty avoidance set returns the target slice block") {
  FourNode f;
  const Partition part = Partition::avoiding(4, {}, 3);
  const Matrix block = schur_block_inverse(f.t, part, BlockInverseRoute::schur);
  const Matrix slice = fundamental_slice(f.t, 3);
  CHECK(block == slice.submatrix(part.beta(), part.beta()));
}

TEST_CASE("Schur block inverse matches fresh inversion on random partitions") {
  std::mt19937_64 rng(99);
  for (std::size_t n : {3u, 5u, 10u, 20u}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto p = transition_matrix(testing::random_strongly_connected(n, 7 * n + seed, 0.5));
      const auto pinv = rw_laplacian_pinv(p);
      const FundamentalTensor t(pinv);
      for (int trial = 0; trial < 10; ++trial) {
        const std::size_t g = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
        const auto rp = testing::random_partition(n, g, rng);
        const Partition part = Partition::avoiding(n, rp.gamma, rp.target);
        Matrix reference;
        try {
          reference = brute_force_block_inverse(p, part.beta());
        } catch (const SingularError&) {
          CHECK_THROWS_AS(schur_block_inverse(t, part, BlockInverseRoute::direct), DomainError);
          continue;
        }
        CAPTURE(n);
        CAPTURE(g);
        for (auto route : {BlockInverseRoute::schur, BlockInverseRoute::direct}) {
          CHECK(max_rel_diff(schur_block_inverse(t, part, route), reference) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("Schur route touches only a small factorization") {
  const std::size_t n = 40;
  const auto p = transition_matrix(testing::random_strongly_connected(n, 123));
  const auto pinv = rw_laplacian_pinv(p);
  const FundamentalTensor t(pinv);
  factorization_probe::reset();
  (void)schur_block_inverse(t, Partition::avoiding(n, {1, 2, 3}, 0));
  CHECK(factorization_probe::dimensions() == std::vector<std::size_t>{3});
}

TEST_CASE("block identities of the target slice") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 6 + seed;
    const auto p = transition_matrix(testing::random_strongly_connected(n, 500 + seed));
    const auto pinv = rw_laplacian_pinv(p);
    const FundamentalTensor t(pinv);
    std::mt19937_64 rng(seed);
    const auto rp = testing::random_partition(n, 1 + seed % 3, rng);
    const Partition part = Partition::avoiding(n, rp.gamma, rp.target);
    const Matrix lap = normalized_laplacian(p);
    const Matrix slice = fundamental_slice(t, rp.target);
    const IndexSet& b = part.beta();
    const IndexSet& g = part.gamma();
    const Matrix zero_block = lap.submatrix(b, b) * slice.submatrix(b, g) + lap.submatrix(b, g) * slice.submatrix(g, g);
    const Matrix id_block = lap.submatrix(b, b) * slice.submatrix(b, b) + lap.submatrix(b, g) * slice.submatrix(g, b);
    CHECK(max_abs(zero_block) <= 1e-9);
    CHECK(max_abs_diff(id_block, Matrix::identity(b.size())) <= 1e-9);
  }
}

TEST_CASE("avoidance counts: diagonal invariance and bounds") {
  std::mt19937_64 rng(2024);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 5 + seed;
    const auto p = transition_matrix(testing::random_strongly_connected(n, 800 + seed, 0.4));
    const auto pinv = rw_laplacian_pinv(p);
    const FundamentalTensor t(pinv);
    const auto rp = testing::random_partition(n, 1 + seed % 2, rng);
    const Partition part = Partition::avoiding(n, rp.gamma, rp.target);
    const auto counts = visits_avoiding(t, part);
    const Matrix block = schur_block_inverse(t, part);
    for (std::size_t a = 0; a < part.beta().size(); ++a) {
      if (!counts.reachable_mask[a]) continue;
      CHECK(counts.counts(a, a) == block(a, a));
      for (std::size_t c = 0; c < part.beta().size(); ++c) {
        if (!counts.reachable_mask[c]) continue;
        CHECK(counts.counts(a, c) >= -1e-9);
        CHECK(counts.passage(a, c) >= -1e-9);
        CHECK(counts.passage(a, c) <= 1 + 1e-9);
      }
    }
  }
}

TEST_CASE("Monte Carlo visit counts match tensor rows") {
  FourNode f;
  const std::size_t walks = 100'000;
  for (std::size_t k = 0; k < 4; ++k) {
    const Matrix slice = fundamental_slice(f.t, k);
    for (std::size_t i = 0; i < 4; ++i) {
      if (i == k) continue;
      const auto stats = simulate_walks(f.p, i, k, {}, walks, 17 + 4 * k + i);
      for (std::size_t j = 0; j < 4; ++j) {
        CAPTURE(i);
        CAPTURE(j);
        CAPTURE(k);
        const double tol = std::max(3.0 * stats.visit_stderr[j], 0.02);
        CHECK(std::fabs(stats.visit_mean[j] - slice(i, j)) <= tol);
      }
    }
  }
}

TEST_CASE("rejection-sampled counts match avoidance counts") {
  FourNode f;
  const auto counts = visits_avoiding(f.t, Partition::avoiding(4, {1}, 3));
  for (std::size_t i : counts.partition.beta()) {
    const auto stats = simulate_walks(f.p, i, 3, {1}, 100'000, 5 + i);
    for (std::size_t j : counts.partition.beta()) {
      const double tol = 3.0 * stats.visit_stderr[j] + 1e-9;
      CHECK(std::fabs(stats.visit_mean[j] - counts.count(i, j)) <= tol);
    }
  }
}
