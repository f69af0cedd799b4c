#include "doctest.h"

#include <cmath>
#include <sstream>

#include "rwlap/error.hpp"
#include "rwlap/laplacian.hpp"
#include "rwlap/lu.hpp"
#include "support/graphs.hpp"

using namespace rwlap;

namespace {

Matrix asymmetry(const Matrix& a) { return a - a.transpose(); }

TransitionMatrix two_cycle() { return TransitionMatrix::from_probabilities(Matrix{{0, 1}, {1, 0}}); }

}  // namespace

TEST_CASE("normalized Laplacian examples") {
  const auto p = transition_matrix(testing::four_node_graph());
  CHECK(normalized_laplacian(p) == Matrix{{1, -0.5, -0.5, 0}, {-1, 1, 0, 0}, {0, 0, 1, -1}, {-1, 0, 0, 1}});
  CHECK(normalized_laplacian(TransitionMatrix::from_probabilities(Matrix::identity(3))) == Matrix(3, 3));
  CHECK(normalized_laplacian(two_cycle()) == Matrix{{1, -1}, {-1, 1}});
}

TEST_CASE("four-node golden pseudoinverse and stationary distribution") {
  const auto pinv = rw_laplacian_pinv(transition_matrix(testing::four_node_graph()), true);
  const Matrix expected =
      (1.0 / 28.0) * Matrix{{8, -3, -3, -10}, {0, 21, -7, -14}, {-8, -11, 17, 10}, {0, -7, -7, 14}};
  REQUIRE(pinv.normalized_pinv().has_value());
  CHECK(max_abs_diff(*pinv.normalized_pinv(), expected) <= 1e-12);
  const Vector pi_expected{0.4, 0.2, 0.2, 0.2};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(pinv.pi()[i] - pi_expected[i]) <= 1e-12);

  // M_L pi = 0 and 1^T M_L = 0.
  CHECK(max_abs(*pinv.normalized_pinv() * std::span<const double>(pinv.pi())) <= 1e-9);
  CHECK(max_abs(column_sums(*pinv.normalized_pinv())) <= 1e-9);
}

TEST_CASE("random-walk Laplacian of the four-node graph") {
  const auto p = transition_matrix(testing::four_node_graph());
  const auto pinv = rw_laplacian_pinv(p);
  const Matrix expected = Matrix{{0.4, 0, 0, 0}, {0, 0.2, 0, 0}, {0, 0, 0.2, 0}, {0, 0, 0, 0.2}} *
                          Matrix{{1, -0.5, -0.5, 0}, {-1, 1, 0, 0}, {0, 0, 1, -1}, {-1, 0, 0, 1}};
  CHECK(max_abs_diff(pinv.rw_laplacian(), expected) <= 1e-15);
  CHECK(max_abs(row_sums(pinv.rw_laplacian())) <= 1e-12);
  CHECK(max_abs(column_sums(pinv.rw_laplacian())) <= 1e-12);
}

TEST_CASE("two-cycle") {
  const auto pinv = rw_laplacian_pinv(two_cycle());
  CHECK(max_abs_diff(pinv.pinv(), Matrix{{0.5, -0.5}, {-0.5, 0.5}}) <= 1e-15);
  CHECK(max_abs_diff(pinv.rw_laplacian(), Matrix{{0.5, -0.5}, {-0.5, 0.5}}) <= 1e-15);
  CHECK(pinv.pi() == Vector{0.5, 0.5});

  NullityOneFactors f{invert(Matrix{{0.5}}), {1.0}, {1.0}};
  CHECK(max_abs_diff(pinv_nullity1(f), Matrix{{0.5, -0.5}, {-0.5, 0.5}}) <= 1e-15);
}

TEST_CASE("single node") {
  std::istringstream in("a a 1\n");
  const auto pinv = rw_laplacian_pinv(transition_matrix(load_graph(in, GraphFormat::edge_list)));
  CHECK(pinv.pinv() == Matrix{{0}});
  CHECK(pinv.pi() == Vector{1.0});
}

TEST_CASE("reducible input is rejected before any factorization") {
  std::istringstream in("1 2\n2 3\n3 3\n");
  const auto p = transition_matrix(load_graph(in, GraphFormat::edge_list));
  factorization_probe::reset();
  CHECK_THROWS_AS(rw_laplacian_pinv(p), NotStronglyConnectedError);
  CHECK(factorization_probe::count() == 0);
}

TEST_CASE("pipeline performs exactly one factorization of dimension n-1") {
  const auto p = transition_matrix(testing::random_strongly_connected(25, 4));
  factorization_probe::reset();
  (void)rw_laplacian_pinv(p, true);
  CHECK(factorization_probe::dimensions() == std::vector<std::size_t>{24});
}

TEST_CASE("trust network stationary distribution agrees with power iteration") {
  const auto p = TransitionMatrix::from_probabilities(testing::golden_trust_matrix());
  const auto pinv = rw_laplacian_pinv(p);
  const Vector reference = testing::power_iteration(p.probabilities());
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::fabs(pinv.pi()[i] - reference[i]) <= 1e-10);
}

TEST_CASE("property suite on random strongly connected digraphs") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + seed % 28;
    CAPTURE(seed);
    CAPTURE(n);
    const auto p = transition_matrix(testing::random_strongly_connected(n, 1000 + seed));
    const auto pinv = rw_laplacian_pinv(p, true);
    const Matrix& m = pinv.pinv();
    const Matrix& l = pinv.rw_laplacian();

    // Stationary distribution.
    double total = 0.0;
    for (double v : pinv.pi()) {
      CHECK(v > 0.0);
      total += v;
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
    const Vector pit_p = left_multiply(pinv.pi(), p.probabilities());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(pit_p[i] - pinv.pi()[i]) <= 1e-10);
    const Vector reference = testing::power_iteration(p.probabilities());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(pinv.pi()[i] - reference[i]) <= 1e-10);

    // Moore-Penrose conditions and annihilation by the all-ones vectors.
    CHECK(norm_inf(l * m * l - l) <= 1e-9);
    CHECK(norm_inf(m * l * m - m) <= 1e-9);
    CHECK(norm_inf(asymmetry(m * l)) <= 1e-9);
    CHECK(norm_inf(asymmetry(l * m)) <= 1e-9);
    CHECK(max_abs(row_sums(m)) <= 1e-9);
    CHECK(max_abs(column_sums(m)) <= 1e-9);

    // Normalized pseudoinverse annihilators.
    const Matrix& ml = *pinv.normalized_pinv();
    CHECK(max_abs(ml * std::span<const double>(pinv.pi())) <= 1e-9);
    CHECK(max_abs(column_sums(ml)) <= 1e-9);

    // Block inverse residual.
    IndexSet alpha(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) alpha[i] = i;
    const Matrix l_aa = normalized_laplacian(p).submatrix(alpha, alpha);
    CHECK(norm_inf(l_aa * pinv.normalized_block_inverse() - Matrix::identity(n - 1)) <=
          1e-9 * static_cast<double>(n));

    // Upper-left block of the random-walk inverse reconstructed from M:
    // (I + 1 1^T) M_aa (I + 1 1^T).
    const Matrix ones = Matrix(n - 1, n - 1, 1.0);
    const Matrix i_plus = Matrix::identity(n - 1) + ones;
    const Matrix rebuilt = i_plus * m.submatrix(alpha, alpha) * i_plus;
    CHECK(max_rel_diff(rebuilt, pinv.block_inverse()) <= 1e-8);
  }
}
