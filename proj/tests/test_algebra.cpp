#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tdtomo/algebra.hpp"
#include "test_helpers.hpp"

using namespace tdtomo;
using namespace tdtomo::test;

TEST_CASE("hs_inner is the trace pairing Tr{A^dag B}") {
  CHECK(hs_inner(identity(2), identity(2)).real() == doctest::Approx(2.0));
  CHECK(std::abs(hs_inner(pauli(1), pauli(2))) == doctest::Approx(0.0).epsilon(1e-15));

  SUBCASE("matches the entrywise |a_ij|^2 oracle on a Hermitian operator") {
    const CMatrix m = m1_matrix();
    double oracle = 0.0;
    for (Eigen::Index r = 0; r < 2; ++r) {
      for (Eigen::Index c = 0; c < 2; ++c) oracle += std::norm(m(r, c));
    }
    CHECK(oracle == doctest::Approx(31.0 / 150.0).epsilon(1e-14));
    CHECK(hs_inner(m, m).real() == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(std::abs(hs_inner(m, m).imag()) < 1e-15);
  }

  SUBCASE("conjugate symmetry and real values on Hermitian pairs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
      const CMatrix a = random_cmatrix(3, rng);
      const CMatrix b = random_cmatrix(3, rng);
      CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-12);
      const CMatrix ha = random_hermitian(3, rng);
      const CMatrix hb = random_hermitian(3, rng);
      CHECK(std::abs(hs_inner(ha, hb).imag()) < 1e-12);
    }
  }

  CHECK_THROWS_AS(hs_inner(identity(2), identity(3)), DimensionMismatch);
}

TEST_CASE("min_eigenvalue on Hermitian inputs") {
  CHECK(min_eigenvalue(identity(2)) == doctest::Approx(1.0));
  CMatrix d(2, 2);
  d << 1, 0, 0, 0;
  CHECK(min_eigenvalue(d) == doctest::Approx(0.0).epsilon(1e-15));

  SUBCASE("matches the closed-form 2x2 eigenvalue on M1") {
    // trace 8/15 and determinant 7/180 give the smaller root directly
    const double tr = 8.0 / 15.0;
    const double det = 7.0 / 180.0;
    const double oracle = tr / 2.0 - std::sqrt(tr * tr / 4.0 - det);
    CHECK(oracle == doctest::Approx(0.08716117309551655).epsilon(1e-12));
    CHECK(min_eigenvalue(m1_matrix()) == doctest::Approx(oracle).epsilon(1e-12));
  }

  SUBCASE("rejects non-Hermitian input") {
    CMatrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(min_eigenvalue(bad), NotHermitian);
  }
}

TEST_CASE("span_rank counts independent directions in operator space") {
  const std::vector<CMatrix> basis = {pauli(0), pauli(1), pauli(2), pauli(3)};
  CHECK(span_rank(basis) == 4);

  SUBCASE("the conjugated M1/M2 family spans the qubit operator space") {
    const CMatrix s3 = pauli(3);
    const std::vector<CMatrix> fam = {m1_matrix(), s3 * m1_matrix() * s3, m2_matrix(),
                                      s3 * m2_matrix() * s3};
    CHECK(span_rank(fam) == 4);
  }

  SUBCASE("conjugates of the basis-state projector collapse to rank 2") {
    CMatrix pi1(2, 2);
    pi1 << 0.5, 0, 0, 0;
    std::vector<CMatrix> fam = {pi1};
    for (int k = 1; k <= 3; ++k) fam.push_back(pauli(k) * pi1 * pauli(k));
    CHECK(span_rank(fam) == 2);
  }

  SUBCASE("invariant under rescaling and permutation, bounded by min(n, d^2)") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
      std::vector<CMatrix> ops;
      const auto n = static_cast<std::size_t>(2 + static_cast<int>(rng() % 6));
      for (std::size_t k = 0; k < n; ++k) ops.push_back(random_cmatrix(2, rng));
      const auto rank = span_rank(ops);
      CHECK(rank <= std::min<Eigen::Index>(static_cast<Eigen::Index>(n), 4));

      auto scaled = ops;
      scaled[rng() % n] *= Complex(0.0, -3.7);
      CHECK(span_rank(scaled) == rank);

      auto shuffled = ops;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      CHECK(span_rank(shuffled) == rank);
    }
  }

  CHECK_THROWS_AS(span_rank({}), Error);
  CHECK_THROWS_AS(span_rank({identity(2), identity(3)}), DimensionMismatch);
}

TEST_CASE("solve_linear solves square systems with conditioning diagnostics") {
  SUBCASE("identity system") {
    RMatrix g = RMatrix::Identity(3, 3);
    RVector y(3);
    y << 0.2, 0.5, 0.3;
    const auto sol = solve_linear(g, y);
    CHECK((sol.x - y).norm() < 1e-14);
    CHECK(sol.condition == doctest::Approx(1.0));
  }

  SUBCASE("two-time dephasing system is solvable when the times differ") {
    // rows are pi(t) at t = 0 and t = ln 2 with unit rate
    RMatrix g(2, 2);
    g << 1.0, 0.0, 0.75, 0.25;
    RVector x_true(2);
    x_true << 0.3, 0.6;
    const RVector y = g * x_true;
    const auto sol = solve_linear(g, y);
    CHECK((sol.x - x_true).norm() < 1e-13);
  }

  SUBCASE("a repeated time collapses the rows and is refused") {
    RMatrix g(2, 2);
    g << 0.75, 0.25, 0.75, 0.25;
    RVector y(2);
    y << 0.4, 0.4;
    CHECK_THROWS_AS(solve_linear(g, y), SolvabilityError);
    try {
      solve_linear(g, y);
    } catch (const SolvabilityError& e) {
      CHECK(e.determinant == doctest::Approx(0.0).epsilon(1e-15));
    }
  }

  SUBCASE("multiply-back reproduces the right-hand side within cond * eps") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
      const CMatrix g = random_cmatrix(4, rng) + 2.0 * identity(4);
      CVector y(4);
      for (int k = 0; k < 4; ++k) {
        y(k) = Complex(std::normal_distribution<>()(rng), std::normal_distribution<>()(rng));
      }
      const auto sol = solve_linear(g, y);
      CHECK((g * sol.x - y).cwiseAbs().maxCoeff() <= sol.condition * 1e-9);
    }
  }
}

TEST_CASE("solve_least_squares handles overdetermined systems") {
  RMatrix a(4, 2);
  a << 1, 0, 0, 1, 1, 1, 1, -1;
  RVector x_true(2);
  x_true << 0.7, -0.2;
  const RVector b = a * x_true;
  const auto sol = solve_least_squares(a, b);
  CHECK((sol.x - x_true).norm() < 1e-13);
  CHECK(sol.residual < 1e-13);

  SUBCASE("rank-deficient columns are refused") {
    RMatrix bad(3, 2);
    bad << 1, 2, 2, 4, 3, 6;
    RVector y(3);
    y << 1, 2, 3;
    CHECK_THROWS_AS(solve_least_squares(bad, y), SolvabilityError);
  }

  SUBCASE("underdetermined shape is refused") {
    RMatrix wide(2, 3);
    wide.setIdentity();
    RVector y(2);
    y << 1, 2;
    CHECK_THROWS_AS(solve_least_squares(wide, y), Underdetermined);
  }
}

TEST_CASE("tolerances are strictly positive by default") {
  const Tolerance& tol = default_tolerance();
  CHECK(tol.eps_abs > 0.0);
  CHECK(tol.eps_rank > 0.0);
  CHECK(tol.eps_abs == doctest::Approx(1e-9));
}
