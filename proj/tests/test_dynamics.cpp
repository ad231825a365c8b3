#include <doctest.h>

#include <cmath>
#include <random>

#include "tdtomo/dynamics.hpp"
#include "test_helpers.hpp"

using namespace tdtomo;
using namespace tdtomo::test;

namespace {

std::vector<RandomUnitaryDynamics> all_models() {
  return {make_model(ModelId::dephasing(1.0)), make_model(ModelId::pauli_rud()),
          make_model(ModelId::weyl_rud())};
}

}  // namespace

TEST_CASE("make_model builds the three named models") {
  SUBCASE("dephasing mixes identity and the z conjugation") {
    const auto m = make_model(ModelId::dephasing(1.0));
    CHECK(m.kappa() == 2);
    CHECK((m.unitaries()[0] - pauli(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m.unitaries()[1] - pauli(3)).cwiseAbs().maxCoeff() == 0.0);
    const RVector pi0 = m.pi_vector(0.0);
    CHECK(pi0(0) == doctest::Approx(1.0));
    CHECK(pi0(1) == doctest::Approx(0.0));
  }

  SUBCASE("pauli_rud distribution sums to one at all times") {
    const auto m = make_model(ModelId::pauli_rud());
    CHECK(m.kappa() == 4);
    for (double t : {0.0, 0.5, 1.0, 10.0}) {
      CHECK(m.pi_vector(t).sum() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  SUBCASE("weyl_rud carries nine unitaries that cube to identity") {
    const auto m = make_model(ModelId::weyl_rud());
    CHECK(m.kappa() == 9);
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    CMatrix clock(3, 3);
    clock.setZero();
    clock(0, 0) = 1.0;
    clock(1, 1) = w;
    clock(2, 2) = w * w;
    CHECK((m.unitaries()[3] - clock).cwiseAbs().maxCoeff() < 1e-15);
    CMatrix u11(3, 3), u22(3, 3);
    u11 << 0, 1, 0, 0, 0, w, w * w, 0, 0;
    u22 << 0, 0, 1, w * w, 0, 0, 0, w, 0;
    CHECK((m.unitaries()[4] - u11).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m.unitaries()[8] - u22).cwiseAbs().maxCoeff() < 1e-15);
    for (const auto& u : m.unitaries()) {
      CHECK((u.adjoint() * u - identity(3)).cwiseAbs().maxCoeff() < 1e-15);
      CHECK(((u * u * u) - identity(3)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  SUBCASE("equal rates are rejected") {
    CHECK_THROWS_AS(make_model(ModelId::pauli_rud({1.0, 1.0, 1.1})), DegenerateRates);
    auto rates = ModelId::weyl_rud().rates;
    rates[5] = rates[2];
    CHECK_THROWS_AS(make_model(ModelId::weyl_rud(rates)), DegenerateRates);
  }

  SUBCASE("nonpositive rates are rejected") {
    CHECK_THROWS_AS(make_model(ModelId::dephasing(0.0)), ConfigError);
    CHECK_THROWS_AS(make_model(ModelId::dephasing(-1.0)), ConfigError);
  }
}

TEST_CASE("pi_vector evaluates the closed-form distributions") {
  SUBCASE("dephasing approaches the even mixture") {
    const auto m = make_model(ModelId::dephasing(1.0));
    const RVector pi = m.pi_vector(100.0);
    CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(pi(1) == doctest::Approx(0.5).epsilon(1e-9));
  }

  SUBCASE("weyl_rud starts at the identity point") {
    const auto m = make_model(ModelId::weyl_rud());
    const RVector pi = m.pi_vector(0.0);
    CHECK(pi(0) == doctest::Approx(1.0));
    CHECK(pi.tail(8).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("pauli_rud matches the per-rate formula") {
    const auto m = make_model(ModelId::pauli_rud({0.9, 1.0, 1.1}));
    CHECK(m.pi_vector(1.0)(1) == doctest::Approx((1.0 - std::exp(-0.9)) / 4.0).epsilon(1e-14));
  }

  SUBCASE("negative time is rejected") {
    CHECK_THROWS_AS(make_model(ModelId::dephasing(1.0)).pi_vector(-0.1), Error);
  }

  SUBCASE("entries stay in [0,1] and sum to one on a log grid") {
    for (const auto& m : all_models()) {
      for (double t = 1e-3; t <= 1e3; t *= 10.0) {
        const RVector pi = m.pi_vector(t);
        CHECK(pi.minCoeff() >= 0.0);
        CHECK(pi.maxCoeff() <= 1.0);
        CHECK(std::abs(pi.sum() - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("evolve applies the random-unitary map in the Schroedinger picture") {
  SUBCASE("time zero is the identity map") {
    for (const auto& m : all_models()) {
      const DensityMatrix rho = random_density(static_cast<int>(m.dim()), 3);
      CHECK((m.evolve(rho, 0.0).mat() - rho.mat()).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  SUBCASE("dephasing damps off-diagonals by exp(-g t)") {
    const double g = 1.3;
    const auto m = make_model(ModelId::dephasing(g));
    const DensityMatrix rho = random_density(2, 8);
    for (double t : {0.1, 0.7, 2.0}) {
      const CMatrix out = m.evolve(rho, t).mat();
      CHECK(std::abs(out(0, 0) - rho.mat()(0, 0)) < 1e-13);
      const Complex want = std::exp(-g * t) * rho.mat()(0, 1);
      CHECK(std::abs(out(0, 1) - want) < 1e-13);
    }
  }

  SUBCASE("dimension mismatches are rejected") {
    const auto m = make_model(ModelId::dephasing(1.0));
    CHECK_THROWS_AS(m.evolve(random_density(3, 1), 0.5), DimensionMismatch);
    CHECK_THROWS_AS(m.heisenberg_effects(Effect(identity(3) / 3.0)), DimensionMismatch);
  }

  SUBCASE("trace and positivity are preserved across random triples") {
    std::mt19937_64 rng(4);
    const auto models = all_models();
    for (int i = 0; i < 100; ++i) {
      const auto& m = models[static_cast<std::size_t>(i % 3)];
      const DensityMatrix rho =
          random_density(static_cast<int>(m.dim()), static_cast<std::uint64_t>(i));
      const double t = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
      const DensityMatrix out = m.evolve(rho, t);
      CHECK(std::abs(out.mat().trace().real() - 1.0) < 1e-12);
      CHECK(min_eigenvalue(out.mat()) > -1e-12);
    }
  }
}

TEST_CASE("heisenberg_effects conjugates the measurement operator") {
  SUBCASE("dephasing flips the off-diagonal sign of M1") {
    const auto m = make_model(ModelId::dephasing(1.0));
    const OperatorSet fam = m.heisenberg_effects(Effect(m1_matrix()));
    REQUIRE(fam.size() == 2);
    CMatrix flipped(2, 2);
    flipped << Complex(1.0 / 5.0), Complex(-1.0 / 6.0), Complex(-1.0 / 6.0),
        Complex(1.0 / 3.0);
    CHECK((fam.effects[0].mat() - m1_matrix()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((fam.effects[1].mat() - flipped).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("pauli conjugates of M0 match the entrywise closed forms") {
    const auto m = make_model(ModelId::pauli_rud());
    const OperatorSet fam = m.heisenberg_effects(Effect(m0_matrix()));
    REQUIRE(fam.size() == 4);
    CMatrix c1(2, 2), c2(2, 2), c3(2, 2);
    c1 << Complex(3.0 / 10.0), Complex(1.0 / 6.0, -1.0 / 10.0),
        Complex(1.0 / 6.0, 1.0 / 10.0), Complex(1.0 / 5.0);
    c2 << Complex(3.0 / 10.0), Complex(-1.0 / 6.0, 1.0 / 10.0),
        Complex(-1.0 / 6.0, -1.0 / 10.0), Complex(1.0 / 5.0);
    c3 << Complex(1.0 / 5.0), Complex(-1.0 / 6.0, -1.0 / 10.0),
        Complex(-1.0 / 6.0, 1.0 / 10.0), Complex(3.0 / 10.0);
    CHECK((fam.effects[1].mat() - c1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((fam.effects[2].mat() - c2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((fam.effects[3].mat() - c3).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("identity is invariant under every model") {
    for (const auto& m : all_models()) {
      const OperatorSet fam = m.heisenberg_effects(Effect(identity(m.dim()) / 2.0));
      for (const auto& e : fam.effects) {
        CHECK((e.mat() - identity(m.dim()) / 2.0).cwiseAbs().maxCoeff() < 1e-14);
      }
    }
  }

  SUBCASE("conjugation preserves the smallest eigenvalue") {
    std::mt19937_64 rng(6);
    for (const auto& m : all_models()) {
      const CMatrix psd = random_psd(m.dim(), rng);
      const CMatrix eff = psd / (2.0 * psd.trace().real());
      const double base = min_eigenvalue(eff);
      for (const auto& e : m.heisenberg_effects(Effect(eff)).effects) {
        CHECK(min_eigenvalue(e.mat()) >= base - 1e-9);
      }
    }
  }
}

TEST_CASE("kraus_at yields a trace-preserving Kraus family") {
  SUBCASE("time zero keeps only the identity operator") {
    const auto m = make_model(ModelId::pauli_rud());
    const KrausMap k = m.kraus_at(0.0);
    REQUIRE(k.kraus.size() == 4);
    CHECK((k.kraus[0] - identity(2)).cwiseAbs().maxCoeff() < 1e-15);
    for (std::size_t a = 1; a < 4; ++a) CHECK(k.kraus[a].cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("dephasing weights at t = ln 2") {
    const auto m = make_model(ModelId::dephasing(1.0));
    const KrausMap k = m.kraus_at(std::log(2.0));
    CHECK((k.kraus[0] - std::sqrt(0.75) * identity(2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((k.kraus[1] - std::sqrt(0.25) * pauli(3)).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("non-trace-preserving operator lists are rejected") {
    CHECK_THROWS_AS(KrausMap::make({0.5 * identity(2)}), Error);
  }

  SUBCASE("applying the Kraus map equals evolve") {
    std::mt19937_64 rng(9);
    for (const auto& m : all_models()) {
      for (int i = 0; i < 5; ++i) {
        const double t = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
        const DensityMatrix rho =
            random_density(static_cast<int>(m.dim()), static_cast<std::uint64_t>(i + 40));
        const CMatrix via_kraus = m.kraus_at(t).apply(rho.mat());
        CHECK((via_kraus - m.evolve(rho, t).mat()).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("Schroedinger and Heisenberg pictures give identical probabilities") {
  std::mt19937_64 rng(14);
  const auto models = all_models();
  for (int i = 0; i < 60; ++i) {
    const auto& m = models[static_cast<std::size_t>(i % 3)];
    const CMatrix psd = random_psd(m.dim(), rng);
    const CMatrix eff = psd / (2.0 * psd.trace().real());
    const DensityMatrix rho =
        random_density(static_cast<int>(m.dim()), static_cast<std::uint64_t>(i));
    const double t = std::uniform_real_distribution<double>(0.0, 3.0)(rng);

    const double schroedinger = (eff * m.evolve(rho, t).mat()).trace().real();
    const RVector pi = m.pi_vector(t);
    double heisenberg = 0.0;
    for (int a = 0; a < m.kappa(); ++a) {
      const CMatrix conj = m.unitaries()[static_cast<std::size_t>(a)].adjoint() * eff *
                           m.unitaries()[static_cast<std::size_t>(a)];
      heisenberg += pi(a) * (conj * rho.mat()).trace().real();
    }
    CHECK(std::abs(schroedinger - heisenberg) < 1e-10);
  }
}

TEST_CASE("tabulated dynamics interpolate a sampled distribution") {
  const auto ref = make_model(ModelId::dephasing(1.0));
  std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
  RMatrix rows(4, 2);
  for (int j = 0; j < 4; ++j) rows.row(j) = ref.pi_vector(grid[static_cast<std::size_t>(j)]);
  const auto tab = RandomUnitaryDynamics::tabulated({pauli(0), pauli(3)}, grid, rows);

  CHECK(tab.pi_vector(0.0)(0) == doctest::Approx(1.0));
  CHECK(tab.pi_vector(0.5)(0) == doctest::Approx(ref.pi_vector(0.5)(0)).epsilon(1e-14));
  const RVector mid = tab.pi_vector(0.25);
  CHECK(mid.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mid(0) == doctest::Approx(0.5 * (rows(0, 0) + rows(1, 0))).epsilon(1e-14));
  CHECK_THROWS_AS(tab.pi_vector(3.0), Error);

  SUBCASE("rows must be probability vectors starting from the identity point") {
    RMatrix bad = rows;
    bad(0, 0) = 0.7;
    bad(0, 1) = 0.3;
    CHECK_THROWS_AS(RandomUnitaryDynamics::tabulated({pauli(0), pauli(3)}, grid, bad), Error);
    RMatrix negative = rows;
    negative(2, 0) = 1.2;
    negative(2, 1) = -0.2;
    CHECK_THROWS_AS(RandomUnitaryDynamics::tabulated({pauli(0), pauli(3)}, grid, negative),
                    Error);
  }

  SUBCASE("non-unitary operators are rejected") {
    CMatrix skew(2, 2);
    skew << 1, 1, 0, 1;
    CHECK_THROWS_AS(RandomUnitaryDynamics::tabulated({pauli(0), skew}, grid, rows), Error);
  }
}
