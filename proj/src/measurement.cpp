#include "tdtomo/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tdtomo {

Effect::Effect(const CMatrix& m, const Tolerance& tol) : mat_(m) {
  require_square_finite(m, "Effect");
  const double herm = hermiticity_residual(m);
  if (herm > tol.eps_abs) {
    std::ostringstream os;
    os << "effect is not Hermitian (max |m - m^dag| = " << herm << ")";
    throw NotHermitian(os.str(), herm);
  }
  const double min_eig = min_eigenvalue(m, tol);
  if (min_eig < -tol.eps_abs) {
    std::ostringstream os;
    os << "effect is not positive semi-definite (min eigenvalue = " << min_eig << ")";
    throw NotPSD(os.str(), min_eig);
  }
}

OperatorSet::OperatorSet(std::vector<Effect> e, std::vector<std::string> l)
    : effects(std::move(e)), labels(std::move(l)) {
  if (effects.empty()) throw Error("OperatorSet: at least one effect is required");
  const Eigen::Index d = effects.front().dim();
  for (const auto& eff : effects) {
    if (eff.dim() != d) throw DimensionMismatch("OperatorSet: effects have mixed dimensions");
  }
  if (!labels.empty() && labels.size() != effects.size()) {
    throw Error("OperatorSet: label count does not match effect count");
  }
}

std::string OperatorSet::label(std::size_t i) const {
  if (i < labels.size()) return labels[i];
  return "E" + std::to_string(i);
}

PovmCheck is_povm(const OperatorSet& s, const Tolerance& tol) {
  CMatrix sum = CMatrix::Zero(s.dim(), s.dim());
  for (const auto& eff : s.effects) sum += eff.mat();
  const double residual = max_abs(sum - identity(s.dim()));
  return {residual <= tol.eps_abs, residual};
}

Povm Povm::make(OperatorSet s, const Tolerance& tol) {
  const auto check = is_povm(s, tol);
  if (!check.complete) {
    std::ostringstream os;
    os << "operator set does not sum to identity (max residual " << check.residual << ")";
    throw Error(os.str());
  }
  return Povm(std::move(s));
}

bool is_ic(const OperatorSet& s, const Tolerance& tol) {
  std::vector<CMatrix> mats;
  mats.reserve(s.size());
  for (const auto& eff : s.effects) mats.push_back(eff.mat());
  return span_rank(mats, tol) == s.dim() * s.dim() && is_povm(s, tol).complete;
}

bool is_sic(const OperatorSet& s, const Tolerance& tol) {
  const Eigen::Index d = s.dim();
  if (static_cast<Eigen::Index>(s.size()) != d * d) return false;
  // Each effect must be (1/d) P with P a rank-one projector: spectrum of
  // d*M is one eigenvalue at 1 and the rest at 0.
  for (const auto& eff : s.effects) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(static_cast<double>(d) * eff.mat());
    const auto& ev = es.eigenvalues();
    if (std::abs(ev(ev.size() - 1) - 1.0) > tol.eps_abs) return false;
    for (Eigen::Index i = 0; i + 1 < ev.size(); ++i) {
      if (std::abs(ev(i)) > tol.eps_abs) return false;
    }
  }
  const double target = 1.0 / (static_cast<double>(d) + 1.0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (std::size_t k = j + 1; k < s.size(); ++k) {
      const double overlap =
          static_cast<double>(d * d) *
          (s.effects[j].mat() * s.effects[k].mat()).trace().real();
      if (std::abs(overlap - target) > tol.eps_abs) return false;
    }
  }
  return true;
}

double born_probability(const Effect& m, const DensityMatrix& r, const Tolerance& tol) {
  if (m.dim() != r.dim()) {
    throw DimensionMismatch("born_probability: effect and state dimensions differ");
  }
  const double p = (m.mat() * r.mat()).trace().real();
  if (p < -tol.eps_abs || p > 1.0 + tol.eps_abs) {
    std::ostringstream os;
    os << "born_probability: Tr{M rho} = " << p
       << " lies outside [0, 1]; the operator is not part of a valid POVM";
    throw InvalidProbability(os.str(), p);
  }
  return std::clamp(p, 0.0, 1.0);
}

namespace {

Effect projector_effect(const CVector& v, double weight) {
  return Effect(weight * (v * v.adjoint()));
}

OperatorSet make_qubit_m1_m2() {
  CMatrix m1(2, 2), m2(2, 2);
  m1 << Complex(1.0 / 5.0), Complex(1.0 / 6.0),
      Complex(1.0 / 6.0), Complex(1.0 / 3.0);
  m2 << Complex(3.0 / 10.0), Complex(1.0 / 7.0, 1.0 / 10.0),
      Complex(1.0 / 7.0, -1.0 / 10.0), Complex(1.0 / 6.0);
  return OperatorSet({Effect(m1), Effect(m2)}, {"M1", "M2"});
}

OperatorSet make_qubit_m0() {
  CMatrix m0(2, 2);
  m0 << Complex(1.0 / 5.0), Complex(1.0 / 6.0, 1.0 / 10.0),
      Complex(1.0 / 6.0, -1.0 / 10.0), Complex(3.0 / 10.0);
  return OperatorSet({Effect(m0)}, {"M0"});
}

OperatorSet make_sic_qubit() {
  const double third = 1.0 / std::sqrt(3.0);
  const double rest = std::sqrt(2.0 / 3.0);
  const Complex w1 = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const Complex w2 = std::polar(1.0, 4.0 * std::numbers::pi / 3.0);
  std::vector<CVector> phis(4, CVector(2));
  phis[0] << 1.0, 0.0;
  phis[1] << third, rest;
  phis[2] << third, rest * w1;
  phis[3] << third, rest * w2;
  std::vector<Effect> effects;
  std::vector<std::string> labels;
  for (int i = 0; i < 4; ++i) {
    effects.push_back(projector_effect(phis[i], 0.5));
    labels.push_back("Pi" + std::to_string(i + 1));
  }
  return OperatorSet(std::move(effects), std::move(labels));
}

// Nine unit vectors, three per basis pair {0,1}, {1,2}, {0,2}, with relative
// phases 1, w, w^2 (w = exp(2 pi i / 3)). Flattened index 3*j + i where j is
// the pair and i the phase index.
OperatorSet make_sic_qutrit() {
  const Complex minus = std::polar(1.0, -2.0 * std::numbers::pi / 3.0);
  const Complex plus = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const double norm = 1.0 / std::sqrt(2.0);
  const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {1, 2}, {0, 2}}};
  const std::array<std::pair<Complex, Complex>, 3> phases = {
      {{Complex(1.0), Complex(1.0)}, {minus, plus}, {plus, minus}}};
  std::vector<Effect> effects;
  std::vector<std::string> labels;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      // The {0,2} pair carries the conjugate phase pattern of the others.
      auto [pa, pb] = phases[static_cast<std::size_t>(i)];
      if (j == 2) std::swap(pa, pb);
      CVector v = CVector::Zero(3);
      v(pairs[static_cast<std::size_t>(j)].first) = norm * pa;
      v(pairs[static_cast<std::size_t>(j)].second) = norm * pb;
      effects.push_back(projector_effect(v, 1.0 / 3.0));
      labels.push_back("Pi(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  return OperatorSet(std::move(effects), std::move(labels));
}

}  // namespace

OperatorSet builtin(BuiltinSet which) {
  switch (which) {
    case BuiltinSet::qubit_m1_m2:
      return make_qubit_m1_m2();
    case BuiltinSet::qubit_m0:
      return make_qubit_m0();
    case BuiltinSet::sic_qubit:
      return make_sic_qubit();
    case BuiltinSet::sic_qutrit:
      return make_sic_qutrit();
  }
  throw Error("builtin: unknown set");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"qubit_m1_m2", "qubit_m0", "sic_qubit",
                                                 "sic_qutrit"};
  return names;
}

OperatorSet builtin(const std::string& name) {
  if (name == "qubit_m1_m2") return builtin(BuiltinSet::qubit_m1_m2);
  if (name == "qubit_m0") return builtin(BuiltinSet::qubit_m0);
  if (name == "sic_qubit") return builtin(BuiltinSet::sic_qubit);
  if (name == "sic_qutrit") return builtin(BuiltinSet::sic_qutrit);
  throw ConfigError("builtin: unknown operator set '" + name +
                    "' (available: qubit_m1_m2, qubit_m0, sic_qubit, sic_qutrit)");
}

}  // namespace tdtomo
