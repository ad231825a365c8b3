#include "tdtomo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tdtomo {

ModelId ModelId::dephasing(double gamma) { return {ModelKind::dephasing, {gamma}}; }

ModelId ModelId::pauli_rud(std::vector<double> rates) {
  if (rates.empty()) rates = {0.25, 1.0, 4.0};
  return {ModelKind::pauli_rud, std::move(rates)};
}

ModelId ModelId::weyl_rud(std::vector<double> rates) {
  if (rates.empty()) {
    for (int a = 1; a <= 8; ++a) rates.push_back(0.2 * a);
  }
  return {ModelKind::weyl_rud, std::move(rates)};
}

void ModelId::validate() const {
  const std::size_t expected = kind == ModelKind::dephasing ? 1
                               : kind == ModelKind::pauli_rud ? 3
                                                              : 8;
  if (rates.size() != expected) {
    std::ostringstream os;
    os << name() << ": expected " << expected << " decoherence rates, got " << rates.size();
    throw ConfigError(os.str());
  }
  for (double g : rates) {
    if (!(g > 0.0)) throw ConfigError(name() + ": decoherence rates must be strictly positive");
  }
  if (kind != ModelKind::dephasing) {
    for (std::size_t i = 0; i < rates.size(); ++i) {
      for (std::size_t j = i + 1; j < rates.size(); ++j) {
        if (rates[i] == rates[j]) {
          std::ostringstream os;
          os << name() << ": rates must be pairwise distinct (rate " << rates[i]
             << " repeats); equal rates make the coefficient matrix singular for every "
                "time grid";
          throw DegenerateRates(os.str());
        }
      }
    }
  }
}

std::string ModelId::name() const {
  switch (kind) {
    case ModelKind::dephasing:
      return "dephasing";
    case ModelKind::pauli_rud:
      return "pauli_rud";
    case ModelKind::weyl_rud:
      return "weyl_rud";
  }
  return "unknown";
}

Eigen::Index ModelId::dim() const { return kind == ModelKind::weyl_rud ? 3 : 2; }

int ModelId::kappa() const {
  switch (kind) {
    case ModelKind::dephasing:
      return 2;
    case ModelKind::pauli_rud:
      return 4;
    case ModelKind::weyl_rud:
      return 9;
  }
  return 0;
}

KrausMap KrausMap::make(std::vector<CMatrix> ops, const Tolerance& tol) {
  if (ops.empty()) throw Error("KrausMap: at least one operator is required");
  const Eigen::Index d = ops.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& k : ops) {
    if (k.rows() != d || k.cols() != d) {
      throw DimensionMismatch("KrausMap: operators have mixed dimensions");
    }
    sum += k.adjoint() * k;
  }
  const double residual = max_abs(sum - identity(d));
  if (residual > tol.eps_abs) {
    std::ostringstream os;
    os << "KrausMap: sum of K^dag K deviates from identity by " << residual;
    throw Error(os.str());
  }
  return KrausMap{std::move(ops)};
}

CMatrix KrausMap::apply(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& k : kraus) out += k * x * k.adjoint();
  return out;
}

std::vector<CMatrix> weyl_unitaries() {
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  CMatrix clock = CMatrix::Zero(3, 3);
  clock(0, 0) = 1.0;
  clock(1, 1) = w;
  clock(2, 2) = w * w;
  CMatrix shift = CMatrix::Zero(3, 3);
  shift(0, 1) = 1.0;
  shift(1, 2) = 1.0;
  shift(2, 0) = 1.0;
  std::vector<CMatrix> us;
  us.reserve(9);
  CMatrix ck = identity(3);
  for (int k = 0; k < 3; ++k) {
    CMatrix u = ck;
    for (int l = 0; l < 3; ++l) {
      us.push_back(u);
      u = u * shift;
    }
    ck = ck * clock;
  }
  return us;
}

RandomUnitaryDynamics::RandomUnitaryDynamics(std::vector<CMatrix> unitaries,
                                             std::optional<ModelId> model,
                                             const Tolerance& tol)
    : unitaries_(std::move(unitaries)), model_(std::move(model)) {
  if (unitaries_.empty()) throw Error("RandomUnitaryDynamics: no unitaries");
  const Eigen::Index d = unitaries_.front().rows();
  for (const auto& u : unitaries_) {
    require_square_finite(u, "RandomUnitaryDynamics");
    if (u.rows() != d) throw DimensionMismatch("RandomUnitaryDynamics: mixed dimensions");
    const double res = max_abs(u.adjoint() * u - identity(d));
    if (res > tol.eps_abs) {
      std::ostringstream os;
      os << "RandomUnitaryDynamics: operator is not unitary (|U^dag U - I| = " << res << ")";
      throw Error(os.str());
    }
  }
  if (max_abs(unitaries_.front() - identity(d)) > tol.eps_abs) {
    throw Error("RandomUnitaryDynamics: the first unitary must be the identity");
  }
}

std::string RandomUnitaryDynamics::name() const {
  return model_ ? model_->name() : "tabulated";
}

RandomUnitaryDynamics RandomUnitaryDynamics::tabulated(std::vector<CMatrix> unitaries,
                                                       std::vector<double> times,
                                                       RMatrix pi_rows,
                                                       const Tolerance& tol) {
  RandomUnitaryDynamics rud(std::move(unitaries), std::nullopt, tol);
  if (times.empty() || static_cast<Eigen::Index>(times.size()) != pi_rows.rows()) {
    throw Error("tabulated dynamics: one probability row per time instant is required");
  }
  if (pi_rows.cols() != rud.kappa()) {
    throw DimensionMismatch("tabulated dynamics: row width must equal the unitary count");
  }
  if (times.front() != 0.0) {
    throw Error("tabulated dynamics: the grid must start at t = 0");
  }
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1])) {
      throw Error("tabulated dynamics: times must be strictly increasing");
    }
  }
  for (Eigen::Index r = 0; r < pi_rows.rows(); ++r) {
    if (pi_rows.row(r).minCoeff() < -tol.eps_abs ||
        std::abs(pi_rows.row(r).sum() - 1.0) > tol.eps_abs) {
      std::ostringstream os;
      os << "tabulated dynamics: row " << r << " is not a probability vector";
      throw Error(os.str());
    }
  }
  RVector first = pi_rows.row(0);
  first(0) -= 1.0;
  if (first.cwiseAbs().maxCoeff() > tol.eps_abs) {
    throw Error("tabulated dynamics: pi(0) must be (1, 0, ..., 0)");
  }
  rud.table_times_ = std::move(times);
  rud.table_rows_ = std::move(pi_rows);
  return rud;
}

RandomUnitaryDynamics make_model(const ModelId& id, const Tolerance& tol) {
  id.validate();
  std::vector<CMatrix> us;
  switch (id.kind) {
    case ModelKind::dephasing:
      us = {pauli(0), pauli(3)};
      break;
    case ModelKind::pauli_rud:
      us = {pauli(0), pauli(1), pauli(2), pauli(3)};
      break;
    case ModelKind::weyl_rud:
      us = weyl_unitaries();
      break;
  }
  return RandomUnitaryDynamics(std::move(us), id, tol);
}

RVector RandomUnitaryDynamics::pi_vector(double t) const {
  if (!(t >= 0.0)) throw Error("pi_vector: time must be nonnegative");
  if (!model_) {
    // Piecewise-linear interpolation; convex combinations of probability
    // rows stay probability vectors.
    if (t > table_times_.back()) {
      throw Error("pi_vector: time beyond the tabulated grid");
    }
    auto hi = std::lower_bound(table_times_.begin(), table_times_.end(), t);
    if (hi == table_times_.begin()) return table_rows_.row(0);
    const auto j = static_cast<Eigen::Index>(hi - table_times_.begin());
    const double t0 = table_times_[static_cast<std::size_t>(j - 1)];
    const double t1 = table_times_[static_cast<std::size_t>(j)];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * table_rows_.row(j - 1) + w * table_rows_.row(j);
  }
  const auto& rates = model_->rates;
  RVector pi(kappa());
  switch (model_->kind) {
    case ModelKind::dephasing: {
      const double e = std::exp(-rates[0] * t);
      pi << (1.0 + e) / 2.0, (1.0 - e) / 2.0;
      break;
    }
    case ModelKind::pauli_rud: {
      double sum = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double e = std::exp(-rates[static_cast<std::size_t>(a)] * t);
        sum += e;
        pi(a + 1) = (1.0 - e) / 4.0;
      }
      pi(0) = (1.0 + sum) / 4.0;
      break;
    }
    case ModelKind::weyl_rud: {
      double sum = 0.0;
      for (int a = 0; a < 8; ++a) {
        const double e = std::exp(-rates[static_cast<std::size_t>(a)] * t);
        sum += e;
        pi(a + 1) = (1.0 - e) / 9.0;
      }
      pi(0) = (1.0 + sum) / 9.0;
      break;
    }
  }
  return pi;
}

DensityMatrix RandomUnitaryDynamics::evolve(const DensityMatrix& r, double t,
                                            const Tolerance& tol) const {
  if (r.dim() != dim()) throw DimensionMismatch("evolve: state dimension does not match");
  const RVector pi = pi_vector(t);
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (int a = 0; a < kappa(); ++a) {
    out += pi(a) * unitaries_[static_cast<std::size_t>(a)] * r.mat() *
           unitaries_[static_cast<std::size_t>(a)].adjoint();
  }
  return DensityMatrix(out, tol);
}

OperatorSet RandomUnitaryDynamics::heisenberg_effects(const Effect& e,
                                                      const Tolerance& tol) const {
  if (e.dim() != dim()) {
    throw DimensionMismatch("heisenberg_effects: effect dimension does not match");
  }
  std::vector<Effect> effects;
  std::vector<std::string> labels;
  effects.reserve(unitaries_.size());
  for (std::size_t a = 0; a < unitaries_.size(); ++a) {
    effects.emplace_back(unitaries_[a].adjoint() * e.mat() * unitaries_[a], tol);
    labels.push_back("U" + std::to_string(a));
  }
  return OperatorSet(std::move(effects), std::move(labels));
}

KrausMap RandomUnitaryDynamics::kraus_at(double t, const Tolerance& tol) const {
  const RVector pi = pi_vector(t);
  std::vector<CMatrix> ops;
  ops.reserve(unitaries_.size());
  for (int a = 0; a < kappa(); ++a) {
    ops.push_back(std::sqrt(std::max(pi(a), 0.0)) * unitaries_[static_cast<std::size_t>(a)]);
  }
  return KrausMap::make(std::move(ops), tol);
}

}  // namespace tdtomo
