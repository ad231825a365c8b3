#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdtomo/algebra.hpp"
#include "tdtomo/measurement.hpp"
#include "tdtomo/states.hpp"

namespace tdtomo {

enum class ModelKind { dephasing, pauli_rud, weyl_rud };

// Identifies one of the three built-in random-unitary models together with
// its decoherence rates (time is measured in units of 1/rate).
struct ModelId {
  ModelKind kind = ModelKind::dephasing;
  std::vector<double> rates;

  static ModelId dephasing(double gamma = 1.0);
  static ModelId pauli_rud(std::vector<double> rates = {});  // default 0.25, 1, 4
  static ModelId weyl_rud(std::vector<double> rates = {});   // default 0.2*a, a=1..8

  // Rates must be strictly positive; pauli_rud and weyl_rud additionally
  // require pairwise distinct rates (equal rates make the coefficient matrix
  // singular for every time grid).
  void validate() const;

  std::string name() const;
  Eigen::Index dim() const;
  int kappa() const;
};

// Kraus operators of a channel; sum of K^dag K equals identity.
struct KrausMap {
  std::vector<CMatrix> kraus;

  static KrausMap make(std::vector<CMatrix> ops, const Tolerance& tol = default_tolerance());
  CMatrix apply(const CMatrix& x) const;
};

// Random-unitary dynamical map: a fixed list of unitaries plus a
// time-continuous probability distribution over them, with the identity
// first so that pi(0) = (1, 0, ..., 0) reproduces the initial state.
class RandomUnitaryDynamics {
 public:
  // Escape hatch for dynamics without a closed-form distribution: rows of
  // `pi_rows` are the probability vectors at the given times (first time 0,
  // first row (1, 0, ...)); evaluation interpolates linearly between rows.
  static RandomUnitaryDynamics tabulated(std::vector<CMatrix> unitaries,
                                         std::vector<double> times, RMatrix pi_rows,
                                         const Tolerance& tol = default_tolerance());

  Eigen::Index dim() const { return unitaries_.front().rows(); }
  int kappa() const { return static_cast<int>(unitaries_.size()); }
  const std::vector<CMatrix>& unitaries() const { return unitaries_; }
  const std::optional<ModelId>& model() const { return model_; }
  std::string name() const;

  // Probability vector at time t >= 0: entries in [0, 1], summing to one.
  RVector pi_vector(double t) const;

  // Schroedinger picture: sum_a pi_a(t) U_a rho U_a^dag, validated physical.
  DensityMatrix evolve(const DensityMatrix& r, double t,
                       const Tolerance& tol = default_tolerance()) const;

  // Heisenberg picture: the conjugated family {U_a^dag M U_a}, one effect
  // per unitary, in unitary order.
  OperatorSet heisenberg_effects(const Effect& e,
                                 const Tolerance& tol = default_tolerance()) const;

  // Kraus form at fixed t: K_a = sqrt(pi_a(t)) U_a.
  KrausMap kraus_at(double t, const Tolerance& tol = default_tolerance()) const;

 private:
  friend RandomUnitaryDynamics make_model(const ModelId&, const Tolerance&);
  RandomUnitaryDynamics(std::vector<CMatrix> unitaries, std::optional<ModelId> model,
                        const Tolerance& tol);

  std::vector<CMatrix> unitaries_;
  std::optional<ModelId> model_;
  std::vector<double> table_times_;
  RMatrix table_rows_;
};

RandomUnitaryDynamics make_model(const ModelId& id,
                                 const Tolerance& tol = default_tolerance());

// The nine qutrit Weyl unitaries: clock^k * shift^l, flattened as 3k + l.
// Each is unitary and cubes to the identity.
std::vector<CMatrix> weyl_unitaries();

}  // namespace tdtomo
