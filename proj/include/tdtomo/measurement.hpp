#pragma once

#include <string>
#include <vector>

#include "tdtomo/algebra.hpp"
#include "tdtomo/states.hpp"

namespace tdtomo {

// A single measurement operator: Hermitian and positive semi-definite.
class Effect {
 public:
  explicit Effect(const CMatrix& m, const Tolerance& tol = default_tolerance());

  const CMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  CMatrix mat_;
};

// Ordered collection of effects with uniform dimension. Completeness
// (summing to identity) is not required; see Povm for the validated case.
struct OperatorSet {
  std::vector<Effect> effects;
  std::vector<std::string> labels;  // optional; empty or one per effect

  OperatorSet(std::vector<Effect> e, std::vector<std::string> l = {});

  Eigen::Index dim() const { return effects.front().dim(); }
  std::size_t size() const { return effects.size(); }
  std::string label(std::size_t i) const;
};

struct PovmCheck {
  bool complete = false;
  double residual = 0.0;  // max-entry |sum of effects - I|
};

PovmCheck is_povm(const OperatorSet& s, const Tolerance& tol = default_tolerance());

// Operator set whose effects sum to the identity.
class Povm {
 public:
  static Povm make(OperatorSet s, const Tolerance& tol = default_tolerance());
  const OperatorSet& ops() const { return set_; }

 private:
  explicit Povm(OperatorSet s) : set_(std::move(s)) {}
  OperatorSet set_;
};

// Informationally complete: the effects span the full operator space
// (span rank d^2) and form a POVM.
bool is_ic(const OperatorSet& s, const Tolerance& tol = default_tolerance());

// Symmetric IC test: d^2 effects, each (1/d) times a rank-one projector onto
// a unit vector, with every pairwise squared overlap equal to 1/(d+1). The
// overlaps are recovered from traces as d^2 Tr{P_j P_k}, so no vectors need
// to be extracted from the projectors.
bool is_sic(const OperatorSet& s, const Tolerance& tol = default_tolerance());

// Tr{M rho}, checked real and inside [-eps, 1+eps], then clamped to [0, 1].
// A value outside that window signals a non-effect input and throws
// InvalidProbability.
double born_probability(const Effect& m, const DensityMatrix& r,
                        const Tolerance& tol = default_tolerance());

enum class BuiltinSet { qubit_m1_m2, qubit_m0, sic_qubit, sic_qutrit };

// Exact built-in operator sets rendered to floats at construction:
//   qubit_m1_m2 - the pair of positive qubit operators M1, M2
//   qubit_m0    - the single positive qubit operator M0
//   sic_qubit   - the four-element qubit SIC set
//   sic_qutrit  - the nine-element qutrit SIC set
OperatorSet builtin(BuiltinSet which);
OperatorSet builtin(const std::string& name);
const std::vector<std::string>& builtin_names();

}  // namespace tdtomo
