#pragma once

#include <string>
#include <vector>

#include "tdtomo/dynamics.hpp"
#include "tdtomo/measurement.hpp"
#include "tdtomo/states.hpp"

namespace tdtomo {

// Condition-number thresholds for the coefficient matrix: past kConditionWarn
// the verdict carries a warning, past kConditionFail the system is refused.
inline constexpr double kConditionWarn = 1e8;
inline constexpr double kConditionFail = 1e12;

// Strictly increasing measurement times t_j >= 0. A repeated time makes the
// probability system singular, so construction throws SolvabilityError.
class TimeSamplingPlan {
 public:
  static TimeSamplingPlan make(std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }

 private:
  explicit TimeSamplingPlan(std::vector<double> t) : times_(std::move(t)) {}
  std::vector<double> times_;
};

// Gamma with Gamma(j, a) = pi_a(t_j): one row per time instant, one column
// per unitary. Every row is a probability vector.
struct CoefficientMatrix {
  RMatrix gamma;
  std::vector<double> times;
  std::string model_name;

  static CoefficientMatrix make(RMatrix gamma, std::vector<double> times,
                                std::string model_name,
                                const Tolerance& tol = default_tolerance());
  Eigen::Index rows() const { return gamma.rows(); }
  Eigen::Index kappa() const { return gamma.cols(); }
};

CoefficientMatrix gamma_matrix(const RandomUnitaryDynamics& m, const TimeSamplingPlan& plan);

struct SolvabilityVerdict {
  bool square = false;
  double det = 0.0;  // NaN when not square
  double condition = 0.0;
  Eigen::Index rank = 0;  // column rank at the 1/kConditionFail cutoff
  bool solvable = false;
  bool warning = false;  // condition above kConditionWarn
};

// Square systems are solvable when numerically full rank with condition
// below kConditionFail; overdetermined systems (more rows than unitaries)
// when the column rank equals the unitary count (least-squares mode).
// Fewer rows than unitaries throws Underdetermined.
SolvabilityVerdict check_solvable(const CoefficientMatrix& g);

// Inverts the time-sampled probability system: given measured probabilities
// p(t_j) of one effect, returns the probabilities of its conjugated family
// {U_a^dag M U_a}. Least squares when overdetermined.
RVector recover_effect_probabilities(const CoefficientMatrix& g, const RVector& p,
                                     const Tolerance& tol = default_tolerance());

// The dynamically generated measurement: all conjugates U_a^dag M_k U_a,
// ordered by (k, a) with a varying fastest. Redundant elements are reported
// through the span rank, never removed.
struct GeneratedPovm {
  OperatorSet effects;
  std::string model_name;
  std::size_t initial_count = 0;
  int kappa = 0;
  bool ic = false;
  double completeness_residual = 0.0;
  Eigen::Index rank = 0;
};

GeneratedPovm assemble_generated_povm(const RandomUnitaryDynamics& m,
                                      const OperatorSet& initial,
                                      const Tolerance& tol = default_tolerance());

struct Reconstruction {
  DensityMatrix state;
  double residual = 0.0;   // least-squares residual of the probability fit
  double condition = 0.0;  // condition of the vectorized effect system
};

// Linear inversion over the real parametrization of Hermitian matrices
// (least squares when overcomplete), followed by projection back onto the
// state set. Exact inputs reproduce the source state.
Reconstruction reconstruct(const GeneratedPovm& gp, const RVector& probs,
                           const Tolerance& tol = default_tolerance());

struct Obligation {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct TheoremCertificate {
  int theorem = 0;
  std::vector<Obligation> obligations;
  bool passed() const;
};

// Built-in configurations used by the theorem certificates and as
// ready-made experiment setups.
ModelId default_model(int theorem);
TimeSamplingPlan default_plan(int theorem);
OperatorSet default_initial_ops(int theorem);

// Runs every numerical obligation behind theorem 2 (dephasing + two
// operators), 3 (Pauli dynamics + one operator) or 4 (Weyl dynamics + one
// SIC element) and records value/threshold/pass per obligation.
TheoremCertificate verify_theorem(int n, const Tolerance& tol = default_tolerance());

}  // namespace tdtomo
