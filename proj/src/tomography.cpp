#include "tdtomo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace tdtomo {

TimeSamplingPlan TimeSamplingPlan::make(std::vector<double> times) {
  if (times.empty()) throw Error("TimeSamplingPlan: at least one time instant is required");
  for (double t : times) {
    if (!(t >= 0.0)) throw Error("TimeSamplingPlan: times must be nonnegative and finite");
  }
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (times[i] == times[i + 1]) {
      std::ostringstream os;
      os << "TimeSamplingPlan: repeated time instant t = " << times[i]
         << "; the solvability condition det[pi_a(t_j)] != 0 requires pairwise "
            "distinct times";
      throw SolvabilityError(os.str(), 0.0, std::numeric_limits<double>::infinity());
    }
    if (times[i] > times[i + 1]) {
      throw Error("TimeSamplingPlan: times must be strictly increasing");
    }
  }
  return TimeSamplingPlan(std::move(times));
}

CoefficientMatrix CoefficientMatrix::make(RMatrix gamma, std::vector<double> times,
                                          std::string model_name, const Tolerance& tol) {
  if (gamma.rows() != static_cast<Eigen::Index>(times.size())) {
    throw DimensionMismatch("CoefficientMatrix: one row per time instant is required");
  }
  for (Eigen::Index r = 0; r < gamma.rows(); ++r) {
    if (gamma.row(r).minCoeff() < -tol.eps_abs ||
        std::abs(gamma.row(r).sum() - 1.0) > tol.eps_abs) {
      std::ostringstream os;
      os << "CoefficientMatrix: row " << r << " is not a probability vector";
      throw Error(os.str());
    }
  }
  return {std::move(gamma), std::move(times), std::move(model_name)};
}

CoefficientMatrix gamma_matrix(const RandomUnitaryDynamics& m, const TimeSamplingPlan& plan) {
  RMatrix gamma(static_cast<Eigen::Index>(plan.size()), m.kappa());
  for (std::size_t j = 0; j < plan.size(); ++j) {
    gamma.row(static_cast<Eigen::Index>(j)) = m.pi_vector(plan.times()[j]).transpose();
  }
  return CoefficientMatrix::make(std::move(gamma), plan.times(), m.name());
}

namespace {

// Linear solves are gated by the hard condition-number threshold, not by the
// span-rank cutoff: a coefficient matrix with condition up to kConditionFail
// is still invertible in double precision.
Tolerance solver_tolerance(const Tolerance& tol) {
  Tolerance t = tol;
  t.eps_rank = 1.0 / kConditionFail;
  return t;
}

}  // namespace

SolvabilityVerdict check_solvable(const CoefficientMatrix& g) {
  SolvabilityVerdict v;
  if (g.rows() < g.kappa()) {
    std::ostringstream os;
    os << "coefficient matrix has " << g.rows() << " measurement times for " << g.kappa()
       << " unitaries: the probability system is underdetermined";
    throw Underdetermined(os.str());
  }
  v.square = g.rows() == g.kappa();
  v.det = v.square ? Eigen::PartialPivLU<RMatrix>(g.gamma).determinant()
                   : std::numeric_limits<double>::quiet_NaN();
  Eigen::JacobiSVD<RMatrix> svd(g.gamma);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  v.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  v.rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (smax > 0.0 && sv(i) > smax / kConditionFail) ++v.rank;
  }
  v.solvable = v.rank == g.kappa() && v.condition < kConditionFail;
  v.warning = v.solvable && v.condition >= kConditionWarn;
  return v;
}

RVector recover_effect_probabilities(const CoefficientMatrix& g, const RVector& p,
                                     const Tolerance& tol) {
  if (p.size() != g.rows()) {
    throw DimensionMismatch(
        "recover_effect_probabilities: one probability per time instant is required");
  }
  const SolvabilityVerdict v = check_solvable(g);
  if (!v.solvable) {
    std::ostringstream os;
    os << "coefficient matrix for model '" << g.model_name
       << "' is not solvable (rank " << v.rank << " of " << g.kappa() << ", condition "
       << v.condition
       << "); solvability requires det[pi_a(t_j)] != 0, i.e. pairwise distinct times";
    throw SolvabilityError(os.str(), v.det, v.condition);
  }
  if (v.square) return solve_linear(g.gamma, p, solver_tolerance(tol)).x;
  return solve_least_squares(g.gamma, p, solver_tolerance(tol)).x;
}

GeneratedPovm assemble_generated_povm(const RandomUnitaryDynamics& m,
                                      const OperatorSet& initial, const Tolerance& tol) {
  if (initial.dim() != m.dim()) {
    throw DimensionMismatch("assemble_generated_povm: operator dimension does not match");
  }
  std::vector<Effect> effects;
  std::vector<std::string> labels;
  effects.reserve(initial.size() * static_cast<std::size_t>(m.kappa()));
  for (std::size_t k = 0; k < initial.size(); ++k) {
    OperatorSet fam = m.heisenberg_effects(initial.effects[k], tol);
    for (std::size_t a = 0; a < fam.size(); ++a) {
      effects.push_back(fam.effects[a]);
      labels.push_back(initial.label(k) + "|" + fam.label(a));
    }
  }
  GeneratedPovm gp{OperatorSet(std::move(effects), std::move(labels)),
                   m.name(),
                   initial.size(),
                   m.kappa(),
                   false,
                   0.0,
                   0};
  const PovmCheck check = is_povm(gp.effects, tol);
  gp.completeness_residual = check.residual;
  std::vector<CMatrix> mats;
  mats.reserve(gp.effects.size());
  for (const auto& e : gp.effects.effects) mats.push_back(e.mat());
  gp.rank = span_rank(mats, tol);
  gp.ic = check.complete && gp.rank == m.dim() * m.dim();
  return gp;
}

namespace {

// Real parametrization of a d x d Hermitian matrix: the d diagonal entries,
// then (Re, Im) of each upper off-diagonal entry in row-major order.
Eigen::Index hermitian_param_count(Eigen::Index d) { return d * d; }

RVector effect_row(const CMatrix& e) {
  const Eigen::Index d = e.rows();
  RVector row(hermitian_param_count(d));
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < d; ++i) row(at++) = e(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      row(at++) = 2.0 * e(i, j).real();
      row(at++) = 2.0 * e(i, j).imag();
    }
  }
  return row;
}

CMatrix hermitian_from_params(const RVector& theta, Eigen::Index d) {
  CMatrix m(d, d);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = theta(at++);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Complex z(theta(at), theta(at + 1));
      at += 2;
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

}  // namespace

Reconstruction reconstruct(const GeneratedPovm& gp, const RVector& probs,
                           const Tolerance& tol) {
  if (!gp.ic) {
    std::ostringstream os;
    os << "reconstruct: the generated operator set is not informationally complete "
          "(span rank "
       << gp.rank << " of " << gp.effects.dim() * gp.effects.dim()
       << ", completeness residual " << gp.completeness_residual << ")";
    throw NotInformationallyComplete(os.str());
  }
  if (probs.size() != static_cast<Eigen::Index>(gp.effects.size())) {
    throw DimensionMismatch("reconstruct: one probability per generated effect is required");
  }
  const Eigen::Index d = gp.effects.dim();
  RMatrix a(probs.size(), hermitian_param_count(d));
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    a.row(i) = effect_row(gp.effects.effects[static_cast<std::size_t>(i)].mat());
  }
  const LeastSquaresSolution ls = solve_least_squares(a, probs, tol);
  DensityMatrix state = project_to_state_set(hermitian_from_params(ls.x, d), tol);
  return {std::move(state), ls.residual, ls.condition};
}

bool TheoremCertificate::passed() const {
  return std::all_of(obligations.begin(), obligations.end(),
                     [](const Obligation& o) { return o.pass; });
}

ModelId default_model(int theorem) {
  switch (theorem) {
    case 2:
      return ModelId::dephasing(1.0);
    case 3:
      return ModelId::pauli_rud();
    case 4:
      return ModelId::weyl_rud();
    default:
      throw ConfigError("theorem must be 2, 3 or 4");
  }
}

TimeSamplingPlan default_plan(int theorem) {
  switch (theorem) {
    case 2:
      return TimeSamplingPlan::make({0.2, 1.2});
    case 3:
      // log-spread across the slow and fast rates; keeps the inverse norm
      // near 30 so finite-shot data still carries signal
      return TimeSamplingPlan::make({0.1, 0.5, 2.5, 12.0});
    case 4: {
      std::vector<double> ts;
      for (int j = 1; j <= 9; ++j) ts.push_back(0.4 * j);
      return TimeSamplingPlan::make(std::move(ts));
    }
    default:
      throw ConfigError("theorem must be 2, 3 or 4");
  }
}

OperatorSet default_initial_ops(int theorem) {
  switch (theorem) {
    case 2:
      return builtin(BuiltinSet::qubit_m1_m2);
    case 3:
      return builtin(BuiltinSet::qubit_m0);
    case 4: {
      OperatorSet sic = builtin(BuiltinSet::sic_qutrit);
      return OperatorSet({sic.effects.front()}, {sic.label(0)});
    }
    default:
      throw ConfigError("theorem must be 2, 3 or 4");
  }
}

namespace {

Obligation leq(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

Obligation positive(std::string name, double value) {
  return {std::move(name), value, 0.0, value > 0.0};
}

Obligation rank_is(std::string name, Eigen::Index rank, Eigen::Index want) {
  return {std::move(name), static_cast<double>(rank), static_cast<double>(want),
          rank == want};
}

// Max distance of each generated effect to its matched set element under a
// one-to-one matching; anything unmatched pushes the value to 1.
double set_match_distance(const OperatorSet& generated, const OperatorSet& reference,
                          double threshold) {
  if (generated.size() != reference.size()) return 1.0;
  std::vector<bool> used(reference.size(), false);
  double worst = 0.0;
  for (const auto& g : generated.effects) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_at = reference.size();
    for (std::size_t r = 0; r < reference.size(); ++r) {
      if (used[r]) continue;
      const double dist = max_abs(g.mat() - reference.effects[r].mat());
      if (dist < best) {
        best = dist;
        best_at = r;
      }
    }
    if (best_at == reference.size() || best > threshold) return std::max(best, 1.0);
    used[best_at] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

// Conjugated families of M0 under the three Pauli conjugations, written out
// entrywise for an independent cross-check of heisenberg_effects.
std::vector<CMatrix> stored_m0_conjugates() {
  CMatrix c1(2, 2), c2(2, 2), c3(2, 2);
  c1 << Complex(3.0 / 10.0), Complex(1.0 / 6.0, -1.0 / 10.0),
      Complex(1.0 / 6.0, 1.0 / 10.0), Complex(1.0 / 5.0);
  c2 << Complex(3.0 / 10.0), Complex(-1.0 / 6.0, 1.0 / 10.0),
      Complex(-1.0 / 6.0, -1.0 / 10.0), Complex(1.0 / 5.0);
  c3 << Complex(1.0 / 5.0), Complex(-1.0 / 6.0, -1.0 / 10.0),
      Complex(-1.0 / 6.0, 1.0 / 10.0), Complex(3.0 / 10.0);
  return {c1, c2, c3};
}

TheoremCertificate verify_theorem_2(const Tolerance& tol) {
  TheoremCertificate cert{2, {}};
  const OperatorSet ops = builtin(BuiltinSet::qubit_m1_m2);
  cert.obligations.push_back(
      positive("M1 strictly positive (min eigenvalue)", min_eigenvalue(ops.effects[0].mat(), tol)));
  cert.obligations.push_back(
      positive("M2 strictly positive (min eigenvalue)", min_eigenvalue(ops.effects[1].mat(), tol)));

  // Determinant of the two-time dephasing coefficient matrix against the
  // closed form (e^{-g t1} - e^{-g t2}) / 2, over seeded random draws.
  std::mt19937_64 rng(20211u);
  std::uniform_real_distribution<double> rate(0.3, 3.0);
  std::uniform_real_distribution<double> time(0.05, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double g = rate(rng);
    double t1 = time(rng);
    double t2 = time(rng);
    if (t1 == t2) t2 += 0.1;
    if (t1 > t2) std::swap(t1, t2);
    const auto model = make_model(ModelId::dephasing(g), tol);
    const auto gamma = gamma_matrix(model, TimeSamplingPlan::make({t1, t2}));
    const auto verdict = check_solvable(gamma);
    const double closed = (std::exp(-g * t1) - std::exp(-g * t2)) / 2.0;
    worst = std::max(worst, std::abs(verdict.det - closed));
  }
  cert.obligations.push_back(
      leq("determinant matches closed form over 10 random rate/time draws", worst, 1e-12));

  const auto model = make_model(default_model(2), tol);
  const auto verdict = check_solvable(gamma_matrix(model, default_plan(2)));
  cert.obligations.push_back({"coefficient matrix solvable on default grid (condition)",
                              verdict.condition, kConditionFail, verdict.solvable});

  const GeneratedPovm gp = assemble_generated_povm(model, ops, tol);
  cert.obligations.push_back(
      leq("generated set sums to identity (max residual)", gp.completeness_residual, 1e-12));
  cert.obligations.push_back(rank_is("span rank of generated set", gp.rank, 4));
  return cert;
}

TheoremCertificate verify_theorem_3(const Tolerance& tol) {
  TheoremCertificate cert{3, {}};
  const OperatorSet ops = builtin(BuiltinSet::qubit_m0);
  cert.obligations.push_back(
      positive("M0 strictly positive (min eigenvalue)", min_eigenvalue(ops.effects[0].mat(), tol)));

  const auto model = make_model(default_model(3), tol);
  const auto verdict = check_solvable(gamma_matrix(model, default_plan(3)));
  cert.obligations.push_back({"coefficient matrix condition below 1e6 on default grid",
                              verdict.condition, 1e6,
                              verdict.solvable && verdict.condition < 1e6});

  const OperatorSet fam = model.heisenberg_effects(ops.effects[0], tol);
  const auto stored = stored_m0_conjugates();
  double worst = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    worst = std::max(worst, max_abs(fam.effects[a + 1].mat() - stored[a]));
  }
  cert.obligations.push_back(
      leq("conjugated family matches stored entrywise values", worst, 1e-12));

  const GeneratedPovm gp = assemble_generated_povm(model, ops, tol);
  cert.obligations.push_back(rank_is(
      "homogeneous combination vanishes only trivially (span rank)", gp.rank, 4));
  cert.obligations.push_back(
      leq("generated set sums to identity (max residual)", gp.completeness_residual, 1e-12));
  return cert;
}

TheoremCertificate verify_theorem_4(const Tolerance& tol) {
  TheoremCertificate cert{4, {}};
  const auto us = weyl_unitaries();
  double unitary_residual = 0.0;
  for (const auto& u : us) {
    unitary_residual = std::max(unitary_residual, max_abs(u.adjoint() * u - identity(3)));
  }
  cert.obligations.push_back(
      leq("all nine Weyl unitaries satisfy U^dag U = I", unitary_residual, 1e-12));

  const auto model = make_model(default_model(4), tol);
  const auto verdict = check_solvable(gamma_matrix(model, default_plan(4)));
  cert.obligations.push_back(
      {"9x9 coefficient matrix solvable for nine distinct times (condition)",
       verdict.condition, kConditionFail, verdict.solvable});

  const OperatorSet sic = builtin(BuiltinSet::sic_qutrit);
  double sum_residual = 0.0;
  for (std::size_t s = 0; s < sic.size(); ++s) {
    const OperatorSet start({sic.effects[s]}, {sic.label(s)});
    const GeneratedPovm gp = assemble_generated_povm(model, start, tol);
    const double dist = set_match_distance(gp.effects, sic, 1e-9);
    cert.obligations.push_back(
        leq("generated set from " + sic.label(s) + " equals the full SIC set", dist, 1e-9));
    sum_residual = std::max(sum_residual, gp.completeness_residual);
  }
  cert.obligations.push_back(
      leq("every generated set sums to identity (max residual)", sum_residual, 1e-12));

  // End-to-end round trip through the default grid with exact probabilities.
  const auto plan = default_plan(4);
  const auto gamma = gamma_matrix(model, plan);
  const OperatorSet initial = default_initial_ops(4);
  const GeneratedPovm gp = assemble_generated_povm(model, initial, tol);
  double worst_deficit = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DensityMatrix truth = random_density(3, seed);
    RVector p(static_cast<Eigen::Index>(plan.size()));
    for (std::size_t j = 0; j < plan.size(); ++j) {
      p(static_cast<Eigen::Index>(j)) = born_probability(
          initial.effects[0], model.evolve(truth, plan.times()[j], tol), tol);
    }
    const RVector x = recover_effect_probabilities(gamma, p, tol);
    const Reconstruction rec = reconstruct(gp, x, tol);
    worst_deficit = std::max(worst_deficit, 1.0 - fidelity(truth, rec.state));
  }
  cert.obligations.push_back(
      leq("reconstruction round trip (worst fidelity deficit over 5 states)", worst_deficit,
          1e-9));
  return cert;
}

}  // namespace

TheoremCertificate verify_theorem(int n, const Tolerance& tol) {
  switch (n) {
    case 2:
      return verify_theorem_2(tol);
    case 3:
      return verify_theorem_3(tol);
    case 4:
      return verify_theorem_4(tol);
    default:
      throw ConfigError("verify_theorem: theorem must be 2, 3 or 4");
  }
}

}  // namespace tdtomo
