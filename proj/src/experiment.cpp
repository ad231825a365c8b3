#include "tdtomo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tdtomo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ b);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return mix_seed(mix_seed(mix_seed(a, b), c), d);
}

OperatorSet ExperimentConfig::initial_ops() const {
  if (explicit_ops) return *explicit_ops;
  OperatorSet set = builtin(builtin_name);
  if (take.empty()) return set;
  std::vector<Effect> effects;
  std::vector<std::string> labels;
  for (int idx : take) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= set.size()) {
      std::ostringstream os;
      os << "initial_ops.take: index " << idx << " is out of range for '" << builtin_name
         << "' (" << set.size() << " effects)";
      throw ConfigError(os.str());
    }
    effects.push_back(set.effects[static_cast<std::size_t>(idx)]);
    labels.push_back(set.label(static_cast<std::size_t>(idx)));
  }
  return OperatorSet(std::move(effects), std::move(labels));
}

TimeSamplingPlan ExperimentConfig::plan() const { return TimeSamplingPlan::make(times); }

void ExperimentConfig::validate() const {
  model.validate();
  if (builtin_name.empty() && !explicit_ops) {
    throw ConfigError("initial_ops: either a builtin name or an explicit operator set is required");
  }
  if (!builtin_name.empty() && explicit_ops) {
    throw ConfigError("initial_ops: builtin name and explicit operator set are mutually exclusive");
  }
  if (times.empty()) throw ConfigError("times: at least one time instant is required");
  if (shots && *shots < 1) throw ConfigError("shots: must be a positive integer or \"exact\"");
  if (trials < 1) throw ConfigError("trials: must be at least 1");
  if (truth.kind == TruthSpec::Kind::explicit_state && !truth.state) {
    throw ConfigError("truth: explicit kind requires a state");
  }
}

ExperimentConfig default_config(int theorem) {
  ExperimentConfig cfg;
  cfg.model = default_model(theorem);
  switch (theorem) {
    case 2:
      cfg.builtin_name = "qubit_m1_m2";
      break;
    case 3:
      cfg.builtin_name = "qubit_m0";
      break;
    case 4:
      cfg.builtin_name = "sic_qutrit";
      cfg.take = {0};
      break;
    default:
      throw ConfigError("theorem must be 2, 3 or 4");
  }
  cfg.times = default_plan(theorem).times();
  cfg.truth = {TruthSpec::Kind::random_mixed, std::nullopt, 7};
  cfg.shots = std::nullopt;
  cfg.trials = 1;
  cfg.master_seed = 1;
  return cfg;
}

RMatrix simulate_probabilities(const DensityMatrix& truth, const RandomUnitaryDynamics& m,
                               const OperatorSet& ops, const TimeSamplingPlan& plan,
                               const Tolerance& tol) {
  if (truth.dim() != m.dim() || ops.dim() != m.dim()) {
    throw DimensionMismatch("simulate_probabilities: inconsistent dimensions");
  }
  RMatrix p(static_cast<Eigen::Index>(ops.size()), static_cast<Eigen::Index>(plan.size()));
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const DensityMatrix evolved = m.evolve(truth, plan.times()[j], tol);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          born_probability(ops.effects[k], evolved, tol);
    }
  }
  return p;
}

RMatrix sample_frequencies(const RMatrix& p, long shots, std::uint64_t master_seed,
                           std::uint64_t trial) {
  if (shots < 1) throw Error("sample_frequencies: shots must be positive");
  if (p.minCoeff() < 0.0 || p.maxCoeff() > 1.0) {
    throw Error("sample_frequencies: probabilities must lie in [0, 1]");
  }
  RMatrix f(p.rows(), p.cols());
  for (Eigen::Index k = 0; k < p.rows(); ++k) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      std::mt19937_64 rng(mix_seed(master_seed, trial, static_cast<std::uint64_t>(k),
                                   static_cast<std::uint64_t>(j)));
      std::binomial_distribution<long> binom(shots, p(k, j));
      f(k, j) = static_cast<double>(binom(rng)) / static_cast<double>(shots);
    }
  }
  return f;
}

namespace {

DensityMatrix resolve_truth(const ExperimentConfig& cfg, int trial, Eigen::Index d) {
  switch (cfg.truth.kind) {
    case TruthSpec::Kind::explicit_state:
      return *cfg.truth.state;
    case TruthSpec::Kind::random_mixed:
      return random_density(static_cast<int>(d),
                            mix_seed(cfg.truth.seed, static_cast<std::uint64_t>(trial)));
    case TruthSpec::Kind::random_pure:
      return random_pure_density(static_cast<int>(d),
                                 mix_seed(cfg.truth.seed, static_cast<std::uint64_t>(trial)));
  }
  throw Error("unreachable truth kind");
}

TrialResult run_trial(const ExperimentConfig& cfg, const RandomUnitaryDynamics& model,
                      const OperatorSet& ops, const TimeSamplingPlan& plan,
                      const CoefficientMatrix& gamma, const GeneratedPovm& gp, int trial) {
  const Tolerance& tol = default_tolerance();
  const DensityMatrix truth = resolve_truth(cfg, trial, model.dim());
  RMatrix p = simulate_probabilities(truth, model, ops, plan, tol);
  if (cfg.shots) {
    p = sample_frequencies(p, *cfg.shots, cfg.master_seed, static_cast<std::uint64_t>(trial));
  }
  RVector probs(static_cast<Eigen::Index>(gp.effects.size()));
  double recover_residual = 0.0;
  for (Eigen::Index k = 0; k < p.rows(); ++k) {
    const RVector pk = p.row(k).transpose();
    const RVector xk = recover_effect_probabilities(gamma, pk, tol);
    recover_residual = std::max(recover_residual, (gamma.gamma * xk - pk).norm());
    probs.segment(k * gamma.kappa(), gamma.kappa()) = xk;
  }
  const Reconstruction rec = reconstruct(gp, probs, tol);
  TrialResult out;
  out.trial = trial;
  out.fidelity = fidelity(truth, rec.state);
  out.recover_residual = recover_residual;
  out.lstsq_residual = rec.residual;
  out.estimate = rec.state.mat();
  return out;
}

}  // namespace

RunReport run_pipeline(const ExperimentConfig& cfg, Execution exec) {
  cfg.validate();
  const RandomUnitaryDynamics model = make_model(cfg.model);
  const OperatorSet ops = cfg.initial_ops();
  const GeneratedPovm gp = assemble_generated_povm(model, ops);

  RunReport rep;
  rep.ic = gp.ic;
  rep.rank = gp.rank;
  rep.completeness_residual = gp.completeness_residual;
  rep.generated_size = gp.effects.size();
  if (!gp.ic) {
    rep.status = RunStatus::not_informationally_complete;
    std::ostringstream os;
    os << "generated operator set is not informationally complete (span rank " << gp.rank
       << " of " << gp.effects.dim() * gp.effects.dim() << ", completeness residual "
       << gp.completeness_residual << ")";
    rep.message = os.str();
    return rep;
  }

  // Solvability failures (a repeated time, a singular grid) land in the
  // report rather than escaping as exceptions.
  std::optional<TimeSamplingPlan> plan;
  std::optional<CoefficientMatrix> gamma_opt;
  try {
    plan = cfg.plan();
    gamma_opt = gamma_matrix(model, *plan);
    rep.gamma = check_solvable(*gamma_opt);
  } catch (const SolvabilityError& e) {
    rep.status = RunStatus::not_solvable;
    rep.message = e.what();
    return rep;
  }
  if (!rep.gamma.solvable) {
    rep.status = RunStatus::not_solvable;
    std::ostringstream os;
    os << "coefficient matrix is not solvable (condition " << rep.gamma.condition
       << "); det[pi_a(t_j)] != 0 requires pairwise distinct times";
    rep.message = os.str();
    return rep;
  }
  const CoefficientMatrix& gamma = *gamma_opt;

  rep.trials.resize(static_cast<std::size_t>(cfg.trials));
  std::exception_ptr failure = nullptr;
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
      try {
        rep.trials[static_cast<std::size_t>(t)] =
            run_trial(cfg, model, ops, *plan, gamma, gp, t);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    for (int t = 0; t < cfg.trials; ++t) {
      rep.trials[static_cast<std::size_t>(t)] = run_trial(cfg, model, ops, *plan, gamma, gp, t);
    }
  }
  if (failure) std::rethrow_exception(failure);

  double sum = 0.0;
  for (const auto& tr : rep.trials) sum += tr.fidelity;
  rep.mean_fidelity = sum / static_cast<double>(cfg.trials);
  double var = 0.0;
  for (const auto& tr : rep.trials) {
    var += (tr.fidelity - rep.mean_fidelity) * (tr.fidelity - rep.mean_fidelity);
  }
  rep.std_fidelity = cfg.trials > 1 ? std::sqrt(var / static_cast<double>(cfg.trials - 1)) : 0.0;
  rep.status = RunStatus::ok;
  return rep;
}

std::vector<SweepRow> sweep_shots(const ExperimentConfig& cfg,
                                  const std::vector<long>& shots_list, Execution exec) {
  if (shots_list.empty()) throw ConfigError("sweep: at least one shot count is required");
  std::vector<SweepRow> rows;
  rows.reserve(shots_list.size());
  for (long s : shots_list) {
    if (s < 1) throw ConfigError("sweep: shot counts must be positive");
    ExperimentConfig run_cfg = cfg;
    run_cfg.shots = s;
    const RunReport rep = run_pipeline(run_cfg, exec);
    if (rep.status != RunStatus::ok) throw Error("sweep: " + rep.message);
    rows.push_back({s, rep.mean_fidelity, rep.std_fidelity, rep.gamma.condition});
  }
  return rows;
}

}  // namespace tdtomo
