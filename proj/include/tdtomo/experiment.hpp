#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdtomo/tomography.hpp"

namespace tdtomo {

// Stateless seed derivation (splitmix64 chain) so that every random draw in
// a run is addressed by (master_seed, trial, operator, time) rather than by
// iteration order. Parallel and serial execution therefore agree bit for bit.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

struct TruthSpec {
  enum class Kind { explicit_state, random_mixed, random_pure };
  Kind kind = Kind::random_mixed;
  std::optional<DensityMatrix> state;  // explicit_state only
  std::uint64_t seed = 0;              // random kinds only
};

struct ExperimentConfig {
  ModelId model;
  std::string builtin_name;            // set when initial ops come from a builtin
  std::vector<int> take;               // optional subset of the builtin, by index
  std::optional<OperatorSet> explicit_ops;
  std::vector<double> times;
  TruthSpec truth;
  std::optional<long> shots;           // nullopt = exact probabilities
  int trials = 1;
  std::uint64_t master_seed = 0;

  OperatorSet initial_ops() const;
  TimeSamplingPlan plan() const;
  void validate() const;  // throws ConfigError on structural problems
};

// Ready-made exact configuration for one of the three theorem setups.
ExperimentConfig default_config(int theorem);

// p(k, j) = Tr{M_k evolve(rho, t_j)}, one row per initial operator.
RMatrix simulate_probabilities(const DensityMatrix& truth, const RandomUnitaryDynamics& m,
                               const OperatorSet& ops, const TimeSamplingPlan& plan,
                               const Tolerance& tol = default_tolerance());

// Relative frequencies: each cell is an independent Binomial(shots, p)/shots
// draw with a seed derived from (master_seed, trial, k, j).
RMatrix sample_frequencies(const RMatrix& p, long shots, std::uint64_t master_seed,
                           std::uint64_t trial = 0);

struct TrialResult {
  int trial = 0;
  double fidelity = 0.0;
  double recover_residual = 0.0;  // max over operators of ||Gamma x - p||
  double lstsq_residual = 0.0;    // reconstruction probability-fit residual
  CMatrix estimate;
};

enum class RunStatus { ok, not_informationally_complete, not_solvable };

struct RunReport {
  RunStatus status = RunStatus::ok;
  std::string message;
  SolvabilityVerdict gamma;
  bool ic = false;
  Eigen::Index rank = 0;
  double completeness_residual = 0.0;
  std::size_t generated_size = 0;
  std::vector<TrialResult> trials;
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;
};

enum class Execution { serial, parallel };

// Full pipeline: simulate -> (optionally sample) -> invert the time-sampled
// system per operator -> reconstruct -> score against the truth. Trials are
// independent; `parallel` runs them across OpenMP threads with identical
// results to `serial`. IC or solvability failures are surfaced in the report.
RunReport run_pipeline(const ExperimentConfig& cfg, Execution exec = Execution::parallel);

struct SweepRow {
  long shots = 0;
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;
  double mean_cond = 0.0;
};

std::vector<SweepRow> sweep_shots(const ExperimentConfig& cfg,
                                  const std::vector<long>& shots_list,
                                  Execution exec = Execution::parallel);

}  // namespace tdtomo
