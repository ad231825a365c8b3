// Compares the serial reference trial runner against the OpenMP path on a
// noisy reconstruction workload and checks that both produce identical
// results.
//
// Usage: bench_trials [trials] [shots]

#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tdtomo/experiment.hpp"

using namespace tdtomo;

namespace {

double time_run(const ExperimentConfig& cfg, Execution exec, RunReport& out) {
  const auto start = std::chrono::steady_clock::now();
  out = run_pipeline(cfg, exec);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig cfg = default_config(3);
  cfg.trials = argc > 1 ? std::atoi(argv[1]) : 2000;
  cfg.shots = argc > 2 ? std::atol(argv[2]) : 100000;
  cfg.master_seed = 1;

#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (compiled without OpenMP)\n";
#endif
  std::cout << "trials: " << cfg.trials << ", shots per cell: " << *cfg.shots << "\n";

  RunReport serial, parallel;
  const double t_serial = time_run(cfg, Execution::serial, serial);
  const double t_parallel = time_run(cfg, Execution::parallel, parallel);

  bool identical = serial.trials.size() == parallel.trials.size();
  for (std::size_t i = 0; identical && i < serial.trials.size(); ++i) {
    identical = serial.trials[i].fidelity == parallel.trials[i].fidelity &&
                (serial.trials[i].estimate - parallel.trials[i].estimate)
                        .cwiseAbs()
                        .maxCoeff() == 0.0;
  }

  std::cout << "serial:   " << t_serial << " s\n";
  std::cout << "parallel: " << t_parallel << " s\n";
  std::cout << "speedup:  " << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x\n";
  std::cout << "identical results: " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
