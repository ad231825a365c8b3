// Command-line front end: theorem certificates, configured experiment runs,
// shot sweeps and operator-set inspection.
//
// Exit codes: 0 success, 1 domain failure (failed certificate, singular
// coefficient matrix, incomplete generated set), 2 usage or config errors.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdtomo/experiment.hpp"
#include "tdtomo/serialize.hpp"
#include "tdtomo/tomography.hpp"

namespace {

using namespace tdtomo;

void apply_seed_override(ExperimentConfig& cfg) {
  if (const char* env = std::getenv("TOMO_SEED")) {
    try {
      cfg.master_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("TOMO_SEED must be an unsigned integer, got '" + std::string(env) +
                        "'");
    }
  }
}

// Validation failures inside user-supplied files are config errors (exit 2);
// domain failures from the pipeline itself keep exit 1.
ExperimentConfig load_config(const std::string& path) {
  try {
    ExperimentConfig cfg = config_from_json(load_json_file(path));
    apply_seed_override(cfg);
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

OperatorSet load_operator_set(const std::string& path) {
  try {
    return operator_set_from_json(load_json_file(path));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("operator set " + path + ": " + e.what());
  }
}

int cmd_verify(int theorem, bool as_json) {
  const TheoremCertificate cert = verify_theorem(theorem);
  if (as_json) {
    std::cout << certificate_to_json(cert).dump(2) << "\n";
  } else {
    std::cout << "certificate: theorem " << theorem << "\n";
    for (const auto& o : cert.obligations) {
      std::cout << (o.pass ? "  PASS  " : "  FAIL  ") << o.name
                << ": value = " << format_sig(o.value)
                << ", threshold = " << format_sig(o.threshold) << "\n";
    }
    std::cout << "result: " << (cert.passed() ? "PASS" : "FAIL") << "\n";
  }
  return cert.passed() ? 0 : 1;
}

int cmd_run(const std::string& config_path, const std::string& out_path) {
  const ExperimentConfig cfg = load_config(config_path);
  const RunReport rep = run_pipeline(cfg);
  write_text_file(out_path, report_to_json(rep, cfg).dump(2) + "\n");
  if (rep.status != RunStatus::ok) {
    std::cerr << "error: " << rep.message << "\n";
    std::cerr << "report written to " << out_path << "\n";
    return 1;
  }
  std::cout << "mean_fidelity = " << format_sig(rep.mean_fidelity)
            << ", std_fidelity = " << format_sig(rep.std_fidelity)
            << ", cond_gamma = " << format_sig(rep.gamma.condition)
            << ", trials = " << rep.trials.size() << "\n";
  std::cout << "report written to " << out_path << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<long>& shots,
              const std::string& out_path) {
  const ExperimentConfig cfg = load_config(config_path);
  const auto rows = sweep_shots(cfg, shots);
  write_text_file(out_path, sweep_to_csv(rows));
  std::cout << rows.size() << " rows written to " << out_path << "\n";
  return 0;
}

int cmd_inspect(const std::string& name, const std::string& file_path) {
  OperatorSet set = file_path.empty() ? builtin(name) : load_operator_set(file_path);
  const std::string title = file_path.empty() ? name : file_path;
  std::cout << "operator set: " << title << " (" << set.size() << " effects, dim "
            << set.dim() << ")\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::cout << "  " << set.label(i)
              << ": min eigenvalue = " << format_sig(min_eigenvalue(set.effects[i].mat()))
              << "\n";
  }
  const PovmCheck check = is_povm(set);
  std::cout << "complete (sums to identity): " << (check.complete ? "yes" : "no")
            << " (max residual " << format_sig(check.residual) << ")\n";
  std::vector<CMatrix> mats;
  for (const auto& e : set.effects) mats.push_back(e.mat());
  const Eigen::Index rank = span_rank(mats);
  std::cout << "span rank: " << rank << " of " << set.dim() * set.dim() << "\n";
  std::cout << "informationally complete: " << (is_ic(set) ? "yes" : "no") << "\n";
  if (is_sic(set)) {
    double mean_overlap = 0.0;
    int pairs = 0;
    for (std::size_t j = 0; j < set.size(); ++j) {
      for (std::size_t k = j + 1; k < set.size(); ++k) {
        mean_overlap += static_cast<double>(set.dim() * set.dim()) *
                        (set.effects[j].mat() * set.effects[k].mat()).trace().real();
        ++pairs;
      }
    }
    std::cout << "SIC: yes (pairwise overlap " << format_sig(mean_overlap / pairs) << ")\n";
  } else {
    std::cout << "SIC: no\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-domain generation of informationally complete POVMs and "
               "density-matrix reconstruction"};
  app.require_subcommand(1);

  int theorem = 0;
  bool as_json = false;
  auto* verify = app.add_subcommand("verify", "run a theorem certificate");
  verify->add_option("--theorem", theorem, "theorem number (2, 3 or 4)")
      ->required()
      ->check(CLI::IsMember({2, 3, 4}));
  verify->add_flag("--json", as_json, "emit the certificate as JSON");

  std::string run_config, run_out = "report.json";
  auto* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("--config", run_config, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "report output path");

  std::string sweep_config, sweep_out = "sweep.csv";
  std::vector<long> sweep_shots_list;
  auto* sweep = app.add_subcommand("sweep", "sweep the shot budget");
  sweep->add_option("--config", sweep_config, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--shots", sweep_shots_list, "comma-separated shot counts")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "CSV output path");

  std::string inspect_name, inspect_file;
  auto* inspect = app.add_subcommand("inspect", "analyze an operator set");
  inspect->add_option("name", inspect_name, "builtin operator-set name");
  inspect->add_option("--file", inspect_file, "operator-set JSON file")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(theorem, as_json);
    if (*run) return cmd_run(run_config, run_out);
    if (*sweep) return cmd_sweep(sweep_config, sweep_shots_list, sweep_out);
    if (*inspect) {
      if (inspect_name.empty() == inspect_file.empty()) {
        std::cerr << "inspect: provide exactly one of <name> or --file\n";
        return 2;
      }
      return cmd_inspect(inspect_name, inspect_file);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
