#pragma once

#include <string>

#include <json.hpp>

#include "tdtomo/experiment.hpp"
#include "tdtomo/tomography.hpp"

namespace tdtomo {

using Json = nlohmann::json;

// Matrices serialize as {"dim": d, "re": [[...]], "im": [[...]]}, row-major.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

// DensityMatrix adds a "kind": "density" tag to the matrix format.
Json density_to_json(const DensityMatrix& r);
DensityMatrix density_from_json(const Json& j);

// {"dim": d, "effects": [matrix, ...], "labels": [...]}.
Json operator_set_to_json(const OperatorSet& s);
OperatorSet operator_set_from_json(const Json& j);

// {"model": "dephasing"|"pauli_rud"|"weyl_rud", "rates": [...]}.
Json model_to_json(const ModelId& id);
ModelId model_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& cfg);
// Exhaustive: unknown or missing fields raise ConfigError naming the field.
ExperimentConfig config_from_json(const Json& j);

Json certificate_to_json(const TheoremCertificate& cert);

// Full run report: config echo, coefficient-matrix diagnostics, IC verdict,
// per-trial results, aggregate statistics.
Json report_to_json(const RunReport& rep, const ExperimentConfig& cfg);

// Header `shots,mean_fidelity,std_fidelity,mean_cond`, one row per entry.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// 12 significant digits, the precision used for all printed numbers.
std::string format_sig(double v);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tdtomo
