#include "tdtomo/serialize.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tdtomo {

namespace {

void require_object_keys(const Json& j, const std::set<std::string>& required,
                         const std::set<std::string>& optional, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& key : required) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  }
  for (const auto& [key, _] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw ConfigError(where + ": unknown field '" + key + "'");
    }
  }
}

RMatrix part_from_json(const Json& j, Eigen::Index d, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != d) {
    throw ConfigError(where + ": expected " + std::to_string(d) + " rows");
  }
  RMatrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw ConfigError(where + ": row " + std::to_string(r) + " must have " +
                        std::to_string(d) + " entries");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) throw ConfigError(where + ": entries must be numbers");
      out(r, c) = cell.get<double>();
    }
  }
  return out;
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  const Eigen::Index d = m.rows();
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < d; ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index c = 0; c < d; ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return Json{{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const Json& j) {
  require_object_keys(j, {"dim", "re", "im"}, {"kind"}, "matrix");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) {
    throw ConfigError("matrix: 'dim' must be a positive integer");
  }
  const auto d = static_cast<Eigen::Index>(j["dim"].get<int>());
  const RMatrix re = part_from_json(j["re"], d, "matrix.re");
  const RMatrix im = part_from_json(j["im"], d, "matrix.im");
  CMatrix m(d, d);
  m.real() = re;
  m.imag() = im;
  return m;
}

Json density_to_json(const DensityMatrix& r) {
  Json j = matrix_to_json(r.mat());
  j["kind"] = "density";
  return j;
}

DensityMatrix density_from_json(const Json& j) {
  if (j.contains("kind") && j["kind"] != "density") {
    throw ConfigError("density matrix: 'kind' must be \"density\"");
  }
  return make_density(matrix_from_json(j));
}

Json operator_set_to_json(const OperatorSet& s) {
  Json effects = Json::array();
  Json labels = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    effects.push_back(matrix_to_json(s.effects[i].mat()));
    labels.push_back(s.label(i));
  }
  return Json{{"dim", s.dim()}, {"effects", std::move(effects)}, {"labels", std::move(labels)}};
}

OperatorSet operator_set_from_json(const Json& j) {
  require_object_keys(j, {"dim", "effects"}, {"labels"}, "operator set");
  if (!j["effects"].is_array() || j["effects"].empty()) {
    throw ConfigError("operator set: 'effects' must be a nonempty array");
  }
  const auto d = static_cast<Eigen::Index>(j["dim"].get<int>());
  std::vector<Effect> effects;
  for (const auto& e : j["effects"]) {
    CMatrix m = matrix_from_json(e);
    if (m.rows() != d) throw ConfigError("operator set: effect dimension differs from 'dim'");
    effects.emplace_back(m);
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto& l : j["labels"]) labels.push_back(l.get<std::string>());
  }
  return OperatorSet(std::move(effects), std::move(labels));
}

Json model_to_json(const ModelId& id) {
  return Json{{"model", id.name()}, {"rates", id.rates}};
}

ModelId model_from_json(const Json& j) {
  require_object_keys(j, {"model"}, {"rates"}, "model");
  const std::string name = j["model"].get<std::string>();
  std::vector<double> rates;
  if (j.contains("rates")) {
    if (!j["rates"].is_array()) throw ConfigError("model: 'rates' must be an array");
    for (const auto& r : j["rates"]) rates.push_back(r.get<double>());
  }
  ModelId id;
  if (name == "dephasing") {
    id = rates.empty() ? ModelId::dephasing() : ModelId{ModelKind::dephasing, rates};
  } else if (name == "pauli_rud") {
    id = rates.empty() ? ModelId::pauli_rud() : ModelId{ModelKind::pauli_rud, rates};
  } else if (name == "weyl_rud") {
    id = ModelId::weyl_rud(rates);
  } else {
    throw ConfigError("model: unknown model '" + name +
                      "' (expected dephasing, pauli_rud or weyl_rud)");
  }
  id.validate();
  return id;
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["model"] = model_to_json(cfg.model);
  if (cfg.explicit_ops) {
    j["initial_ops"] = operator_set_to_json(*cfg.explicit_ops);
  } else if (cfg.take.empty()) {
    j["initial_ops"] = cfg.builtin_name;
  } else {
    j["initial_ops"] = Json{{"builtin", cfg.builtin_name}, {"take", cfg.take}};
  }
  j["times"] = cfg.times;
  switch (cfg.truth.kind) {
    case TruthSpec::Kind::explicit_state:
      j["truth"] = Json{{"kind", "explicit"}, {"state", density_to_json(*cfg.truth.state)}};
      break;
    case TruthSpec::Kind::random_mixed:
      j["truth"] = Json{{"kind", "random"}, {"seed", cfg.truth.seed}};
      break;
    case TruthSpec::Kind::random_pure:
      j["truth"] = Json{{"kind", "random_pure"}, {"seed", cfg.truth.seed}};
      break;
  }
  if (cfg.shots) {
    j["shots"] = *cfg.shots;
  } else {
    j["shots"] = "exact";
  }
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  require_object_keys(j, {"model", "initial_ops", "times", "truth"},
                      {"shots", "trials", "master_seed"}, "config");
  ExperimentConfig cfg;
  cfg.model = model_from_json(j["model"]);

  const Json& ops = j["initial_ops"];
  if (ops.is_string()) {
    cfg.builtin_name = ops.get<std::string>();
  } else if (ops.is_object() && ops.contains("builtin")) {
    require_object_keys(ops, {"builtin"}, {"take"}, "initial_ops");
    cfg.builtin_name = ops["builtin"].get<std::string>();
    if (ops.contains("take")) {
      for (const auto& t : ops["take"]) cfg.take.push_back(t.get<int>());
    }
  } else {
    cfg.explicit_ops = operator_set_from_json(ops);
  }

  if (!j["times"].is_array() || j["times"].empty()) {
    throw ConfigError("config: 'times' must be a nonempty array of numbers");
  }
  for (const auto& t : j["times"]) {
    if (!t.is_number()) throw ConfigError("config: 'times' must contain numbers");
    cfg.times.push_back(t.get<double>());
  }

  const Json& truth = j["truth"];
  require_object_keys(truth, {"kind"}, {"seed", "state"}, "truth");
  const std::string kind = truth["kind"].get<std::string>();
  if (kind == "explicit") {
    if (!truth.contains("state")) throw ConfigError("truth: explicit kind requires 'state'");
    cfg.truth = {TruthSpec::Kind::explicit_state, density_from_json(truth["state"]), 0};
  } else if (kind == "random" || kind == "random_pure") {
    cfg.truth.kind = kind == "random" ? TruthSpec::Kind::random_mixed
                                      : TruthSpec::Kind::random_pure;
    if (truth.contains("seed")) cfg.truth.seed = truth["seed"].get<std::uint64_t>();
  } else {
    throw ConfigError("truth: unknown kind '" + kind +
                      "' (expected explicit, random or random_pure)");
  }

  if (j.contains("shots")) {
    if (j["shots"].is_string()) {
      if (j["shots"] != "exact") throw ConfigError("config: 'shots' must be a count or \"exact\"");
    } else if (j["shots"].is_number_integer()) {
      cfg.shots = j["shots"].get<long>();
    } else {
      throw ConfigError("config: 'shots' must be a count or \"exact\"");
    }
  }
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

Json certificate_to_json(const TheoremCertificate& cert) {
  Json obligations = Json::array();
  for (const auto& o : cert.obligations) {
    obligations.push_back(Json{{"name", o.name},
                               {"value", o.value},
                               {"threshold", o.threshold},
                               {"pass", o.pass}});
  }
  return Json{{"theorem", cert.theorem},
              {"pass", cert.passed()},
              {"obligations", std::move(obligations)}};
}

Json report_to_json(const RunReport& rep, const ExperimentConfig& cfg) {
  Json j;
  j["config"] = config_to_json(cfg);
  switch (rep.status) {
    case RunStatus::ok:
      j["status"] = "ok";
      break;
    case RunStatus::not_informationally_complete:
      j["status"] = "not_informationally_complete";
      break;
    case RunStatus::not_solvable:
      j["status"] = "not_solvable";
      break;
  }
  if (!rep.message.empty()) j["message"] = rep.message;
  j["generated_povm"] = Json{{"size", rep.generated_size},
                             {"ic", rep.ic},
                             {"span_rank", rep.rank},
                             {"completeness_residual", rep.completeness_residual}};
  if (rep.status != RunStatus::not_informationally_complete) {
    Json g;
    g["square"] = rep.gamma.square;
    if (rep.gamma.square && std::isfinite(rep.gamma.det)) g["det"] = rep.gamma.det;
    g["condition"] = rep.gamma.condition;
    g["rank"] = rep.gamma.rank;
    g["solvable"] = rep.gamma.solvable;
    g["warning"] = rep.gamma.warning;
    j["gamma"] = std::move(g);
  }
  Json trials = Json::array();
  for (const auto& t : rep.trials) {
    Json estimate = matrix_to_json(t.estimate);
    estimate["kind"] = "density";
    trials.push_back(Json{{"trial", t.trial},
                          {"fidelity", t.fidelity},
                          {"recover_residual", t.recover_residual},
                          {"lstsq_residual", t.lstsq_residual},
                          {"estimate", std::move(estimate)}});
  }
  j["trials"] = std::move(trials);
  j["aggregate"] = Json{{"mean_fidelity", rep.mean_fidelity}, {"std_fidelity", rep.std_fidelity}};
  return j;
}

std::string format_sig(double v) {
  std::ostringstream os;
  os.precision(12);
  os << std::showpoint << v;
  return os.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "shots,mean_fidelity,std_fidelity,mean_cond\n";
  for (const auto& r : rows) {
    os << r.shots << ',' << format_sig(r.mean_fidelity) << ',' << format_sig(r.std_fidelity)
       << ',' << format_sig(r.mean_cond) << '\n';
  }
  return os.str();
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
}

}  // namespace tdtomo
