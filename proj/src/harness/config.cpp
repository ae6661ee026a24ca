#include "swapdrift/harness.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>
#include <sstream>

namespace swapdrift::harness {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario",    "initial_bloch", "initial_matrix", "drift_kind", "delta",
      "systematic_axis", "diffusion_sigma", "mix_weight", "epsilon",   "dimension",
      "separations", "pairs",         "seed",           "alpha_tol",  "output"};
  return keys;
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  throw ConfigError(fmt::format("config field '{}': {}", field, message));
}

double get_number(const json& doc, const std::string& field) {
  const json& v = doc.at(field);
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

Vec3 get_vec3(const json& doc, const std::string& field) {
  const json& v = doc.at(field);
  if (!v.is_array() || v.size() != 3) field_error(field, "expected an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) field_error(field, "expected numbers");
    out[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
  return out;
}

ComplexMatrix get_matrix(const json& doc, const std::string& field) {
  const json& v = doc.at(field);
  if (!v.is_object() || !v.contains("re")) {
    field_error(field, "expected an object {\"re\": [[...]], \"im\": [[...]]}");
  }
  auto read_part = [&](const char* part, Eigen::Index n) -> Eigen::MatrixXd {
    const json& rows = v.at(part);
    if (!rows.is_array() || (n >= 0 && static_cast<Eigen::Index>(rows.size()) != n)) {
      field_error(field, fmt::format("'{}' must be a square array of rows", part));
    }
    const auto size = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd out(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != size) {
        field_error(field, fmt::format("'{}' must be a square array of rows", part));
      }
      for (Eigen::Index j = 0; j < size; ++j) {
        if (!row[static_cast<std::size_t>(j)].is_number()) field_error(field, "expected numbers");
        out(i, j) = row[static_cast<std::size_t>(j)].get<double>();
      }
    }
    return out;
  };
  const Eigen::MatrixXd re = read_part("re", -1);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (v.contains("im")) im = read_part("im", re.rows());
  ComplexMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    json c = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return json{{"re", re}, {"im", im}};
}

}  // namespace

DensityMatrix ExperimentConfig::initial_state() const {
  if (initial_matrix) return DensityMatrix(*initial_matrix);
  return density_from_bloch(BlochVector(initial_bloch.value_or(Vec3::UnitZ())));
}

nlohmann::json ExperimentConfig::to_json() const {
  json doc;
  doc["scenario"] = scenario;
  if (initial_matrix) {
    doc["initial_matrix"] = matrix_to_json(*initial_matrix);
  } else {
    const Vec3 b = initial_bloch.value_or(Vec3::UnitZ());
    doc["initial_bloch"] = {b.x(), b.y(), b.z()};
  }
  doc["drift_kind"] = std::string(to_string(drift.kind));
  doc["delta"] = drift.delta;
  doc["systematic_axis"] = {drift.systematic_axis.x(), drift.systematic_axis.y(),
                            drift.systematic_axis.z()};
  doc["diffusion_sigma"] = drift.diffusion_sigma;
  doc["mix_weight"] = drift.mix_weight;
  if (decoherence) {
    doc["epsilon"] = decoherence->epsilon;
    doc["dimension"] = decoherence->dimension;
  }
  doc["separations"] = separations;
  doc["pairs"] = pairs;
  doc["seed"] = seed;
  doc["alpha_tol"] = alpha_tol;
  if (!output.empty()) doc["output"] = output;
  return doc;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!known_keys().contains(item.key())) field_error(item.key(), "unknown key");
  }

  ExperimentConfig cfg;
  if (doc.contains("scenario")) {
    if (!doc["scenario"].is_string()) field_error("scenario", "expected a string");
    cfg.scenario = doc["scenario"].get<std::string>();
  }

  if (doc.contains("initial_bloch") && doc.contains("initial_matrix")) {
    field_error("initial_matrix", "give either initial_bloch or initial_matrix, not both");
  }
  if (doc.contains("initial_matrix")) {
    cfg.initial_matrix = get_matrix(doc, "initial_matrix");
  } else if (doc.contains("initial_bloch")) {
    cfg.initial_bloch = get_vec3(doc, "initial_bloch");
  } else {
    field_error("initial_bloch", "an initial state is required");
  }

  if (doc.contains("drift_kind")) {
    if (!doc["drift_kind"].is_string()) field_error("drift_kind", "expected a string");
    try {
      cfg.drift.kind = parse_drift_kind(doc["drift_kind"].get<std::string>());
    } catch (const InvalidInput& e) {
      field_error("drift_kind", e.what());
    }
  }
  if (doc.contains("delta")) cfg.drift.delta = get_number(doc, "delta");
  if (doc.contains("systematic_axis")) cfg.drift.systematic_axis = get_vec3(doc, "systematic_axis");
  if (doc.contains("diffusion_sigma")) cfg.drift.diffusion_sigma = get_number(doc, "diffusion_sigma");
  if (doc.contains("mix_weight")) cfg.drift.mix_weight = get_number(doc, "mix_weight");

  if (doc.contains("epsilon")) {
    DecoherenceChannel ch;
    ch.epsilon = get_number(doc, "epsilon");
    ch.dimension = -1;
    if (doc.contains("dimension")) {
      if (!doc["dimension"].is_number_integer()) field_error("dimension", "expected an integer");
      ch.dimension = doc["dimension"].get<int>();
    }
    cfg.decoherence = ch;
  } else if (doc.contains("dimension")) {
    field_error("dimension", "only meaningful together with epsilon");
  }

  if (doc.contains("separations")) {
    const json& s = doc["separations"];
    if (!s.is_array() || s.empty()) field_error("separations", "expected a non-empty array");
    cfg.separations.clear();
    for (const auto& v : s) {
      if (!v.is_number_integer() || v.get<int>() < 1) {
        field_error("separations", "entries must be integers >= 1");
      }
      cfg.separations.push_back(v.get<int>());
    }
    const std::set<int> unique(cfg.separations.begin(), cfg.separations.end());
    if (unique.size() != cfg.separations.size()) field_error("separations", "duplicate entry");
  }

  if (!doc.contains("pairs")) field_error("pairs", "required");
  const json& p = doc["pairs"];
  if (p.is_number_integer()) {
    cfg.pairs.assign(cfg.separations.size(), p.get<std::int64_t>());
  } else if (p.is_array() && p.size() == cfg.separations.size()) {
    for (const auto& v : p) {
      if (!v.is_number_integer()) field_error("pairs", "entries must be integers");
      cfg.pairs.push_back(v.get<std::int64_t>());
    }
  } else {
    field_error("pairs", "expected an integer or one integer per separation");
  }
  for (auto n : cfg.pairs) {
    if (n < 1) field_error("pairs", "must be >= 1");
  }

  if (!doc.contains("seed")) field_error("seed", "required (no wall-clock seeding)");
  if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
    field_error("seed", "expected a non-negative integer");
  }
  if (doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() < 0) {
    field_error("seed", "expected a non-negative integer");
  }
  cfg.seed = doc["seed"].get<std::uint64_t>();

  if (doc.contains("alpha_tol")) {
    cfg.alpha_tol = get_number(doc, "alpha_tol");
    if (!(cfg.alpha_tol > 0.0)) field_error("alpha_tol", "must be > 0");
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) field_error("output", "expected a string");
    cfg.output = doc["output"].get<std::string>();
  }

  // Cross-field validation.
  DensityMatrix rho0 = [&] {
    try {
      return cfg.initial_state();
    } catch (const InvalidInput& e) {
      field_error(cfg.initial_matrix ? "initial_matrix" : "initial_bloch", e.what());
    }
  }();
  if (rho0.dim() != 2) {
    field_error("initial_matrix", "drift simulation needs a qubit (2 x 2) state");
  }
  try {
    cfg.drift.validate();
  } catch (const InvalidInput& e) {
    field_error("drift", e.what());
  }
  if (cfg.decoherence) {
    if (cfg.decoherence->dimension < 0) cfg.decoherence->dimension = rho0.dim();
    if (cfg.decoherence->dimension != rho0.dim()) {
      field_error("dimension", "must equal the state dimension");
    }
    try {
      cfg.decoherence->validate();
    } catch (const InvalidInput& e) {
      field_error("epsilon", e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(fmt::format("{}:{}:{}: JSON syntax error: {}", path, line, col, e.what()));
  }
  return parse_experiment_config(doc);
}

}  // namespace swapdrift::harness
