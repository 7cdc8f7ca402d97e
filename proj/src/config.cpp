#include <umc/config.hpp>

#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include <umc/unbiased.hpp>

namespace umc {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double require_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config field '" + key + "' must be a number");
  return j.get<double>();
}

}  // namespace

SdeModel ExperimentConfig::build_model() const {
  return model == "gbm" ? SdeModel::gbm() : SdeModel::cir();
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["model"] = model;
  j["scheme"] = to_string(scheme);
  if (functional.kind == PathFunctional::Kind::terminal) {
    j["functional"] = "terminal";
  } else {
    j["functional"] = {{"type", "discounted_call"},
                       {"strike", functional.strike},
                       {"rate", functional.rate}};
  }
  j["gamma"] = gamma;
  j["ire_list"] = ire_list;
  j["meta_reps"] = meta_reps;
  j["n_min"] = n_min;
  j["master_seed"] = master_seed;
  j["estimator"] = estimator == EstimatorKind::unbiased ? "unbiased" : "mlmc";
  if (!output.empty()) j["output"] = output;
  return j.dump();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {
      "model",     "scheme", "functional",  "gamma",     "ire_list",
      "meta_reps", "n_min",  "master_seed", "estimator", "output"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
  }

  ExperimentConfig cfg;

  if (!doc.contains("model")) throw ConfigError("config field 'model' is required");
  cfg.model = doc["model"].get<std::string>();
  if (cfg.model != "gbm" && cfg.model != "cir") {
    throw ConfigError("config field 'model' must be 'gbm' or 'cir'");
  }

  if (!doc.contains("estimator")) throw ConfigError("config field 'estimator' is required");
  const std::string est = doc["estimator"].get<std::string>();
  if (est == "unbiased") {
    cfg.estimator = EstimatorKind::unbiased;
  } else if (est == "mlmc") {
    cfg.estimator = EstimatorKind::mlmc;
  } else {
    throw ConfigError("config field 'estimator' must be 'unbiased' or 'mlmc'");
  }

  if (doc.contains("scheme")) {
    const std::string s = doc["scheme"].get<std::string>();
    if (s == "euler") {
      cfg.scheme = SchemeKind::euler;
    } else if (s == "milstein") {
      cfg.scheme = SchemeKind::milstein;
    } else {
      throw ConfigError("config field 'scheme' must be 'euler' or 'milstein'");
    }
  }

  if (doc.contains("functional")) {
    const json& f = doc["functional"];
    if (f.is_string()) {
      const std::string s = f.get<std::string>();
      if (s == "terminal") {
        cfg.functional.kind = PathFunctional::Kind::terminal;
      } else if (s == "discounted_call") {
        cfg.functional.kind = PathFunctional::Kind::discounted_call;
      } else {
        throw ConfigError("config field 'functional' must be 'terminal' or 'discounted_call'");
      }
    } else if (f.is_object()) {
      for (const auto& [key, value] : f.items()) {
        if (key != "type" && key != "strike" && key != "rate") {
          throw ConfigError("unknown config field 'functional." + key + "'");
        }
      }
      if (!f.contains("type") || f["type"] != "discounted_call") {
        throw ConfigError("config field 'functional.type' must be 'discounted_call'");
      }
      cfg.functional.kind = PathFunctional::Kind::discounted_call;
      if (f.contains("strike")) cfg.functional.strike = require_number(f["strike"], "functional.strike");
      if (f.contains("rate")) cfg.functional.rate = require_number(f["rate"], "functional.rate");
      if (!(cfg.functional.strike > 0.0)) {
        throw ConfigError("config field 'functional.strike' must be positive");
      }
    } else {
      throw ConfigError("config field 'functional' must be a string or an object");
    }
  }

  if (doc.contains("gamma")) {
    cfg.gamma = require_number(doc["gamma"], "gamma");
    if (!(cfg.gamma > 0.0)) throw ConfigError("config field 'gamma' must be positive");
  }

  if (doc.contains("ire_list")) {
    if (!doc["ire_list"].is_array() || doc["ire_list"].empty()) {
      throw ConfigError("config field 'ire_list' must be a non-empty array");
    }
    cfg.ire_list.clear();
    for (const json& v : doc["ire_list"]) {
      const double k = require_number(v, "ire_list");
      if (!(k > 0.0 && k <= 100.0)) {
        throw ConfigError("config field 'ire_list' entries must lie in (0, 100]");
      }
      cfg.ire_list.push_back(k);
    }
  }

  if (doc.contains("meta_reps")) {
    const double m = require_number(doc["meta_reps"], "meta_reps");
    if (m < 2 || m != std::floor(m)) {
      throw ConfigError("config field 'meta_reps' must be an integer >= 2");
    }
    cfg.meta_reps = static_cast<int>(m);
  }

  if (doc.contains("n_min")) {
    const double n = require_number(doc["n_min"], "n_min");
    if (n < 2 || n != std::floor(n)) {
      throw ConfigError("config field 'n_min' must be an integer >= 2");
    }
    cfg.n_min = static_cast<std::uint64_t>(n);
  }

  if (doc.contains("master_seed")) {
    if (!doc["master_seed"].is_number_unsigned()) {
      throw ConfigError("config field 'master_seed' must be a non-negative integer");
    }
    cfg.master_seed = doc["master_seed"].get<std::uint64_t>();
  }

  if (doc.contains("output")) {
    cfg.output = doc["output"].get<std::string>();
    if (cfg.output.empty()) throw ConfigError("config field 'output' must not be empty");
  }

  return cfg;
}

std::string render_csv(const std::vector<TableRow>& rows, const ExperimentConfig& config) {
  if (rows.empty()) throw std::invalid_argument("render_csv: no rows to write");
  std::string out;
  const auto line = [&out](const std::string& s) { out += s + "\n"; };
  line("# seed: " + std::to_string(config.master_seed));
  line("# config_hash: " + config.hash());
  line("# estimator: " + std::string(config.estimator == EstimatorKind::unbiased
                                         ? "unbiased"
                                         : "mlmc"));
  line("# model: " + config.model);
  line("# scheme: " + std::string(to_string(config.scheme)));
  line("# functional: " + std::string(config.functional.kind == PathFunctional::Kind::terminal
                                          ? "terminal"
                                          : "discounted_call"));
  line("# meta_reps: " + std::to_string(config.meta_reps));
  if (config.estimator == EstimatorKind::unbiased) {
    line("# gamma: " + fmt(config.gamma));
    line("# n_min: " + std::to_string(config.n_min));
    line("# expected_work_per_replication: " +
         fmt(LevelDistribution{config.gamma}.expected_work()));
  }
  line("ire_pct,estimate,ci_halfwidth,rmse,work_mean,work_ci_halfwidth");
  for (const TableRow& r : rows) {
    line(fmt(r.ire_pct) + "," + fmt(r.estimate) + "," + fmt(r.ci_halfwidth) + "," +
         fmt(r.rmse) + "," + fmt(r.work_mean) + "," + fmt(r.work_ci_halfwidth));
  }
  return out;
}

void emit_csv(const std::vector<TableRow>& rows, const ExperimentConfig& config,
              const std::string& path) {
  const std::string body = render_csv(rows, config);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
  file << body;
  if (!file.flush()) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

}  // namespace umc
