#pragma once

// Scenario files: one JSON document with "model", "simulation", "analytic"
// and "sweep" sections. Every physical field carries its unit in the key
// (power_dbm / power_mw, sinr_threshold_db / sinr_threshold, ...); values are
// converted to linear units here and nowhere else. Unknown keys are errors.

#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/model.hpp"
#include "hetnet/simulate.hpp"

namespace hetnet {

enum class Simulator { two_d, equivalent_1d };

inline std::string to_string(Simulator s) { return s == Simulator::two_d ? "2d" : "1d"; }

struct SweepSpec {
  enum class Parameter { sinr_threshold, bias, density, pathloss_exponent };

  Parameter parameter = Parameter::sinr_threshold;
  std::optional<std::size_t> tier;  // zero-based; empty sweeps every tier together
  std::vector<double> values;       // as written in the file
  bool values_in_db = false;
  std::vector<CoverageMethod> methods = {CoverageMethod::analytic_general};

  double linear_value(std::size_t i) const {
    return values_in_db ? db_to_linear(values[i]) : values[i];
  }
};

inline std::string to_string(SweepSpec::Parameter p) {
  switch (p) {
    case SweepSpec::Parameter::sinr_threshold: return "sinr_threshold";
    case SweepSpec::Parameter::bias: return "bias";
    case SweepSpec::Parameter::density: return "density";
    case SweepSpec::Parameter::pathloss_exponent: return "pathloss_exponent";
  }
  return "unknown";
}

struct Scenario {
  NetworkModel model;
  SimulationConfig simulation;
  Simulator simulator = Simulator::two_d;
  AnalyticOptions analytic;
  std::optional<SweepSpec> sweep;
};

// Copy of `model` with the swept parameter set to sweep value i.
inline NetworkModel apply_sweep_value(const NetworkModel& model, const SweepSpec& sweep,
                                      std::size_t i) {
  NetworkModel out = model;
  const double v = sweep.linear_value(i);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (sweep.tier && *sweep.tier != k) continue;
    auto& t = out.tiers[k];
    switch (sweep.parameter) {
      case SweepSpec::Parameter::sinr_threshold: t.sinr_threshold = v; break;
      case SweepSpec::Parameter::bias: t.bias = v; break;
      case SweepSpec::Parameter::density: t.density = v; break;
      case SweepSpec::Parameter::pathloss_exponent: t.pathloss_exponent = v; break;
    }
  }
  return out;
}

inline const char* paper_defaults_scenario() {
  return R"({
  "model": {
    "noise_mw": 0,
    "tiers": [
      {"density": 0.001, "power_dbm": 53, "bias_db": 0, "pathloss_exponent": 3.8,
       "fading": {"type": "exponential", "mean": 1}, "sinr_threshold_db": 0},
      {"density": 0.002, "power_dbm": 33, "bias_db": 0, "pathloss_exponent": 3.5,
       "fading": {"type": "exponential", "mean": 1}, "sinr_threshold_db": 0}
    ]
  },
  "simulation": {"trials": 50000, "seed": 1, "simulator": "2d"},
  "analytic": {"tolerance": 1e-6},
  "sweep": {
    "parameter": "sinr_threshold",
    "tier": 1,
    "values_db": [-10, -9, -8, -7, -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                  11, 12, 13, 14, 15, 16, 17, 18, 19, 20],
    "methods": ["analytic", "monte-carlo"]
  }
}
)";
}

namespace detail {

using json = nlohmann::json;

class ScenarioReader {
 public:
  explicit ScenarioReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ValidationError(source_ + ": " + path + ": " + message);
  }

  void only_keys(const json& obj, const std::string& path,
                 std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& item : obj.items()) {
      bool known = false;
      for (auto key : allowed) known = known || item.key() == key;
      if (!known) fail(path, "unknown key \"" + item.key() + "\"");
    }
  }

  double number(const json& obj, const std::string& path, const std::string& key) const {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const json& obj, const std::string& path,
                                        const std::string& key) const {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, path, key);
  }

  double required_number(const json& obj, const std::string& path, const std::string& key) const {
    if (!obj.contains(key)) fail(path, "missing key \"" + key + "\"");
    return number(obj, path, key);
  }

  // Exactly one of `db_key` / `linear_key` (either may be absent when a
  // default is given).
  double unit_pair(const json& obj, const std::string& path, const std::string& db_key,
                   const std::string& linear_key, std::optional<double> fallback = std::nullopt) const {
    const bool has_db = obj.contains(db_key);
    const bool has_linear = obj.contains(linear_key);
    if (has_db && has_linear) {
      fail(path, "give either \"" + db_key + "\" or \"" + linear_key + "\", not both");
    }
    if (has_db) return db_to_linear(number(obj, path, db_key));
    if (has_linear) return number(obj, path, linear_key);
    if (fallback) return *fallback;
    fail(path, "missing \"" + db_key + "\" or \"" + linear_key + "\"");
  }

  std::uint64_t count(const json& obj, const std::string& path, const std::string& key) const {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(path + "." + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  FadingModel fading(const json& obj, const std::string& path) const {
    if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string()) {
      fail(path, "fading needs a string \"type\"");
    }
    const auto type = obj.at("type").get<std::string>();
    if (type == "exponential") {
      only_keys(obj, path, {"type", "mean", "mean_db"});
      return Exponential{unit_pair(obj, path, "mean_db", "mean", 1.0)};
    }
    if (type == "lognormal") {
      only_keys(obj, path, {"type", "sigma_db", "mean_db"});
      return LogNormal{required_number(obj, path, "sigma_db"),
                       optional_number(obj, path, "mean_db").value_or(0.0)};
    }
    if (type == "constant") {
      only_keys(obj, path, {"type", "value", "value_db"});
      return Constant{unit_pair(obj, path, "value_db", "value", 1.0)};
    }
    fail(path + ".type", "unknown fading type \"" + type + "\"");
  }

  TierConfig tier(const json& obj, const std::string& path) const {
    only_keys(obj, path,
              {"density", "power_dbm", "power_mw", "bias_db", "bias", "pathloss_exponent", "fading",
               "sinr_threshold_db", "sinr_threshold"});
    TierConfig t;
    t.density = required_number(obj, path, "density");
    t.power = unit_pair(obj, path, "power_dbm", "power_mw");
    t.bias = unit_pair(obj, path, "bias_db", "bias", 1.0);
    t.pathloss_exponent = required_number(obj, path, "pathloss_exponent");
    if (!obj.contains("fading")) fail(path, "missing key \"fading\"");
    t.fading = fading(obj.at("fading"), path + ".fading");
    t.sinr_threshold = unit_pair(obj, path, "sinr_threshold_db", "sinr_threshold");
    return t;
  }

  NetworkModel model(const json& obj) const {
    only_keys(obj, "model", {"noise_dbm", "noise_mw", "tiers"});
    NetworkModel m;
    m.noise = unit_pair(obj, "model", "noise_dbm", "noise_mw", 0.0);
    if (!obj.contains("tiers") || !obj.at("tiers").is_array()) {
      fail("model", "\"tiers\" must be an array");
    }
    const auto& tiers = obj.at("tiers");
    for (std::size_t k = 0; k < tiers.size(); ++k) {
      m.tiers.push_back(tier(tiers[k], "model.tiers[" + std::to_string(k) + "]"));
    }
    const auto violations = validate(m);
    if (!violations.empty()) {
      std::ostringstream os;
      os << "invalid model:";
      for (const auto& v : violations) os << "\n  " << v.describe();
      throw ValidationError(source_ + ": " + os.str());
    }
    return m;
  }

  void simulation(const json& obj, Scenario& s) const {
    const std::string path = "simulation";
    only_keys(obj, path,
              {"trials", "seed", "boundary_radius", "boundary_power_fraction", "max_points",
               "simulator"});
    auto& cfg = s.simulation;
    if (obj.contains("trials")) cfg.trials = count(obj, path, "trials");
    if (obj.contains("seed")) cfg.seed = count(obj, path, "seed");
    cfg.boundary_radius = optional_number(obj, path, "boundary_radius");
    if (auto f = optional_number(obj, path, "boundary_power_fraction")) {
      cfg.boundary_power_fraction = *f;
    }
    if (obj.contains("max_points")) cfg.max_points = count(obj, path, "max_points");
    if (obj.contains("simulator")) {
      const auto& v = obj.at("simulator");
      const auto name = v.is_string() ? v.get<std::string>() : std::string();
      if (name == "2d") s.simulator = Simulator::two_d;
      else if (name == "1d") s.simulator = Simulator::equivalent_1d;
      else fail(path + ".simulator", "expected \"2d\" or \"1d\"");
    }
    try {
      require_valid(cfg);
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
  }

  void analytic(const json& obj, Scenario& s) const {
    only_keys(obj, "analytic", {"tolerance"});
    if (auto t = optional_number(obj, "analytic", "tolerance")) {
      if (!(*t > 0.0 && *t < 1.0)) fail("analytic.tolerance", "must lie in (0, 1)");
      s.analytic.tolerance = *t;
    }
  }

  SweepSpec sweep(const json& obj, std::size_t tiers) const {
    const std::string path = "sweep";
    only_keys(obj, path, {"parameter", "tier", "values", "values_db", "methods"});
    SweepSpec sw;
    if (!obj.contains("parameter") || !obj.at("parameter").is_string()) {
      fail(path, "missing string \"parameter\"");
    }
    const auto name = obj.at("parameter").get<std::string>();
    if (name == "sinr_threshold") sw.parameter = SweepSpec::Parameter::sinr_threshold;
    else if (name == "bias") sw.parameter = SweepSpec::Parameter::bias;
    else if (name == "density") sw.parameter = SweepSpec::Parameter::density;
    else if (name == "pathloss_exponent") sw.parameter = SweepSpec::Parameter::pathloss_exponent;
    else fail(path + ".parameter", "unknown parameter \"" + name + "\"");

    if (!obj.contains("tier")) fail(path, "missing key \"tier\"");
    const auto& tier = obj.at("tier");
    if (tier.is_string() && tier.get<std::string>() == "all") {
      sw.tier.reset();
    } else if (tier.is_number_integer() && tier.get<long long>() >= 1 &&
               static_cast<std::size_t>(tier.get<long long>()) <= tiers) {
      sw.tier = static_cast<std::size_t>(tier.get<long long>()) - 1;
    } else {
      fail(path + ".tier", "expected \"all\" or a tier number in 1.." + std::to_string(tiers));
    }

    const bool db_allowed = sw.parameter == SweepSpec::Parameter::sinr_threshold ||
                            sw.parameter == SweepSpec::Parameter::bias;
    const bool has_db = obj.contains("values_db");
    const bool has_linear = obj.contains("values");
    if (has_db == has_linear) fail(path, "give exactly one of \"values\" or \"values_db\"");
    if (has_db && !db_allowed) fail(path, "\"values_db\" is only meaningful for sinr_threshold and bias");
    sw.values_in_db = has_db;
    const auto& values = obj.at(has_db ? "values_db" : "values");
    if (!values.is_array()) fail(path, "sweep values must be an array");
    for (const auto& v : values) {
      if (!v.is_number()) fail(path, "sweep values must be numbers");
      sw.values.push_back(v.get<double>());
    }

    if (obj.contains("methods")) {
      const auto& methods = obj.at("methods");
      if (!methods.is_array() || methods.empty()) fail(path + ".methods", "expected a non-empty array");
      sw.methods.clear();
      for (const auto& m : methods) {
        const auto method = m.is_string() ? m.get<std::string>() : std::string();
        if (method == "analytic") sw.methods.push_back(CoverageMethod::analytic_general);
        else if (method == "closed-form") sw.methods.push_back(CoverageMethod::analytic_closed_form);
        else if (method == "monte-carlo") sw.methods.push_back(CoverageMethod::monte_carlo);
        else fail(path + ".methods", "unknown method \"" + method + "\"");
      }
    }
    return sw;
  }

 private:
  std::string source_;
};

}  // namespace detail

inline Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>") {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  const detail::ScenarioReader reader(source);
  reader.only_keys(doc, "<root>", {"model", "simulation", "analytic", "sweep"});
  if (!doc.contains("model")) reader.fail("<root>", "missing key \"model\"");
  Scenario s;
  s.model = reader.model(doc.at("model"));
  if (doc.contains("simulation")) reader.simulation(doc.at("simulation"), s);
  if (doc.contains("analytic")) reader.analytic(doc.at("analytic"), s);
  if (doc.contains("sweep")) s.sweep = reader.sweep(doc.at("sweep"), s.model.size());
  return s;
}

// Reads a scenario file; the name "paper_defaults" resolves to the bundled
// scenario when no such file exists.
inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    if (path == "paper_defaults") return parse_scenario(paper_defaults_scenario(), path);
    throw IoError("cannot open scenario file " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

inline nlohmann::json to_json(const FadingModel& fading) {
  nlohmann::json j;
  j["type"] = fading_name(fading);
  if (const auto* e = std::get_if<Exponential>(&fading)) j["mean"] = e->mean;
  if (const auto* l = std::get_if<LogNormal>(&fading)) {
    j["sigma_db"] = l->sigma_db;
    j["mean_db"] = l->mean_db;
  }
  if (const auto* c = std::get_if<Constant>(&fading)) j["value"] = c->value;
  return j;
}

// Linear-unit echo of a model, itself a valid "model" section.
inline nlohmann::json to_json(const NetworkModel& model) {
  nlohmann::json tiers = nlohmann::json::array();
  for (const auto& t : model.tiers) {
    tiers.push_back({{"density", t.density},
                     {"power_mw", t.power},
                     {"bias", t.bias},
                     {"pathloss_exponent", t.pathloss_exponent},
                     {"fading", to_json(t.fading)},
                     {"sinr_threshold", t.sinr_threshold}});
  }
  return {{"noise_mw", model.noise}, {"tiers", tiers}};
}

}  // namespace hetnet
