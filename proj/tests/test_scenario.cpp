#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hetnet/report.hpp"
#include "hetnet/scenario.hpp"

using namespace hetnet;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "test.json");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

json paper_json() { return json::parse(paper_defaults_scenario()); }

// Every object key in the document, as a path of keys and array indices.
void collect_keys(const json& j, std::vector<json::json_pointer>& out, json::json_pointer at = json::json_pointer()) {
  if (j.is_object()) {
    for (const auto& item : j.items()) {
      out.push_back(at / item.key());
      collect_keys(item.value(), out, at / item.key());
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect_keys(j[i], out, at / i);
  }
}

std::set<std::string> vocabulary() {
  return {"model", "simulation", "analytic", "sweep", "noise_dbm", "noise_mw", "tiers", "density",
          "power_dbm", "power_mw", "bias_db", "bias", "pathloss_exponent", "fading",
          "sinr_threshold_db", "sinr_threshold", "type", "mean", "mean_db", "sigma_db", "value",
          "value_db", "trials", "seed", "boundary_radius", "boundary_power_fraction", "max_points",
          "simulator", "tolerance", "parameter", "tier", "values", "values_db", "methods"};
}

}  // namespace

TEST(Scenario, PaperDefaults) {
  const auto s = load_scenario("paper_defaults");
  ASSERT_EQ(s.model.size(), 2u);
  const auto& t1 = s.model.tiers[0];
  const auto& t2 = s.model.tiers[1];
  EXPECT_EQ(t1.density, 0.001);
  EXPECT_EQ(t2.density, 0.002);
  EXPECT_EQ(t1.power, db_to_linear(53.0));
  EXPECT_EQ(t2.power, db_to_linear(33.0));
  EXPECT_EQ(t1.bias, 1.0);
  EXPECT_EQ(t2.bias, 1.0);
  EXPECT_EQ(t1.pathloss_exponent, 3.8);
  EXPECT_EQ(t2.pathloss_exponent, 3.5);
  EXPECT_EQ(std::get<Exponential>(t1.fading).mean, 1.0);
  EXPECT_EQ(std::get<Exponential>(t2.fading).mean, 1.0);
  EXPECT_EQ(t1.sinr_threshold, 1.0);
  EXPECT_EQ(t2.sinr_threshold, 1.0);
  EXPECT_EQ(s.model.noise, 0.0);
  ASSERT_TRUE(s.sweep);
  EXPECT_EQ(s.sweep->values.size(), 31u);
  EXPECT_EQ(s.sweep->tier, std::optional<std::size_t>(0));
  EXPECT_EQ(s.simulation.trials, 50000u);
}

TEST(Scenario, BundledFileMatchesBuiltIn) {
  const auto file = load_scenario(std::string(HETNET_SOURCE_DIR) + "/scenarios/paper_defaults.json");
  const auto builtin = load_scenario("paper_defaults");
  EXPECT_EQ(to_json(file.model), to_json(builtin.model));
}

TEST(Scenario, ExponentTwoNamesTier) {
  auto j = paper_json();
  j["model"]["tiers"][1]["pathloss_exponent"] = 2;
  const auto msg = error_of(j.dump());
  EXPECT_NE(msg.find("tier 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("pathloss_exponent"), std::string::npos) << msg;
}

TEST(Scenario, MisspelledKeyRejected) {
  auto j = paper_json();
  j["model"]["tiers"][1]["fadign"] = j["model"]["tiers"][1]["fading"];
  j["model"]["tiers"][1].erase("fading");
  const auto msg = error_of(j.dump());
  EXPECT_NE(msg.find("fadign"), std::string::npos) << msg;
  EXPECT_NE(msg.find("model.tiers[1]"), std::string::npos) << msg;
}

TEST(Scenario, RandomKeyMutationsRejected) {
  const auto base = paper_json();
  std::vector<json::json_pointer> keys;
  collect_keys(base, keys);
  const auto known = vocabulary();
  const std::string letters = "abcdefghijklmnopqrstuvwxyz_";
  std::mt19937_64 gen(1234);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen); };
  for (int trial = 0; trial < 100; ++trial) {
    const auto ptr = keys[pick(keys.size())];
    const std::string key = ptr.back();
    std::string mutated;
    do {
      mutated = key;
      switch (pick(4)) {
        case 0: mutated.insert(pick(mutated.size() + 1), 1, letters[pick(letters.size())]); break;
        case 1: mutated.erase(pick(mutated.size()), 1); break;
        case 2: mutated[pick(mutated.size())] = letters[pick(letters.size())]; break;
        case 3: {
          const auto i = pick(mutated.size() - 1);
          std::swap(mutated[i], mutated[i + 1]);
          break;
        }
      }
    } while (mutated.empty() || known.count(mutated));
    auto doc = base;
    auto& parent = doc[ptr.parent_pointer()];
    parent[mutated] = parent[key];
    parent.erase(key);
    EXPECT_FALSE(error_of(doc.dump()).empty()) << ptr.to_string() << " -> " << mutated;
  }
}

TEST(Scenario, UnitAmbiguityRejected) {
  auto j = paper_json();
  j["model"]["tiers"][0]["power_mw"] = 1000;
  EXPECT_NE(error_of(j.dump()).find("not both"), std::string::npos);
  j["model"]["tiers"][0].erase("power_mw");
  j["model"]["tiers"][0].erase("power_dbm");
  EXPECT_NE(error_of(j.dump()).find("power_dbm"), std::string::npos);
}

TEST(Scenario, OtherErrors) {
  auto j = paper_json();
  j["model"]["tiers"][0]["fading"] = {{"type", "rician"}};
  EXPECT_FALSE(error_of(j.dump()).empty());

  j = paper_json();
  j["sweep"] = {{"parameter", "density"}, {"tier", 1}, {"values_db", {1, 2}}};
  EXPECT_FALSE(error_of(j.dump()).empty());
  j["sweep"] = {{"parameter", "density"}, {"tier", 3}, {"values", {1e-3}}};
  EXPECT_NE(error_of(j.dump()).find("sweep.tier"), std::string::npos);
  j["sweep"] = {{"parameter", "density"}, {"tier", 1}, {"values", {1e-3}}, {"methods", {"exact"}}};
  EXPECT_FALSE(error_of(j.dump()).empty());

  j = paper_json();
  j["model"]["tiers"][0]["density"] = "0.001";
  EXPECT_NE(error_of(j.dump()).find("expected a number"), std::string::npos);
  j = paper_json();
  j["simulation"]["trials"] = 0;
  EXPECT_FALSE(error_of(j.dump()).empty());
  EXPECT_FALSE(error_of("{\"model\": ").empty());
  EXPECT_FALSE(error_of("{}").empty());
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST(Scenario, FadingForms) {
  auto j = paper_json();
  j["model"]["tiers"][0]["fading"] = {{"type", "lognormal"}, {"sigma_db", 8}};
  j["model"]["tiers"][1]["fading"] = {{"type", "constant"}, {"value_db", 3}};
  const auto s = parse_scenario(j.dump());
  EXPECT_EQ(std::get<LogNormal>(s.model.tiers[0].fading).sigma_db, 8.0);
  EXPECT_EQ(std::get<LogNormal>(s.model.tiers[0].fading).mean_db, 0.0);
  EXPECT_EQ(std::get<Constant>(s.model.tiers[1].fading).value, db_to_linear(3.0));
}

TEST(Scenario, EchoParsesBackToSameModel) {
  auto j = paper_json();
  j["model"]["noise_dbm"] = -90;
  j["model"].erase("noise_mw");
  j["model"]["tiers"][1]["fading"] = {{"type", "lognormal"}, {"sigma_db", 6}, {"mean_db", 1}};
  const auto s = parse_scenario(j.dump());
  const auto again = parse_scenario(json{{"model", to_json(s.model)}}.dump());
  EXPECT_EQ(to_json(again.model).dump(), to_json(s.model).dump());
  EXPECT_EQ(again.model.noise, db_to_linear(-90.0));
}

TEST(Scenario, DecibelAndLinearGiveIdenticalReports) {
  auto db = paper_json();
  db["simulation"] = {{"trials", 400}, {"seed", 3}, {"simulator", "1d"}};
  db["sweep"]["values_db"] = {-5, 0, 5};
  auto linear = db;
  for (auto& t : linear["model"]["tiers"]) {
    t["power_mw"] = db_to_linear(t["power_dbm"].get<double>());
    t.erase("power_dbm");
    t["bias"] = db_to_linear(t["bias_db"].get<double>());
    t.erase("bias_db");
    t["sinr_threshold"] = db_to_linear(t["sinr_threshold_db"].get<double>());
    t.erase("sinr_threshold_db");
  }
  auto report_of = [](const json& doc) {
    const auto s = parse_scenario(doc.dump());
    RunSettings settings;
    settings.simulation = s.simulation;
    settings.simulator = s.simulator;
    auto r = run_sweep(s.model, *s.sweep, settings);
    std::ostringstream os;
    emit_report(r, ReportFormat::csv, os);
    return os.str();
  };
  EXPECT_EQ(report_of(db), report_of(linear));
}
