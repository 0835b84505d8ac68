#pragma once

#include <random>

#include "hetnet/model.hpp"

namespace fixtures {

// Two-tier macro/pico network: 53 and 33 dBm, exponents 3.8 and 3.5,
// Rayleigh fading, 0 dB thresholds, no noise.
inline hetnet::NetworkModel paper_defaults() {
  hetnet::NetworkModel m;
  m.tiers.resize(2);
  m.tiers[0].density = 0.001;
  m.tiers[0].power = hetnet::db_to_linear(53.0);
  m.tiers[0].pathloss_exponent = 3.8;
  m.tiers[1].density = 0.002;
  m.tiers[1].power = hetnet::db_to_linear(33.0);
  m.tiers[1].pathloss_exponent = 3.5;
  return m;
}

inline hetnet::NetworkModel with_thresholds_db(hetnet::NetworkModel m, double db) {
  for (auto& t : m.tiers) t.sinr_threshold = hetnet::db_to_linear(db);
  return m;
}

struct RandomModelOptions {
  std::size_t max_tiers = 3;
  bool equal_exponents = false;
  double min_exponent = 2.5;
  double max_exponent = 5.0;
  bool allow_noise = true;
  double min_threshold_db = -10.0;
  double max_threshold_db = 10.0;
};

inline hetnet::NetworkModel random_model(std::mt19937_64& gen, const RandomModelOptions& opt = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(gen); };
  hetnet::NetworkModel m;
  const auto tiers = 1 + static_cast<std::size_t>(unit(gen) * static_cast<double>(opt.max_tiers));
  const double common_eps = between(opt.min_exponent, opt.max_exponent);
  for (std::size_t k = 0; k < std::min(tiers, opt.max_tiers); ++k) {
    hetnet::TierConfig t;
    t.density = std::pow(10.0, between(-4.0, -2.0));
    t.power = hetnet::db_to_linear(between(20.0, 50.0));
    t.bias = hetnet::db_to_linear(between(-10.0, 10.0));
    t.pathloss_exponent = opt.equal_exponents ? common_eps : between(opt.min_exponent, opt.max_exponent);
    const double pick = unit(gen);
    if (pick < 0.5) t.fading = hetnet::Exponential{between(0.5, 2.0)};
    else if (pick < 0.8) t.fading = hetnet::LogNormal{between(0.0, 10.0), between(-3.0, 3.0)};
    else t.fading = hetnet::Constant{between(0.5, 2.0)};
    t.sinr_threshold = hetnet::db_to_linear(between(opt.min_threshold_db, opt.max_threshold_db));
    m.tiers.push_back(t);
  }
  if (opt.allow_noise && unit(gen) < 0.5) m.noise = std::pow(10.0, between(-6.0, -2.0));
  return m;
}

}  // namespace fixtures
