#pragma once

// K-tier network scenario: tier parameters, fading laws and their
// fractional moments. Everything here is in linear units (powers in mW,
// densities in BSs per square metre).

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hetnet/errors.hpp"
#include "hetnet/special_fn.hpp"

namespace hetnet {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// Natural-log scale of a power gain whose dB value is normally distributed.
inline constexpr double kNatsPerDb = 0.23025850929940456840;  // ln(10) / 10

struct Exponential {
  double mean = 1.0;
};

struct LogNormal {
  double sigma_db = 0.0;
  double mean_db = 0.0;
};

struct Constant {
  double value = 1.0;
};

using FadingModel = std::variant<Exponential, LogNormal, Constant>;

inline std::string fading_name(const FadingModel& fading) {
  struct Visitor {
    std::string operator()(const Exponential&) const { return "exponential"; }
    std::string operator()(const LogNormal&) const { return "lognormal"; }
    std::string operator()(const Constant&) const { return "constant"; }
  };
  return std::visit(Visitor{}, fading);
}

// Empty when the parameters are admissible.
inline std::optional<std::string> fading_violation(const FadingModel& fading) {
  struct Visitor {
    std::optional<std::string> operator()(const Exponential& f) const {
      if (!(f.mean > 0.0) || !std::isfinite(f.mean)) return "exponential mean must be positive";
      return std::nullopt;
    }
    std::optional<std::string> operator()(const LogNormal& f) const {
      if (!(f.sigma_db >= 0.0) || !std::isfinite(f.sigma_db)) {
        return "lognormal sigma_db must be non-negative";
      }
      if (!std::isfinite(f.mean_db)) return "lognormal mean_db must be finite";
      return std::nullopt;
    }
    std::optional<std::string> operator()(const Constant& f) const {
      if (!(f.value > 0.0) || !std::isfinite(f.value)) return "constant gain must be positive";
      return std::nullopt;
    }
  };
  return std::visit(Visitor{}, fading);
}

// E[Psi^m] for 0 < m < 1.
inline double fractional_moment(const FadingModel& fading, double m) {
  if (!(m > 0.0 && m < 1.0)) {
    std::ostringstream os;
    os << "fractional_moment: exponent " << m << " outside (0, 1)";
    throw DomainError(os.str());
  }
  if (auto violation = fading_violation(fading)) {
    throw ValidationError("fractional_moment: " + *violation);
  }
  struct Visitor {
    double m;
    double operator()(const Exponential& f) const {
      return std::pow(f.mean, m) * gamma_fn(1.0 + m);
    }
    double operator()(const LogNormal& f) const {
      const double mu = f.mean_db * kNatsPerDb;
      const double sigma = f.sigma_db * kNatsPerDb;
      return std::exp(m * mu + 0.5 * m * m * sigma * sigma);
    }
    double operator()(const Constant& f) const { return std::pow(f.value, m); }
  };
  return std::visit(Visitor{m}, fading);
}

// Exponential law whose m-th fractional moment equals `target` exactly in
// double precision, so that analytic results computed from either law are
// bitwise identical.
inline Exponential matched_exponential(double target, double m) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw DomainError("matched_exponential: target moment must be positive");
  }
  const double g = gamma_fn(1.0 + m);
  double mean = std::pow(target / g, 1.0 / m);
  auto moment = [&](double mu) { return fractional_moment(Exponential{mu}, m); };
  // The moment is increasing in the mean; walk ulp by ulp to an exact match.
  for (int step = 0; step < 64 && moment(mean) != target; ++step) {
    mean = std::nextafter(mean, moment(mean) < target ? std::numeric_limits<double>::infinity() : 0.0);
  }
  if (moment(mean) != target) {
    throw NumericError("matched_exponential: no exponential mean reproduces the target moment exactly");
  }
  return Exponential{mean};
}

// Products of rounded values skip some doubles, so not every target moment
// has an exactly matching exponential. Moves the log-normal mean by single
// ulps until one does; returns both laws.
struct MatchedFading {
  LogNormal lognormal;
  Exponential exponential;
};

inline MatchedFading matched_lognormal_exponential(LogNormal lognormal, double m) {
  for (int step = 0; step < 4096; ++step) {
    try {
      return {lognormal, matched_exponential(fractional_moment(lognormal, m), m)};
    } catch (const NumericError&) {
      lognormal.mean_db = std::nextafter(lognormal.mean_db, std::numeric_limits<double>::infinity());
    }
  }
  throw NumericError("matched_lognormal_exponential: no exactly matched pair found");
}

struct TierConfig {
  double density = 0.0;            // BSs per unit area
  double power = 0.0;              // linear transmit power
  double bias = 1.0;               // linear bias factor
  double pathloss_exponent = 4.0;  // > 2
  FadingModel fading = Exponential{1.0};
  double sinr_threshold = 1.0;     // linear

  double fading_exponent() const { return 2.0 / pathloss_exponent; }
};

struct NetworkModel {
  std::vector<TierConfig> tiers;
  double noise = 0.0;  // linear background noise power

  std::size_t size() const { return tiers.size(); }

  bool equal_exponents() const {
    for (const auto& tier : tiers) {
      if (tier.pathloss_exponent != tiers.front().pathloss_exponent) return false;
    }
    return true;
  }
};

struct Violation {
  std::optional<std::size_t> tier;  // zero-based; empty for model-level problems
  std::string field;
  std::string message;

  std::string describe() const {
    std::ostringstream os;
    if (tier) os << "tier " << (*tier + 1) << ": ";
    os << field << ": " << message;
    return os.str();
  }
};

inline std::vector<Violation> validate(const NetworkModel& model) {
  std::vector<Violation> out;
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (model.tiers.empty()) out.push_back({std::nullopt, "tiers", "at least one tier is required"});
  if (!(model.noise >= 0.0) || !std::isfinite(model.noise)) {
    out.push_back({std::nullopt, "noise", "noise power must be finite and non-negative"});
  }
  for (std::size_t k = 0; k < model.tiers.size(); ++k) {
    const auto& t = model.tiers[k];
    if (!positive(t.density)) out.push_back({k, "density", "density must be positive"});
    if (!positive(t.power)) out.push_back({k, "power", "power must be positive"});
    if (!positive(t.bias)) out.push_back({k, "bias", "bias must be positive"});
    if (!(t.pathloss_exponent > 2.0) || !std::isfinite(t.pathloss_exponent)) {
      out.push_back({k, "pathloss_exponent", "pathloss_exponent must exceed 2"});
    }
    if (!positive(t.sinr_threshold)) {
      out.push_back({k, "sinr_threshold", "sinr_threshold must be positive"});
    }
    if (auto violation = fading_violation(t.fading)) out.push_back({k, "fading", *violation});
  }
  return out;
}

inline void require_valid(const NetworkModel& model) {
  const auto violations = validate(model);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "invalid network model:";
  for (const auto& v : violations) os << "\n  " << v.describe();
  throw ValidationError(os.str());
}

}  // namespace hetnet
