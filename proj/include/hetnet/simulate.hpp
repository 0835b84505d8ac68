#pragma once

// Monte-Carlo oracles for the K-tier network:
//  - simulate_2d drops Poisson BSs on a disk around the MS and applies the
//    max-biased-power association rule directly;
//  - simulate_equivalent_1d samples the equivalent half-line Poisson process
//    by inversion and evaluates SINR there.
// Both are deterministic for a given seed whatever the thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/model.hpp"
#include "hetnet/rng.hpp"

namespace hetnet {

inline std::vector<double> default_ccdf_thresholds() {
  std::vector<double> out;
  for (int db = -20; db <= 30; ++db) out.push_back(db_to_linear(db));
  return out;
}

struct SimulationConfig {
  std::size_t trials = 50000;
  std::optional<double> boundary_radius;  // 2-D only; derived from the model when empty
  std::uint64_t seed = 1;
  std::size_t max_points = 2000;  // 1-D only, after merging tiers
  double boundary_power_fraction = 1e-3;  // 2-D: see default_boundary_radius
  unsigned threads = 1;
  bool keep_records = false;
  std::vector<double> ccdf_thresholds = default_ccdf_thresholds();
};

inline constexpr std::size_t kNoTier = std::numeric_limits<std::size_t>::max();

struct TrialRecord {
  double sinr = 0.0;
  std::size_t tier = kNoTier;  // zero-based serving tier; kNoTier when no BS was dropped
  bool covered = false;
};

struct SimulationEstimate {
  std::size_t trials = 0;
  double coverage = 0.0;
  double coverage_stderr = 0.0;
  std::vector<std::size_t> tier_counts;
  std::vector<std::size_t> covered_counts;
  std::size_t empty_trials = 0;
  std::vector<std::pair<double, double>> ccdf;
  std::vector<TrialRecord> records;  // only with keep_records
  double boundary_radius = 0.0;      // 2-D
  double tail_interference = 0.0;    // 1-D: mean neglected / sampled interference
  std::string rng = rng_description();
  std::vector<std::string> warnings;

  double tier_frequency(std::size_t k) const {
    return static_cast<double>(tier_counts[k]) / static_cast<double>(trials);
  }
  double tier_frequency_stderr(std::size_t k) const {
    const double p = tier_frequency(k);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }

  CoverageResult coverage_result() const {
    CoverageResult r;
    r.value = coverage;
    r.method = CoverageMethod::monte_carlo;
    r.error_estimate = coverage_stderr;
    for (auto c : covered_counts) {
      r.per_tier.push_back(static_cast<double>(c) / static_cast<double>(trials));
    }
    return r;
  }
};

inline void require_valid(const SimulationConfig& cfg) {
  std::ostringstream os;
  if (cfg.trials < 1) os << "\n  trials must be at least 1";
  if (cfg.boundary_radius && !(*cfg.boundary_radius > 0.0 && std::isfinite(*cfg.boundary_radius))) {
    os << "\n  boundary_radius must be positive";
  }
  if (cfg.max_points < 2) os << "\n  max_points must be at least 2";
  if (!(cfg.boundary_power_fraction > 0.0 && cfg.boundary_power_fraction < 1.0)) {
    os << "\n  boundary_power_fraction must lie in (0, 1)";
  }
  if (!os.str().empty()) throw ValidationError("invalid simulation config:" + os.str());
}

// Fraction of records whose SINR strictly exceeds each threshold.
inline std::vector<std::pair<double, double>> empirical_ccdf(std::span<const TrialRecord> records,
                                                             std::span<const double> thresholds) {
  if (records.empty()) throw DomainError("empirical_ccdf: no records");
  std::vector<double> sinr;
  sinr.reserve(records.size());
  for (const auto& r : records) sinr.push_back(r.sinr);
  std::sort(sinr.begin(), sinr.end());
  std::vector<std::pair<double, double>> out;
  for (double t : thresholds) {
    const auto above = sinr.end() - std::upper_bound(sinr.begin(), sinr.end(), t);
    out.emplace_back(t, static_cast<double>(above) / static_cast<double>(sinr.size()));
  }
  return out;
}

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline std::vector<double> sinr_samples(std::span<const TrialRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.sinr);
  return out;
}

// Running total and strongest (biased) received power of one trial.
class PowerTally {
 public:
  void add(std::size_t tier, double power) {
    total_ += power;
    if (power > strongest_) {
      strongest_ = power;
      tier_ = tier;
    }
  }

  // SINR = strongest / (total - strongest + noise). No BS and no noise gives
  // SINR 0 (not covered); a lone BS without noise gives +inf.
  TrialRecord finish(const NetworkModel& model) const {
    TrialRecord r;
    if (tier_ == kNoTier) return r;
    r.tier = tier_;
    const double denominator = (total_ - strongest_) + model.noise;
    r.sinr = denominator > 0.0 ? strongest_ / denominator : std::numeric_limits<double>::infinity();
    r.covered = r.sinr > model.tiers[tier_].sinr_threshold;
    return r;
  }

 private:
  double total_ = 0.0;
  double strongest_ = 0.0;
  std::size_t tier_ = kNoTier;
};

struct BaseStation {
  std::size_t tier = 0;
  double distance = 1.0;
  double gain = 1.0;  // fading realisation
};

// SINR at the origin for an explicit BS layout.
inline TrialRecord evaluate_layout(const NetworkModel& model, std::span<const BaseStation> layout) {
  PowerTally tally;
  for (const auto& bs : layout) {
    if (bs.tier >= model.size()) throw DomainError("evaluate_layout: tier index out of range");
    const auto& t = model.tiers[bs.tier];
    tally.add(bs.tier, t.power * t.bias * bs.gain * std::pow(bs.distance, -t.pathloss_exponent));
  }
  return tally.finish(model);
}

namespace detail {

class FadingSampler {
 public:
  explicit FadingSampler(const FadingModel& fading) {
    if (const auto* e = std::get_if<Exponential>(&fading)) {
      kind_ = Kind::exponential;
      scale_ = e->mean;
    } else if (const auto* l = std::get_if<LogNormal>(&fading)) {
      kind_ = Kind::lognormal;
      location_ = l->mean_db * kNatsPerDb;
      scale_ = l->sigma_db * kNatsPerDb;
    } else {
      kind_ = Kind::constant;
      scale_ = std::get<Constant>(fading).value;
    }
  }

  template <class Engine>
  double operator()(Engine& gen) {
    switch (kind_) {
      case Kind::exponential: return scale_ * exponential_(gen);
      case Kind::lognormal: return std::exp(location_ + scale_ * normal_(gen));
      case Kind::constant: return scale_;
    }
    return scale_;
  }

 private:
  enum class Kind { exponential, lognormal, constant };
  Kind kind_ = Kind::constant;
  double location_ = 0.0;
  double scale_ = 1.0;
  std::exponential_distribution<double> exponential_{1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double mean_gain(const FadingModel& fading) {
  if (const auto* e = std::get_if<Exponential>(&fading)) return e->mean;
  if (const auto* l = std::get_if<LogNormal>(&fading)) {
    const double mu = l->mean_db * kNatsPerDb;
    const double sigma = l->sigma_db * kNatsPerDb;
    return std::exp(mu + 0.5 * sigma * sigma);
  }
  return std::get<Constant>(fading).value;
}

// Evaluates fn(trial) for every trial, split into contiguous blocks.
template <class Fn>
std::vector<TrialRecord> run_trials(std::size_t trials, unsigned threads, Fn&& fn) {
  std::vector<TrialRecord> records(trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) records[i] = fn(i);
  };
  if (workers == 1) {
    work(0, trials);
    return records;
  }
  std::vector<std::thread> pool;
  const std::size_t block = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(trials, w * block);
    const std::size_t hi = std::min(trials, lo + block);
    pool.emplace_back(work, lo, hi);
  }
  for (auto& t : pool) t.join();
  return records;
}

inline SimulationEstimate aggregate(const NetworkModel& model, const SimulationConfig& cfg,
                                    std::vector<TrialRecord> records) {
  SimulationEstimate est;
  est.trials = records.size();
  est.tier_counts.assign(model.size(), 0);
  est.covered_counts.assign(model.size(), 0);
  std::size_t covered = 0;
  for (const auto& r : records) {
    if (r.tier == kNoTier) {
      ++est.empty_trials;
      continue;
    }
    ++est.tier_counts[r.tier];
    if (r.covered) {
      ++covered;
      ++est.covered_counts[r.tier];
    }
  }
  const double n = static_cast<double>(est.trials);
  est.coverage = static_cast<double>(covered) / n;
  est.coverage_stderr = std::sqrt(est.coverage * (1.0 - est.coverage) / n);
  est.ccdf = empirical_ccdf(records, cfg.ccdf_thresholds);
  if (cfg.keep_records) est.records = std::move(records);
  return est;
}

}  // namespace detail

// Disk radius beyond which the mean biased power received is below
// `fraction` of the mean power received from beyond the typical nearest-BS
// distance 1/sqrt(pi * sum(lambda)). Falls back to 40/sqrt(min lambda).
inline double default_boundary_radius(const NetworkModel& model, double fraction = 1e-3) {
  require_valid(model);
  double total_density = 0.0;
  double min_density = std::numeric_limits<double>::infinity();
  for (const auto& t : model.tiers) {
    total_density += t.density;
    min_density = std::min(min_density, t.density);
  }
  const double fallback = 40.0 / std::sqrt(min_density);
  const double reference_radius = 1.0 / std::sqrt(kPi * total_density);
  auto far_power = [&](double radius) {
    double sum = 0.0;
    for (const auto& t : model.tiers) {
      const double eps = t.pathloss_exponent;
      sum += t.density * t.power * t.bias * detail::mean_gain(t.fading) * 2.0 * kPi *
             std::pow(radius, 2.0 - eps) / (eps - 2.0);
    }
    return sum;
  };
  const double target = fraction * far_power(reference_radius);
  if (!(target > 0.0) || !std::isfinite(target)) return fallback;
  double lo = std::log(reference_radius);
  double hi = lo + std::log(1e12);
  if (!(far_power(std::exp(hi)) <= target)) return fallback;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (far_power(std::exp(mid)) > target ? lo : hi) = mid;
  }
  return std::exp(hi);
}

// One 2-D trial: Poisson BS counts on the disk, uniform positions, i.i.d.
// fading, association to the strongest biased received power.
template <class Engine>
TrialRecord simulate_2d_trial(const NetworkModel& model, double radius, Engine& gen) {
  PowerTally tally;
  const double area = kPi * radius * radius;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& t = model.tiers[k];
    std::poisson_distribution<long long> count(t.density * area);
    const long long n = count(gen);
    detail::FadingSampler fading(t.fading);
    // Uniform on the disk: squared distance R^2 u with u uniform on (0, 1].
    const double edge_power = t.power * t.bias * std::pow(radius, -t.pathloss_exponent);
    const double half_eps = 0.5 * t.pathloss_exponent;
    for (long long j = 0; j < n; ++j) {
      const double u = 1.0 - uniform(gen);
      const double gain = fading(gen);
      tally.add(k, edge_power * gain * std::exp(-half_eps * std::log(u)));
    }
  }
  return tally.finish(model);
}

inline SimulationEstimate simulate_2d(const NetworkModel& model, const SimulationConfig& cfg) {
  require_valid(model);
  require_valid(cfg);
  const double radius = cfg.boundary_radius ? *cfg.boundary_radius
                                            : default_boundary_radius(model, cfg.boundary_power_fraction);
  auto records = detail::run_trials(cfg.trials, cfg.threads, [&](std::size_t i) {
    auto gen = trial_engine(cfg.seed, i);
    return simulate_2d_trial(model, radius, gen);
  });
  auto est = detail::aggregate(model, cfg, std::move(records));
  est.boundary_radius = radius;
  return est;
}

struct EquivalentPoint {
  double distance = 0.0;
  std::size_t tier = 0;
};

// The first `max_points` points (ascending) of the merged equivalent process.
// Tier l is sampled by inversion: r = (S / a_l)^(1/m_l) for unit-rate
// exponential partial sums S.
template <class Engine>
std::vector<EquivalentPoint> sample_equivalent_points(const EquivalentDensity& density,
                                                      std::size_t max_points, Engine& gen) {
  std::exponential_distribution<double> spacing(1.0);
  const std::size_t K = density.size();
  std::vector<double> partial(K, 0.0);
  std::vector<double> next(K);
  auto advance = [&](std::size_t l) {
    partial[l] += spacing(gen);
    next[l] = std::pow(partial[l] / density.coefficient[l], 1.0 / density.exponent[l]);
  };
  for (std::size_t l = 0; l < K; ++l) advance(l);
  std::vector<EquivalentPoint> out;
  out.reserve(max_points);
  while (out.size() < max_points) {
    const auto l = static_cast<std::size_t>(std::min_element(next.begin(), next.end()) - next.begin());
    out.push_back({next[l], l});
    advance(l);
  }
  return out;
}

// Mean interference contributed by equivalent-process points beyond r.
inline double interference_beyond(const EquivalentDensity& density, double r) {
  double sum = 0.0;
  for (std::size_t l = 0; l < density.size(); ++l) {
    const double m = density.exponent[l];
    sum += density.coefficient[l] * m * std::pow(r, m - 1.0) / (1.0 - m);
  }
  return sum;
}

inline SimulationEstimate simulate_equivalent_1d(const NetworkModel& model,
                                                 const SimulationConfig& cfg) {
  require_valid(model);
  require_valid(cfg);
  const auto density = equivalent_density(model);
  std::vector<double> tail_ratio(cfg.trials, 0.0);
  auto records = detail::run_trials(cfg.trials, cfg.threads, [&](std::size_t i) {
    auto gen = trial_engine(cfg.seed, i);
    const auto points = sample_equivalent_points(density, cfg.max_points, gen);
    double interference = 0.0;
    for (std::size_t j = 1; j < points.size(); ++j) interference += 1.0 / points[j].distance;
    tail_ratio[i] = interference_beyond(density, points.back().distance) / interference;
    TrialRecord r;
    r.tier = points.front().tier;
    r.sinr = (1.0 / points.front().distance) / (interference + model.noise);
    r.covered = r.sinr > model.tiers[r.tier].sinr_threshold;
    return r;
  });
  auto est = detail::aggregate(model, cfg, std::move(records));
  double mean_ratio = 0.0;
  for (double t : tail_ratio) mean_ratio += t;
  est.tail_interference = mean_ratio / static_cast<double>(cfg.trials);
  if (est.tail_interference > 1e-2) {
    std::ostringstream os;
    os << "max_points = " << cfg.max_points << " leaves an estimated "
       << est.tail_interference * 100.0 << "% of the interference unsampled";
    est.warnings.push_back(os.str());
  }
  return est;
}

}  // namespace hetnet
