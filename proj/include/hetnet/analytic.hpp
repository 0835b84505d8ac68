#pragma once

// Analytic coverage engine for the K-tier network.
//
// The K-tier SINR has the same law as that of a single-tier network on the
// half-line whose points form a Poisson process with cumulative measure
//   Lambda([0, r]) = sum_l a_l r^(m_l),
//   a_l = lambda_l pi (P_l B_l)^(m_l) E[Psi_l^(m_l)],  m_l = 2 / eps_l,
// where a point at r receives power 1/r. Every quantity below is expressed
// in those coordinates.
//
// For the tier-k integrals we use the normalised variable s = a_k r^(m_k),
// under which the joint law of (nearest point, serving tier) becomes
//   P(R1 in dr, I = k) = exp(-sum_l c_l s^(p_l)) ds,
//   c_l = a_l / a_k^(p_l),  p_l = m_l / m_k  (so c_k = p_k = 1).
// Conditioning on R1 and averaging the interference characteristic function
// gives the transform of the inverse SINR restricted to {I = k}:
//   J_k(w) = int_0^inf exp(-sum_l c_l s^(p_l) M_l(w) + i w eta (s/a_k)^(1/m_k)) ds,
//   M_l(w) = 1F1(-m_l; 1-m_l; i w),
// and coverage is recovered by Fourier inversion.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hetnet/errors.hpp"
#include "hetnet/model.hpp"
#include "hetnet/quadrature.hpp"
#include "hetnet/special_fn.hpp"

namespace hetnet {

struct AnalyticOptions {
  double tolerance = 1e-6;          // absolute, on probabilities
  double initial_omega_max = 200.0;
  double omega_limit = 200.0 * 1048576.0;
  double exponent_cutoff = 50.0;    // exp(-50) is negligible in double precision
  std::size_t max_intervals = 200000;
  // With noise, integrate the inner transform along a ray in the complex
  // plane instead of the real axis (same value, no noise oscillation).
  bool rotate_noise_contour = true;
  KummerSettings kummer;
};

struct EquivalentDensity {
  std::vector<double> coefficient;  // a_l
  std::vector<double> exponent;     // m_l

  std::size_t size() const { return coefficient.size(); }

  double cumulative(std::size_t l, double r) const {
    return coefficient[l] * std::pow(r, exponent[l]);
  }
  double cumulative(double r) const {
    double sum = 0.0;
    for (std::size_t l = 0; l < size(); ++l) sum += cumulative(l, r);
    return sum;
  }
  // d Lambda / dr
  double intensity(double r) const {
    double sum = 0.0;
    for (std::size_t l = 0; l < size(); ++l) {
      sum += coefficient[l] * exponent[l] * std::pow(r, exponent[l] - 1.0);
    }
    return sum;
  }
};

struct TierProbabilities {
  std::vector<double> probs;
};

enum class CoverageMethod { analytic_general, analytic_closed_form, monte_carlo };

inline std::string to_string(CoverageMethod method) {
  switch (method) {
    case CoverageMethod::analytic_general: return "analytic";
    case CoverageMethod::analytic_closed_form: return "closed-form";
    case CoverageMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

struct CoverageResult {
  double value = 0.0;
  CoverageMethod method = CoverageMethod::analytic_general;
  double error_estimate = 0.0;
  std::vector<double> per_tier;
};

inline EquivalentDensity equivalent_density(const NetworkModel& model) {
  require_valid(model);
  EquivalentDensity out;
  for (const auto& t : model.tiers) {
    const double m = t.fading_exponent();
    out.coefficient.push_back(t.density * kPi * std::pow(t.power * t.bias, m) *
                              fractional_moment(t.fading, m));
    out.exponent.push_back(m);
  }
  return out;
}

namespace detail {

inline void check_tier(const NetworkModel& model, std::size_t k) {
  if (k >= model.size()) {
    std::ostringstream os;
    os << "tier index " << k << " out of range for a " << model.size() << "-tier model";
    throw DomainError(os.str());
  }
}

// Tier-k integrand data in the normalised variable s.
struct TierFrame {
  std::size_t tier = 0;
  std::vector<double> scale;  // c_l
  std::vector<double> power;  // p_l
  double noise_scale = 0.0;   // eta / a_k^(1/m_k)
  double noise_power = 1.0;   // 1 / m_k
  double substitution = 1.0;  // s = u^q tames s^(p) cusps at the origin when p < 1
};

inline TierFrame make_frame(const EquivalentDensity& density, double noise, std::size_t k) {
  TierFrame f;
  f.tier = k;
  const double log_ak = std::log(density.coefficient[k]);
  const double mk = density.exponent[k];
  double min_power = 1.0;
  for (std::size_t l = 0; l < density.size(); ++l) {
    if (l == k) {
      f.scale.push_back(1.0);
      f.power.push_back(1.0);
      continue;
    }
    const double p = density.exponent[l] / mk;
    f.power.push_back(p);
    f.scale.push_back(std::exp(std::log(density.coefficient[l]) - p * log_ak));
    min_power = std::min(min_power, p);
  }
  f.noise_power = 1.0 / mk;
  f.noise_scale = noise > 0.0 ? noise * std::exp(-log_ak / mk) : 0.0;
  f.substitution = 1.0 / min_power;
  return f;
}

// J_k(w) given M_l(w) for every tier l.
//
// The integrand is analytic in s off the origin. When noise is present and
// w > 0 the path is turned to s = rho e^(i theta), theta = pi m_k / 2: the
// noise factor becomes the pure decay exp(-w eta' rho^(1/m_k)), and since
// arg M_l lies in [-pi m_l / 2, 0] every interference term keeps a positive
// real part. On the real axis the noise phase can oscillate millions of
// times before the integrand decays.
inline QuadratureResult<Complex> tier_transform(const TierFrame& f,
                                                const std::vector<Complex>& kummer,
                                                double omega, double abs_tol,
                                                const AnalyticOptions& opts) {
  const double noise_phase = omega * f.noise_scale;
  const bool rotate = opts.rotate_noise_contour && noise_phase > 0.0;
  const double theta = rotate ? 0.5 * kPi / f.noise_power : 0.0;

  // Interference coefficients along the path, with the rotation folded in.
  std::vector<Complex> coef(kummer.size());
  double rho_max = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < kummer.size(); ++l) {
    coef[l] = f.scale[l] * kummer[l] * std::exp(Complex(0.0, f.power[l] * theta));
    const double re = coef[l].real();
    if (!(re >= 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "negative real part in the interference exponent (tier " << l + 1
         << ", omega = " << omega << ", Re = " << re << ")";
      throw NumericError(os.str());
    }
    if (re > 0.0) rho_max = std::min(rho_max, std::pow(opts.exponent_cutoff / re, 1.0 / f.power[l]));
  }
  const Complex noise_coef =
      Complex(0.0, noise_phase) * std::exp(Complex(0.0, f.noise_power * theta));
  if (rotate && -noise_coef.real() > 0.0) {
    rho_max = std::min(rho_max, std::pow(opts.exponent_cutoff / -noise_coef.real(), 1.0 / f.noise_power));
  }
  if (!std::isfinite(rho_max)) throw NumericError("tier transform: unbounded integration range");

  const double q = f.substitution;
  const double u_max = std::pow(rho_max, 1.0 / q);
  const Complex direction = std::exp(Complex(0.0, theta));
  auto integrand = [&](double u) -> Complex {
    const double log_u = std::log(u);
    const double log_rho = q * log_u;
    Complex exponent(0.0, 0.0);
    for (std::size_t l = 0; l < coef.size(); ++l) exponent -= std::exp(f.power[l] * log_rho) * coef[l];
    if (noise_phase != 0.0) exponent += noise_coef * std::exp(f.noise_power * log_rho);
    const double jacobian = q == 1.0 ? 1.0 : q * std::exp((q - 1.0) * log_u);
    return std::exp(exponent) * jacobian;
  };
  QuadratureSettings qs;
  qs.abs_tol = abs_tol;
  qs.max_intervals = 4000;
  auto result = integrate_gk15<Complex>(integrand, 0.0, u_max, qs);
  if (!result.converged && result.error > 100.0 * abs_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "tier transform quadrature did not converge (tier " << f.tier + 1 << ", omega = "
       << omega << ", error = " << result.error << ")";
    throw NumericError(os.str());
  }
  result.value *= direction;
  return result;
}

inline double frame_mass(const TierFrame& f, std::size_t tiers, double abs_tol,
                         const AnalyticOptions& opts) {
  const std::vector<Complex> ones(tiers, Complex(1.0, 0.0));
  return tier_transform(f, ones, 0.0, abs_tol, opts).value.real();
}

// 1F1 values for every tier at one node, computed once per distinct exponent.
class KummerCache {
 public:
  KummerCache(const NetworkModel& model, const KummerSettings& settings)
      : settings_(settings) {
    for (const auto& t : model.tiers) {
      const auto it = std::find(exponents_.begin(), exponents_.end(), t.pathloss_exponent);
      index_.push_back(static_cast<std::size_t>(it - exponents_.begin()));
      if (it == exponents_.end()) exponents_.push_back(t.pathloss_exponent);
    }
    distinct_.resize(exponents_.size());
    values_.resize(index_.size());
  }

  const std::vector<Complex>& at(double omega) {
    for (std::size_t e = 0; e < exponents_.size(); ++e) {
      distinct_[e] = kummer_1f1_special(exponents_[e], omega, settings_);
    }
    for (std::size_t l = 0; l < index_.size(); ++l) values_[l] = distinct_[index_[l]];
    return values_;
  }

 private:
  KummerSettings settings_;
  std::vector<double> exponents_;
  std::vector<std::size_t> index_;
  std::vector<Complex> distinct_;
  std::vector<Complex> values_;
};

struct InversionResult {
  double value = 0.0;
  double error = 0.0;
  double omega_max = 0.0;
};

// P(X < 1/beta, I = k) = mass/2 - (1/pi) int_0^inf Im(e^(-i w/beta) J(w)) / w dw
// for the sub-characteristic function J of the inverse SINR X on {I = k}.
// The oscillatory tail beyond Omega is closed with one integration by parts;
// Omega doubles until the remainder of that expansion is below tolerance.
template <class Transform>
InversionResult invert_transform(Transform&& transform, double mass, double beta,
                                 double m_min, double m_max, const AnalyticOptions& opts) {
  const double c = 1.0 / beta;
  const double period = 2.0 * kPi * std::min(beta, 1.0);
  constexpr double omega_floor = 1e-6;  // removable singularity at w = 0

  auto integrand = [&](double omega) -> double {
    const double w = std::max(omega, omega_floor);
    const Complex phase = std::exp(Complex(0.0, -w * c));
    return (phase * transform(w)).imag() / w;
  };

  QuadratureSettings qs;
  qs.abs_tol = 0.125 * opts.tolerance * kPi;
  qs.max_intervals = opts.max_intervals;

  auto segment = [&](double lo, double hi) {
    std::vector<double> breaks;
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / period));
    for (std::size_t i = 0; i <= panels; ++i) {
      breaks.push_back(std::min(hi, lo + static_cast<double>(i) * period));
    }
    auto r = integrate_gk15<double>(integrand, std::span<const double>(breaks), qs);
    if (!r.converged) {
      std::ostringstream os;
      os.precision(17);
      os << "coverage inversion quadrature did not converge on [" << lo << ", " << hi
         << "] (beta = " << beta << ", error = " << r.error << ")";
      throw NumericError(os.str());
    }
    return r;
  };

  double omega_max = opts.initial_omega_max;
  auto first = segment(0.0, omega_max);
  double integral = first.value;
  double error = first.error;
  for (;;) {
    const Complex j = transform(omega_max);
    const double magnitude = std::abs(j);
    const double remainder =
        magnitude * (beta * beta * (1.0 + m_max) / (omega_max * omega_max) +
                     std::pow(omega_max, -1.0 - m_min));
    if (remainder <= 0.25 * opts.tolerance * kPi) {
      const Complex boundary = std::exp(Complex(0.0, -omega_max * c)) * j / omega_max;
      const double tail = (boundary / Complex(0.0, c)).imag();
      InversionResult out;
      out.value = 0.5 * mass - (integral + tail) / kPi;
      out.error = (error + remainder) / kPi;
      out.omega_max = omega_max;
      return out;
    }
    if (2.0 * omega_max > opts.omega_limit) {
      std::ostringstream os;
      os << "coverage inversion: tail did not settle below tolerance by omega = " << omega_max;
      throw NumericError(os.str());
    }
    auto next = segment(omega_max, 2.0 * omega_max);
    integral += next.value;
    error += next.error;
    omega_max *= 2.0;
  }
}

inline double inner_tolerance(const AnalyticOptions& opts) { return 1e-4 * opts.tolerance; }

}  // namespace detail

// P(no tier-k point of the equivalent process in [0, r]).
inline double nearest_tier_distance_tail(const NetworkModel& model, std::size_t k, double r) {
  detail::check_tier(model, k);
  if (!(r >= 0.0)) throw DomainError("nearest_tier_distance_tail: r must be non-negative");
  const auto density = equivalent_density(model);
  return std::exp(-density.cumulative(k, r));
}

// P(I = k) by quadrature for every tier, whatever the exponents.
inline TierProbabilities tier_probabilities_quadrature(const NetworkModel& model,
                                                       const AnalyticOptions& opts = {}) {
  const auto density = equivalent_density(model);
  TierProbabilities out;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto frame = detail::make_frame(density, 0.0, k);
    out.probs.push_back(detail::frame_mass(frame, model.size(), 1e-10, opts));
  }
  return out;
}

// Closed-form ratio when every tier has the same path-loss exponent.
inline TierProbabilities tier_probabilities_equal_exponent(const NetworkModel& model) {
  if (!model.equal_exponents()) {
    throw DomainError("tier_probabilities_equal_exponent: path-loss exponents differ");
  }
  const auto density = equivalent_density(model);
  double total = 0.0;
  for (double a : density.coefficient) total += a;
  TierProbabilities out;
  for (double a : density.coefficient) out.probs.push_back(a / total);
  return out;
}

inline TierProbabilities tier_probabilities(const NetworkModel& model,
                                            const AnalyticOptions& opts = {}) {
  return model.equal_exponents() ? tier_probabilities_equal_exponent(model)
                                 : tier_probabilities_quadrature(model, opts);
}

inline double serving_distance_pdf(const EquivalentDensity& density,
                                   const TierProbabilities& probs, std::size_t k, double r) {
  if (k >= density.size()) throw DomainError("serving_distance_pdf: tier index out of range");
  if (!(r >= 0.0)) throw DomainError("serving_distance_pdf: r must be non-negative");
  const double p = probs.probs[k];
  if (!(p > std::numeric_limits<double>::min())) {
    throw NumericError("serving_distance_pdf: tier probability underflows");
  }
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  const double a = density.coefficient[k];
  const double m = density.exponent[k];
  return a * m * std::pow(r, m - 1.0) * std::exp(-density.cumulative(r)) / p;
}

// Density of the serving point's distance in the equivalent process, given
// the serving tier is k.
inline double serving_distance_pdf(const NetworkModel& model, std::size_t k, double r,
                                   const AnalyticOptions& opts = {}) {
  detail::check_tier(model, k);
  return serving_distance_pdf(equivalent_density(model), tier_probabilities(model, opts), k, r);
}

// Coverage of a single-tier network with exponent eps and threshold beta
// when noise is absent, by numerical inversion (valid for every beta > 0).
inline CoverageResult single_tier_coverage_quadrature(double eps, double beta,
                                                      const AnalyticOptions& opts = {}) {
  if (!(eps > 2.0)) throw DomainError("single_tier_coverage: path-loss exponent must exceed 2");
  if (!(beta > 0.0)) throw DomainError("single_tier_coverage: threshold must be positive");
  const double m = 2.0 / eps;
  auto transform = [&](double omega) {
    return Complex(1.0, 0.0) / kummer_1f1_special(eps, omega, opts.kummer);
  };
  const auto inv = detail::invert_transform(transform, 1.0, beta, m, m, opts);
  return {inv.value, CoverageMethod::analytic_closed_form, inv.error, {inv.value}};
}

// sin(2 pi/eps) / (2 pi/eps) * beta^(-2/eps), valid for beta >= 1.
inline double single_tier_coverage_closed_form(double eps, double beta) {
  if (!(eps > 2.0)) throw DomainError("single_tier_coverage: path-loss exponent must exceed 2");
  if (!(beta >= 1.0)) throw DomainError("single_tier_coverage: closed form needs beta >= 1");
  const double x = 2.0 * kPi / eps;
  return std::sin(x) / x * std::pow(beta, -2.0 / eps);
}

// Coverage of one tier-free single-tier network: closed form where it holds,
// quadrature below 0 dB.
inline CoverageResult single_tier_coverage(double eps, double beta,
                                           const AnalyticOptions& opts = {}) {
  if (beta >= 1.0) {
    const double v = single_tier_coverage_closed_form(eps, beta);
    return {v, CoverageMethod::analytic_closed_form, 0.0, {v}};
  }
  return single_tier_coverage_quadrature(eps, beta, opts);
}

// Interference-limited, equal-exponent case. Empty when not applicable.
inline std::optional<CoverageResult> coverage_closed_form(const NetworkModel& model,
                                                          const AnalyticOptions& opts = {}) {
  require_valid(model);
  if (model.noise != 0.0 || !model.equal_exponents()) return std::nullopt;
  const auto weights = tier_probabilities_equal_exponent(model);
  const double eps = model.tiers.front().pathloss_exponent;
  CoverageResult out;
  out.method = CoverageMethod::analytic_closed_form;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto gamma = single_tier_coverage(eps, model.tiers[k].sinr_threshold, opts);
    const double part = weights.probs[k] * gamma.value;
    out.per_tier.push_back(part);
    out.value += part;
    out.error_estimate += weights.probs[k] * gamma.error_estimate;
  }
  return out;
}

// Coverage by numerical inversion of the tier-resolved transform; valid for
// any noise level, exponents and thresholds.
inline CoverageResult coverage_probability(const NetworkModel& model,
                                           const AnalyticOptions& opts = {}) {
  require_valid(model);
  const auto density = equivalent_density(model);
  const auto m_range = std::minmax_element(density.exponent.begin(), density.exponent.end());
  const double inner_tol = detail::inner_tolerance(opts);

  CoverageResult out;
  out.method = CoverageMethod::analytic_general;
  detail::KummerCache kummer(model, opts.kummer);
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto frame = detail::make_frame(density, model.noise, k);
    const double mass = detail::frame_mass(frame, model.size(), inner_tol, opts);
    auto transform = [&](double omega) {
      return detail::tier_transform(frame, kummer.at(omega), omega, inner_tol, opts).value;
    };
    const auto inv = detail::invert_transform(transform, mass, model.tiers[k].sinr_threshold,
                                              *m_range.first, *m_range.second, opts);
    out.per_tier.push_back(inv.value);
    out.value += inv.value;
    out.error_estimate += inv.error;
  }
  const double slack = opts.tolerance + out.error_estimate;
  if (out.value < -slack || out.value > 1.0 + slack) {
    std::ostringstream os;
    os.precision(17);
    os << "coverage_probability: result " << out.value << " outside [0, 1] beyond tolerance";
    throw NumericError(os.str());
  }
  return out;
}

// Closed form when it applies, general inversion otherwise.
inline CoverageResult coverage_auto(const NetworkModel& model, const AnalyticOptions& opts = {}) {
  if (auto closed = coverage_closed_form(model, opts)) return *closed;
  return coverage_probability(model, opts);
}

}  // namespace hetnet
