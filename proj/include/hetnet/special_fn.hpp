#pragma once

// Special functions for the coverage integrals: the gamma function and the
// confluent hypergeometric function 1F1(a; a+1; i*omega) on the imaginary axis.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>

#include "hetnet/errors.hpp"

namespace hetnet {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline double gamma_fn(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("gamma_fn: argument must be finite");
  }
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream os;
    os << "gamma_fn: pole at x = " << x;
    throw DomainError(os.str());
  }
  return std::tgamma(x);
}

struct KummerSettings {
  // |omega| at or below this uses the power series, above it the
  // incomplete-gamma continued fraction.
  double switch_omega = 8.0;
  std::size_t max_terms = 10000;
};

namespace detail {

inline NumericError kummer_failure(const char* branch, double a, double omega,
                                   std::size_t terms) {
  std::ostringstream os;
  os.precision(17);
  os << "1F1(a; a+1; i*omega) " << branch << " did not converge after " << terms
     << " terms (a = " << a << ", eps = " << -2.0 / a << ", omega = " << omega << ")";
  return NumericError(os.str());
}

}  // namespace detail

// Power series sum_n a/(a+n) (i omega)^n / n!, compensated summation.
// Accurate while the largest term stays modest, i.e. |omega| up to ~10.
inline Complex kummer_series(double a, double omega, const KummerSettings& settings = {}) {
  const Complex z(0.0, omega);
  Complex sum(1.0, 0.0);
  Complex carry(0.0, 0.0);
  Complex power(1.0, 0.0);  // z^n / n!
  const double magnitude = std::abs(omega);
  for (std::size_t n = 1; n < settings.max_terms; ++n) {
    power *= z / static_cast<double>(n);
    const Complex term = power * (a / (a + static_cast<double>(n)));
    const Complex y = term - carry;
    const Complex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (static_cast<double>(n) > magnitude &&
        std::abs(term) <= std::numeric_limits<double>::epsilon() * 1e-2 * std::abs(sum)) {
      return sum;
    }
  }
  throw detail::kummer_failure("series", a, omega, settings.max_terms);
}

// 1F1(a; a+1; z) = Gamma(a+1) (-z)^(-a) - a e^z h(a, -z), where
// Gamma(a, x) = e^(-x) x^a h(a, x) and h is Legendre's continued fraction,
// evaluated with the modified Lentz method. Principal branch for (-z)^(-a).
inline Complex kummer_large_argument(double a, double omega,
                                     const KummerSettings& settings = {}) {
  const Complex z(0.0, omega);
  const Complex x = -z;
  constexpr double tiny = 1e-300;
  constexpr double eps = 4.0 * std::numeric_limits<double>::epsilon();

  Complex b = x + 1.0 - a;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  bool converged = false;
  for (std::size_t i = 1; i < settings.max_terms; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw detail::kummer_failure("continued fraction", a, omega, settings.max_terms);
  }
  return gamma_fn(a + 1.0) * std::pow(x, -a) - a * std::exp(z) * h;
}

// 1F1(-2/eps; 1-2/eps; i*omega) for a path-loss exponent eps > 2.
inline Complex kummer_1f1_special(double eps, double omega,
                                  const KummerSettings& settings = {}) {
  if (!(eps > 2.0) || !std::isfinite(eps)) {
    throw DomainError("kummer_1f1_special: path-loss exponent must be finite and exceed 2");
  }
  if (!std::isfinite(omega)) {
    throw DomainError("kummer_1f1_special: omega must be finite");
  }
  // Real coefficients: the lower half of the axis is the mirror image.
  if (omega < 0.0) return std::conj(kummer_1f1_special(eps, -omega, settings));

  const double a = -2.0 / eps;
  const Complex value = omega <= settings.switch_omega
                            ? kummer_series(a, omega, settings)
                            : kummer_large_argument(a, omega, settings);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw detail::kummer_failure("evaluation (non-finite result)", a, omega, 0);
  }
  return value;
}

}  // namespace hetnet
