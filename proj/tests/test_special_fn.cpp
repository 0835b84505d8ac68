#include <cmath>
#include <complex>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "hetnet/special_fn.hpp"

using hetnet::Complex;
using hetnet::gamma_fn;
using hetnet::kummer_1f1_special;

namespace {

using Big = boost::multiprecision::cpp_bin_float_100;

// 1F1(a; a+1; i omega) summed in 100-digit arithmetic; the real and
// imaginary parts collect the even and odd powers of i.
Complex kummer_reference(double a_in, double omega_in) {
  const Big a(a_in), omega(omega_in);
  Big re = 0, im = 0, power = 1;  // omega^n / n!
  for (int n = 0; n < 2000; ++n) {
    if (n > 0) power *= omega / n;
    const Big term = power * a / (a + n);
    switch (n % 4) {
      case 0: re += term; break;
      case 1: im += term; break;
      case 2: re -= term; break;
      case 3: im -= term; break;
    }
    if (n > omega_in + 10 && abs(term) < Big("1e-40")) break;
  }
  return {re.convert_to<double>(), im.convert_to<double>()};
}

double rel_error(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST(Gamma, IntegerAndHalfInteger) {
  EXPECT_NEAR(gamma_fn(1.0), 1.0, 1e-15);
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 24.0 * 1e-15);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(hetnet::kPi), 1e-15);
  EXPECT_NEAR(gamma_fn(-0.5), -2.0 * std::sqrt(hetnet::kPi), 1e-14);
}

TEST(Gamma, MatchesMultiprecision) {
  using Big50 = boost::multiprecision::cpp_bin_float_50;
  for (double x : {1.5263, 0.1, 2.7, 7.3, 1.0 - 2.0 / 3.5}) {
    const double want = boost::math::tgamma(Big50(x)).convert_to<double>();
    EXPECT_NEAR(gamma_fn(x), want, 1e-14 * std::abs(want)) << "x = " << x;
  }
}

TEST(Gamma, Recurrence) {
  for (double x = 0.05; x < 10.0; x += 0.37) {
    EXPECT_NEAR(gamma_fn(x + 1.0), x * gamma_fn(x), 1e-12 * gamma_fn(x + 1.0)) << x;
  }
}

TEST(Gamma, PolesAreDomainErrors) {
  EXPECT_THROW(gamma_fn(0.0), hetnet::DomainError);
  EXPECT_THROW(gamma_fn(-3.0), hetnet::DomainError);
  EXPECT_THROW(gamma_fn(std::nan("")), hetnet::DomainError);
}

TEST(Kummer, UnityAtOrigin) {
  for (double eps : {2.5, 3.0, 4.0, 6.0}) {
    const Complex v = kummer_1f1_special(eps, 0.0);
    EXPECT_DOUBLE_EQ(v.real(), 1.0);
    EXPECT_DOUBLE_EQ(v.imag(), 0.0);
  }
}

TEST(Kummer, SmallArgumentSeries) {
  // a = -1/2: 1 - i omega/(1) ... first terms of the defining series.
  const double omega = 0.1;
  const double a = -0.5;
  Complex want(1.0, 0.0);
  Complex z(0.0, omega), power(1.0, 0.0);
  for (int n = 1; n < 30; ++n) {
    power *= z / static_cast<double>(n);
    want += power * (a / (a + n));
  }
  EXPECT_LT(rel_error(kummer_1f1_special(4.0, omega), want), 1e-15);
}

TEST(Kummer, MatchesHighPrecisionSeries) {
  for (double eps : {2.2, 3.0, 3.5, 3.8, 4.0, 6.0}) {
    for (double omega : {0.5, 3.0, 7.9, 8.1, 12.0, 25.0, 40.0, 80.0}) {
      const Complex want = kummer_reference(-2.0 / eps, omega);
      EXPECT_LT(rel_error(kummer_1f1_special(eps, omega), want), 1e-12)
          << "eps = " << eps << ", omega = " << omega;
    }
  }
}

TEST(Kummer, ConjugateSymmetry) {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> eps_dist(2.05, 8.0), omega_dist(0.0, 200.0);
  for (int i = 0; i < 100; ++i) {
    const double eps = eps_dist(gen), omega = omega_dist(gen);
    const Complex up = kummer_1f1_special(eps, omega);
    const Complex down = kummer_1f1_special(eps, -omega);
    EXPECT_LE(std::abs(down - std::conj(up)), 1e-12 * std::abs(up));
  }
}

// omega w'(omega) + a w = a exp(i omega) along the imaginary axis.
TEST(Kummer, SatisfiesFirstOrderEquation) {
  const double h = 1e-4;
  for (double eps : {2.5, 3.8, 5.0}) {
    const double a = -2.0 / eps;
    for (double omega : {0.7, 4.0, 9.0, 15.0, 60.0}) {
      const Complex w = kummer_1f1_special(eps, omega);
      const Complex dw =
          (kummer_1f1_special(eps, omega + h) - kummer_1f1_special(eps, omega - h)) / (2.0 * h);
      const Complex residual = omega * dw + a * w - a * std::exp(Complex(0.0, omega));
      EXPECT_LT(std::abs(residual), 1e-6 * (1.0 + omega)) << eps << " " << omega;
    }
  }
}

TEST(Kummer, BranchesAgreeNearSwitch) {
  for (double eps : {2.3, 3.0, 3.5, 4.0, 5.0, 7.0}) {
    const double a = -2.0 / eps;
    for (double omega = 6.0; omega <= 10.0; omega += 0.25) {
      const Complex s = hetnet::kummer_series(a, omega);
      const Complex c = hetnet::kummer_large_argument(a, omega);
      EXPECT_LT(std::abs(s - c), 1e-10) << eps << " " << omega;
    }
  }
}

TEST(Kummer, RejectsBadArguments) {
  EXPECT_THROW(kummer_1f1_special(2.0, 1.0), hetnet::DomainError);
  EXPECT_THROW(kummer_1f1_special(1.5, 1.0), hetnet::DomainError);
  EXPECT_THROW(kummer_1f1_special(4.0, INFINITY), hetnet::DomainError);
  EXPECT_THROW(kummer_1f1_special(4.0, std::nan("")), hetnet::DomainError);
}

TEST(Kummer, NonConvergenceIsNumericError) {
  hetnet::KummerSettings tight;
  tight.max_terms = 3;
  EXPECT_THROW(kummer_1f1_special(4.0, 2.0, tight), hetnet::NumericError);
  EXPECT_THROW(kummer_1f1_special(4.0, 50.0, tight), hetnet::NumericError);
}
