#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "hetnet/quadrature.hpp"
#include "hetnet/special_fn.hpp"

using hetnet::integrate_gk15;

TEST(Quadrature, Polynomial) {
  const auto r = integrate_gk15<double>([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 0.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, EndpointSingularity) {
  hetnet::QuadratureSettings s;
  s.abs_tol = 1e-12;
  const auto r = integrate_gk15<double>([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, s);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
}

TEST(Quadrature, ComplexOscillatory) {
  const auto r = integrate_gk15<std::complex<double>>(
      [](double x) { return std::exp(std::complex<double>(0.0, 10.0 * x)); }, 0.0, 3.0);
  const std::complex<double> want = (std::exp(std::complex<double>(0.0, 30.0)) - 1.0) /
                                    std::complex<double>(0.0, 10.0);
  EXPECT_LT(std::abs(r.value - want), 1e-12);
}

TEST(Quadrature, Breakpoints) {
  const std::vector<double> bp = {0.0, 1.0, 3.0};
  const auto r = integrate_gk15<double>([](double x) { return std::abs(x - 1.0); },
                                        std::span<const double>(bp));
  EXPECT_NEAR(r.value, 0.5 + 2.0, 1e-13);
}

TEST(Quadrature, ReportsNonConvergence) {
  hetnet::QuadratureSettings s;
  s.abs_tol = 1e-15;
  s.max_intervals = 3;
  const auto r = integrate_gk15<double>([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, s);
  EXPECT_FALSE(r.converged);
}
