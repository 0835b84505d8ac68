#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature over a finite interval,
// for real- or complex-valued integrands. The interval can be pre-split at
// caller-supplied breakpoints (e.g. one panel per oscillation period).
// Subintervals are summed in left-to-right order, so results do not depend on
// the order in which refinement happened.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace hetnet {

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_intervals = 2000;
};

namespace detail {

// Kronrod abscissae (descending) and weights; every other node is a Gauss node.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
};

template <class T, class F>
Segment<T> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kKronrodWeights[j];
    if (j % 2 == 1) gauss += sum * kGaussWeights[j / 2];
  }
  Segment<T> s;
  s.a = a;
  s.b = b;
  s.value = kronrod * half;
  s.error = std::abs((kronrod - gauss) * half);
  return s;
}

}  // namespace detail

template <class T, class F>
QuadratureResult<T> integrate_gk15(F&& f, std::span<const double> breakpoints,
                                   const QuadratureSettings& settings = {}) {
  using Seg = detail::Segment<T>;
  QuadratureResult<T> out;
  if (breakpoints.size() < 2) {
    out.converged = true;
    return out;
  }
  auto by_error = [](const Seg& x, const Seg& y) { return x.error < y.error; };
  std::priority_queue<Seg, std::vector<Seg>, decltype(by_error)> heap(by_error);

  double total_error = 0.0;
  T total{};
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] <= breakpoints[i]) continue;
    Seg s = detail::kronrod15<T>(f, breakpoints[i], breakpoints[i + 1]);
    out.evaluations += 15;
    total += s.value;
    total_error += s.error;
    heap.push(s);
  }
  auto target = [&] { return std::max(settings.abs_tol, settings.rel_tol * std::abs(total)); };

  while (total_error > target() && heap.size() < settings.max_intervals) {
    Seg worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    heap.pop();
    Seg left = detail::kronrod15<T>(f, worst.a, mid);
    Seg right = detail::kronrod15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += (left.value + right.value) - worst.value;
    total_error += (left.error + right.error) - worst.error;
    heap.push(left);
    heap.push(right);
  }

  std::vector<Seg> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
  out.value = T{};
  out.error = 0.0;
  for (const auto& s : segments) {
    out.value += s.value;
    out.error += s.error;
  }
  out.intervals = segments.size();
  out.converged = out.error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(out.value));
  return out;
}

template <class T, class F>
QuadratureResult<T> integrate_gk15(F&& f, double a, double b,
                                   const QuadratureSettings& settings = {}) {
  const std::array<double, 2> bounds = {a, b};
  return integrate_gk15<T>(std::forward<F>(f), std::span<const double>(bounds), settings);
}

}  // namespace hetnet
