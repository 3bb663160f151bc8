#pragma once

// Globally adaptive Gauss-Kronrod (G10/K21) quadrature over a finite
// interval, in the style of QUADPACK's QAG: keep a heap of subintervals
// keyed on their error estimate and bisect the worst until the total
// estimated error meets max(abs_tol, rel_tol * |I|), or the roundoff floor.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace pairsim::quad {

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  /// 50 eps int |f|: accuracy below this is not attainable in double.
  double roundoff = 0.0;
  std::size_t subdivisions = 0;
  bool converged = false;
};

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_subdivisions = 10000;
};

namespace detail {

// Kronrod 21-point nodes (non-negative half) and weights; the embedded
// Gauss 10-point rule uses every odd-indexed node.
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525787970, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  double roundoff;
  double excess;  // error above the roundoff floor: what bisection can remove
  bool operator<(const Segment& o) const { return excess < o.excess; }
};

template <class T, class F>
Segment<T> kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[10];
  T gauss{};
  double absolute = magnitude(fc) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const T lo = f(center - dx);
    const T hi = f(center + dx);
    kronrod += (lo + hi) * kWgk[j];
    absolute += (magnitude(lo) + magnitude(hi)) * kWgk[j];
    if (j % 2 == 1) gauss += (lo + hi) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absolute * half;
  const double raw = magnitude(kronrod - gauss);
  return {a, b, kronrod, std::max(raw, roundoff), roundoff, std::max(raw - roundoff, 0.0)};
}

}  // namespace detail

/// Integrates f over [a, b], optionally pre-split at `breaks` (points
/// outside (a, b) are ignored). Never throws; callers check `converged`.
template <class T, class F>
Result<T> integrate(F&& f, double a, double b, const Tolerance& tol,
                    const std::vector<double>& breaks = {}) {
  using Seg = detail::Segment<T>;
  std::vector<double> edges{a};
  for (double x : breaks) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  std::vector<Seg> heap;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] <= edges[i]) continue;
    heap.push_back(detail::kronrod21<T>(f, edges[i], edges[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end());

  Result<T> out;
  std::size_t count = heap.size();
  auto tally = [&] {
    out.value = T{};
    out.error = 0.0;
    out.roundoff = 0.0;
    double excess = 0.0;
    for (const Seg& s : heap) {
      out.value += s.value;
      out.error += s.error;
      out.roundoff += s.roundoff;
      excess += s.excess;
    }
    return excess;
  };
  auto target = [&](const T& v) {
    return std::max(tol.abs_tol, tol.rel_tol * detail::magnitude(v));
  };

  // Running totals steer the loop; exact re-sums confirm termination.
  double excess = tally();
  T total = out.value;
  while (count < tol.max_subdivisions) {
    if (excess <= target(total)) {
      excess = tally();
      total = out.value;
      if (excess <= target(total)) break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const Seg worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // resolution exhausted
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const Seg left = detail::kronrod21<T>(f, worst.a, mid);
    const Seg right = detail::kronrod21<T>(f, mid, worst.b);
    heap.back() = left;
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    total += left.value + right.value - worst.value;
    excess += left.excess + right.excess - worst.excess;
    ++count;
  }
  excess = tally();
  out.subdivisions = count;
  out.converged = excess <= target(out.value);
  return out;
}

}  // namespace pairsim::quad
