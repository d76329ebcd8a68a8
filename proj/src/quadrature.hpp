#pragma once

#include <cmath>

namespace tvps::detail {

/// 5-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre5(const F& f, double a, double b) {
  constexpr double x1 = 0.5384693101056831;
  constexpr double x2 = 0.9061798459386640;
  constexpr double w0 = 0.5688888888888889;
  constexpr double w1 = 0.4786286704993665;
  constexpr double w2 = 0.2369268850561891;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  return h * (w0 * f(c) + w1 * (f(c - h * x1) + f(c + h * x1)) + w2 * (f(c - h * x2) + f(c + h * x2)));
}

template <class F>
double adaptive_gauss_legendre(const F& f, double a, double b, double whole, double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_legendre5(f, a, m);
  const double right = gauss_legendre5(f, m, b);
  const double halves = left + right;
  if (depth <= 0 || std::abs(halves - whole) <= abs_tol) return halves;
  return adaptive_gauss_legendre(f, a, m, left, abs_tol / 2, depth - 1) +
         adaptive_gauss_legendre(f, m, b, right, abs_tol / 2, depth - 1);
}

/// Integral of f over [a, b]: the 5-point rule is refined by bisection until
/// halving changes the estimate by at most abs_tol.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol, int max_depth = 30) {
  if (!(b > a)) return 0.0;
  return adaptive_gauss_legendre(f, a, b, gauss_legendre5(f, a, b), abs_tol, max_depth);
}

}  // namespace tvps::detail
