#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace plb {

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-13;  // takes over when the integral is huge
  int max_depth = 48;
};

namespace detail {

template <class F>
double adapt(const F& f, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth, int max_depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth >= max_depth || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Simpson on [a, b]. Tolerance is absolute with a relative floor so
/// integrals of any magnitude terminate.
template <class F>
double integrate(const F& f, double a, double b,
                 const QuadratureSettings& q = {}) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double tol = std::max(q.abs_tol, q.rel_tol * std::abs(whole));
  return detail::adapt(f, a, b, fa, fm, fb, whole, tol, 0, q.max_depth);
}

/// Integrates f over [0, X] splitting at decade boundaries, so barrier radii
/// of any magnitude cost O(log X) panels instead of one deep recursion.
template <class F>
double integrate_decades(const F& f, double X, const QuadratureSettings& q = {}) {
  if (X <= 0.0) return 0.0;
  double total = 0.0;
  double hi = X;
  while (hi > 1.0) {
    double lo = hi / 10.0;
    total += integrate(f, lo, hi, q);
    hi = lo;
  }
  total += integrate(f, 0.0, hi, q);
  return total;
}

}  // namespace plb
