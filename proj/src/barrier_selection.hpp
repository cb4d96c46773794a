#pragma once
// Shared slope-scale selection for the barrier families.

#include <cmath>

namespace plb::detail {

// Largest b with C_gamma b^{k-1} + C_sigma b^{sigma-1} <= target, where
// C_gamma = E^gamma * M and C_sigma = alpha * E^sigma. Both exponents are
// positive in the regimes that call this (k > 1, sigma > 1), so the left
// side increases from 0 and bisection applies.
inline double bisect_slope_cap(double E, double gamma, double M, double alpha,
                               double sigma, double k, double target) {
  auto g = [&](double b) {
    return std::pow(E, gamma) * M * std::pow(b, k - 1.0) +
           alpha * std::pow(E, sigma) * std::pow(b, sigma - 1.0);
  };
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (g(hi) <= target && grow++ < 64) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) <= target ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace plb::detail
