#pragma once
// Residual evaluation for radially symmetric comparison profiles
//   w(x, t) = m + sign * (a t + b kappa(t) v(|x|)).
//
// The full equation residual H(Dw, D^2 w + Z(w) Dw x Dw) + chi(t)|Dw|^sigma
// - w_t can be assembled directly from the radial derivatives, or through the
// factored forms that isolate the slope magnitude (these are the shapes the
// barrier estimates control).  All modes evaluate the same number, which the
// tests exploit for cross-validation.

#include <functional>

#include "plb/aux_functions.hpp"
#include "plb/problem.hpp"

namespace plb {

// Slope magnitude profile r -> v(r) >= 0 together with its first two
// derivatives and the leading power c0 r^{beta0} near the origin.
struct SlopeProfile {
  std::function<double(double)> v, v1, v2;
  double small_r_coeff = 1.0;  // c0
  double small_r_power = 2.0;  // beta0
};

SlopeProfile slope_from_aux(const AuxFn& fn);

// C^1 time modulation kappa(t) >= 0 and its derivative.
struct KappaProfile {
  std::function<double(double)> fn, dfn;
};

KappaProfile kappa_one();         // kappa = 1
KappaProfile kappa_one_plus_t();  // kappa = 1 + t

struct RadialProfile {
  double m = 0.0;
  double sign = +1.0;  // +1 ascending (upper barrier), -1 descending (lower)
  double a = 0.0;      // linear-in-time rate
  double b = 1.0;      // slope scale
  KappaProfile kappa = kappa_one();
  SlopeProfile slope;

  double value(double r, double t) const;
  double dr(double r, double t) const;
  double drr(double r, double t) const;
  double dt(double r, double t) const;
};

enum class RadialMode {
  direct,          // assemble Dw, D^2 w and evaluate the operator
  small_r,         // (w_r^k / r) * H(e, I + c e x e); ascending slopes
  large_r,         // |w_r|^gamma * H(q^, X / w_r^2); any nonzero slope
  negative_slope,  // (|w_r|^k / r) * H(-e, c e x e - I); descending slopes
  r0_limit,        // exact limit of the residual at the center
};

struct RadialBreakdown {
  double r = 0, t = 0;
  double w = 0, w_r = 0, w_rr = 0, w_t = 0;
  double z = 0;         // Z(w)
  double chi = 0;       // chi(t)
  double h_term = 0;    // operator contribution
  double forcing = 0;   // chi(t) |w_r|^sigma
  double residual = 0;  // h_term + forcing - w_t
};

// Evaluates the equation residual of the profile at radius r >= 0, time t.
// Throws std::domain_error when the requested mode cannot represent the
// point (zero radius outside r0_limit, slope of the wrong sign, or a
// diverging center limit).
RadialBreakdown residual_at(const ProblemSpec& ps, const RadialProfile& prof,
                            double r, double t, RadialMode mode);

}  // namespace plb
