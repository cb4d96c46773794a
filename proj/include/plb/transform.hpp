#pragma once
// Change of variables u = phi(v) linking the state-coefficient equation to
// its doubly nonlinear counterpart.
//
// phi solves phi' = f(phi)^{1/(k-1)} with phi(tau0) = phi0 > 0, integrated by
// RK4 in both directions and tabulated with a monotone cubic.  The induced
// state coefficient is Z(tau) = phi''(tau)/phi'(tau); it is evaluated from
// the derivative of f^{1/(k-1)} when f' is supplied and by a difference
// quotient of phi' otherwise.  The degenerate degree k = 1 collapses to
// phi = e^tau with Z = 1 and must be requested explicitly.

#include <functional>
#include <memory>

#include "plb/problem.hpp"

namespace plb {

struct TransformInput {
  std::function<double(double)> f;   // nonlinearity; positive along phi
  std::function<double(double)> df;  // optional derivative of f
  double k = 2.0;                    // slope degree of the operator
  bool k_is_one = false;             // exact exponential branch
  double tau0 = 0.0;                 // base point
  double phi0 = 1.0;                 // phi(tau0)
  double tau_min = -3.0;             // tabulation window
  double tau_max = 3.0;
  int rk4_steps = 4096;              // steps across the window
};

class PhiTransform {
 public:
  explicit PhiTransform(TransformInput in);

  double phi(double tau) const;
  double dphi(double tau) const;  // phi'
  double inv(double u) const;     // phi^{-1}; u must lie in phi's range
  double Z(double tau) const;     // phi''/phi'
  bool analytic_z() const;

  double tau_min() const;
  double tau_max() const;

  // Z as a state coefficient for ProblemSpec, with its pinch [ell, L]
  // measured over the tabulation window; constant extrapolation outside.
  ZProfile z_profile(int samples = 512) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct ConcavityReport {
  bool concave = true;
  double worst_gap = 0.0;  // largest secant-slope increase found
  double s_at_worst = 0.0;
};

// Samples f^{1/(k-1)} on [lo, hi] and checks its secant slopes never
// increase, which is what keeps the induced Z non-increasing.
ConcavityReport concavity_check(const std::function<double(double)>& f,
                                double k, double lo, double hi, int samples);

}  // namespace plb
