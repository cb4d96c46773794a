#pragma once
// Radial slope profiles with prescribed near-origin and far-field growth.
//
// The workhorse is v(r) = \int_0^{r^beta} dtau / (1 + tau^p): it behaves like
// r^beta near the origin and like r^{beta_bar} = r^{(1-p) beta} at infinity,
// with explicit first and second derivatives.  The degenerate split p = 0
// collapses to the monomial v = r^beta used when both growth exponents
// coincide.  AuxFn evaluates v and the derivative ratios the barrier
// constructions consume; aux_bounds_check certifies the two-sided envelope
// estimates those constructions rely on over a caller-supplied radius grid.

#include <string>
#include <vector>

#include "plb/common.hpp"
#include "plb/quadrature.hpp"

namespace plb {

// A: k = 1 with growth just under quadratic (gap epsilon).
// B: k > 1 monomial with both exponents equal to gamma* = (k+1)/k.
// C: forcing exponent above gamma = k+1; far-field exponent sigma/(sigma-1).
// FreePair: explicitly chosen exponents, no forcing interpretation.
enum class AuxCase { A, B, C, FreePair };

std::string to_string(AuxCase c);

struct AuxFnParams {
  AuxCase case_tag = AuxCase::FreePair;
  double beta = 2.0;      // near-origin growth exponent
  double beta_bar = 1.5;  // far-field growth exponent, (1 - p) * beta
  double p = 0.25;        // interpolation exponent in [0, 1); 0 = monomial
  double c_p = 2.0 / 3.0; // 1 / (2 (1 - p))
  double k = 1.0;         // slope homogeneity degree of the driving operator
  double epsilon = 0.0;   // case A exponent gap (beta_bar = 2 - epsilon)
  double sigma = 0.0;     // forcing exponent the profile was selected for
};

// Selects the profile for slope degree k >= 1 and forcing exponent sigma >= 0.
// epsilon is the case A exponent gap, used only when k == 1 and
// sigma <= k + 1; it must lie in (0, 1/8) when sigma == 0 and in
// (0, sigma/8) otherwise.
AuxFnParams make_aux_params(double k, double sigma, double epsilon);

// Profile with explicitly chosen exponents 1 < beta_bar < beta.
AuxFnParams free_pair(double beta, double beta_bar, double k = 1.0);

struct AuxEval {
  double r = 0;
  double v = 0;              // profile value
  double v1 = 0;             // v'
  double v2 = 0;             // v''
  double ratio_rv2_v1 = 0;   // r v'' / v'
  double ratio_v2_v1sq = 0;  // v'' / (v')^2
  double power_v1k_r = 0;    // (v')^k / r
};

class AuxFn {
 public:
  explicit AuxFn(AuxFnParams params, QuadratureSettings quad = {});

  const AuxFnParams& params() const { return params_; }

  double v(double r) const;
  double v1(double r) const;
  double v2(double r) const;

  // Value, derivatives, and ratios at r >= 0; r = 0 returns the limits
  // (infinite ones become +inf).
  AuxEval eval(double r) const;

 private:
  AuxFnParams params_;
  QuadratureSettings quad_;
};

struct BoundsItem {
  std::string item;        // "i".."xi" plus case-specific variants
  bool pass = true;
  double tol = 0;          // slack tolerance the item was held to
  double worst_slack = 0;  // most negative relative slack over the grid
  double r_at_worst = 0;
};

struct BoundsReport {
  AuxFnParams params;
  std::vector<BoundsItem> items;
  bool all_pass = true;

  const BoundsItem* find(const std::string& name) const;
};

// Checks every two-sided envelope estimate for the profile over r_grid.
// R_split separates the near-origin estimates (checked for r <= R_split)
// from the far-field ones (checked for r >= max(R_split, 1)).  Inequalities
// may undershoot by at most rel_tol relative slack; exact identities are held
// to 1e-12.
BoundsReport aux_bounds_check(const AuxFn& fn,
                              const std::vector<double>& r_grid,
                              double R_split = 10.0, double rel_tol = 1e-9);

// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace plb
