#pragma once

#include <string>
#include <vector>

#include "plb/aux_functions.hpp"
#include "plb/operators.hpp"
#include "plb/problem.hpp"
#include "plb/radial_calculus.hpp"

namespace plb {

/// ---- Bounded-domain lower barrier -------------------------------------
/// w(x, t) = mu - F t - v(|x|) on the ball |x| < R, where v integrates
/// 2 E s / (1 - s^{2p}) and blows up at the boundary. The integer bend
/// exponent p is the smallest one whose curvature envelope at p^2 clears
/// the operator pinch constant (plus a forcing margin in the critical
/// regime). Three regimes:
///   sub/I.a  sign-indefinite forcing below the critical exponent; R is
///            selected from the forcing amplitude.
///   sub/I.b  nonnegative forcing, any exponent; R is free.
///   sub/I.c  critical exponent with small amplitude; R is free.
struct SubCompactInputs {
  double mu = 0.0;
  double R = 0.0;        // free-radius regimes only; <= 0 means 1.0
  double omega0 = 0.75;  // inner/outer split, must lie in [1/sqrt(2), 1)
  int force_p = 0;       // overrides the bend exponent search (study use)
};

struct SubCompactBarrier {
  std::string case_tag;
  RadialProfile profile;  // descending, kappa = 1, slope blows up at R
  EnvelopeReport envelopes;
  int p = 2;
  double E = 0.0;         // p (p+1) / ell
  double R = 1.0;
  double F = 0.0;         // time slope; also the decay rate constant
  double omega0 = 0.75;   // inner/outer split in units of R
  double script_H_p2 = 0.0;
  double ell = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  bool drop_alpha = false;  // nonnegative forcing: amplitude need dropped
};

SubCompactBarrier build_sub_compact(const ProblemSpec& ps,
                                    const SubCompactInputs& in);

/// Closed-form minorant of the residual; nonnegative on the ball.
double sub_compact_chain_bound(const SubCompactBarrier& sb, double r);

/// ---- Unbounded-domain lower barrier -----------------------------------
/// w(x, t) = mu - a t - b (1+t) v(|x|), mirroring the upper barrier with
/// the minimizing envelope constants. Regimes:
///   sub/II.i1  degree one at the critical forcing exponent; requires the
///              amplitude to clear ell * script_H (else the bounded-domain
///              construction is the right tool).
///   sub/II.i2  higher degree at the critical exponent, same requirement.
///   sub/II.ii  supercritical exponent, any amplitude.
struct SubGrowthInputs {
  double mu = 0.0;
  double b = 0.0;        // <= 0 selects a default below the cap
  double epsilon = 0.0;  // degree-one exponent gap; <= 0 picks sigma/16
};

struct SubGrowthBarrier {
  std::string case_tag;
  RadialProfile profile;  // descending, kappa = 1 + t
  AuxFnParams aux;
  EnvelopeReport envelopes;
  double R = 1.0;
  double a = 0.0;
  double b = 0.0;
  double b_cap = 1.0;
  double E = 0.0;  // gamma_star * (1 + T)
  double alpha = 0.0;
  double sigma = 0.0;
  double extra = 0.0;
};

SubGrowthBarrier build_sub_growth(const ProblemSpec& ps,
                                  const SubGrowthInputs& in);

/// Minorant of the residual, piecewise in r around R; nonnegative.
double sub_growth_chain_bound(const SubGrowthBarrier& sb, double r);

/// Grid report for the lower barriers: residual must stay above the chain
/// and both must be nonnegative (relative tolerance tol).
struct SubCheckReport {
  double min_residual = 0.0;
  double r_at_min_residual = 0.0;
  double t_at_min_residual = 0.0;
  double min_bound = 0.0;
  double r_at_min_bound = 0.0;
  double worst_dominance = 0.0;  // min rel slack of chain <= residual
  double r_at_worst_dominance = 0.0;
  std::size_t points = 0;
  double tol = 1e-9;
  bool pass = false;
};

SubCheckReport sub_compact_residual_check(const ProblemSpec& ps,
                                          const SubCompactBarrier& sb,
                                          const std::vector<double>& omega_grid,
                                          const std::vector<double>& t_grid,
                                          double tol = 1e-9);

SubCheckReport sub_growth_residual_check(const ProblemSpec& ps,
                                         const SubGrowthBarrier& sb,
                                         const std::vector<double>& r_grid,
                                         const std::vector<double>& t_grid,
                                         double tol = 1e-9);

struct FLimitPoint {
  int p = 2;
  double R = 0.0;
  double F = 0.0;
};

struct FLimitStudy {
  std::vector<FLimitPoint> points;
  double target = 0.0;      // limit of F as the radius grows
  double tail_error = 0.0;  // |F_last - target|, relative when target != 0
  double tail_tol = 0.02;
  bool pass = false;
};

/// Time-slope decay study. For the amplitude-selected regime the radius is
/// driven by the bend exponent, so each requested radius is met by the
/// smallest exponent whose selected radius reaches it; in the free-radius
/// regimes the radius is taken directly. F tends to the forcing amplitude
/// when sigma = 0, to (alpha^gamma / (ell script_H)^sigma)^{1/(gamma-sigma)}
/// for intermediate exponents, and to 0 in the free-radius regimes; the
/// study records how close the last point lands to that limit.
FLimitStudy f_limit_study(const ProblemSpec& ps, const SubCompactInputs& in,
                          const std::vector<double>& R_targets);

}  // namespace plb
