#pragma once

#include <string>
#include <vector>

#include "plb/aux_functions.hpp"
#include "plb/operators.hpp"
#include "plb/problem.hpp"
#include "plb/radial_calculus.hpp"

namespace plb {

/// Knobs for the upper (ascending) barrier w = nu + a t + b (1+t) v(r).
/// b <= b_cap is enforced; b <= 0 selects a safe default below the cap.
/// epsilon only matters for the degree-one subcritical cases; <= 0 picks
/// sigma/16 (or 1/16 when sigma = 0).
struct SuperBarrierInputs {
  double nu = 0.0;
  double b = 0.0;
  double epsilon = 0.0;
};

/// A fully selected upper barrier. `profile` is ready for residual
/// evaluation; R splits the inner estimate (matrix envelope at frozen
/// radius) from the outer one (slope envelope).
struct SuperBarrier {
  std::string case_tag;
  RadialProfile profile;
  AuxFnParams aux;
  EnvelopeReport envelopes;
  double R = 1.0;
  double a = 0.0;
  double b = 0.0;
  double b_cap = 1.0;
  double E = 0.0;       // gamma_star * (1 + T)
  double alpha = 0.0;   // forcing amplitude used in the selection
  double sigma = 0.0;
  double extra = 0.0;   // outer-region carry folded into a
};

SuperBarrier build_super(const ProblemSpec& ps, const SuperBarrierInputs& in);

/// The closed-form majorant the residual must stay below. Piecewise in r:
///   r <= R: [b g*(1+T)]^k M11 R^{g*} + alpha [b(1+T)v'(r)]^sigma - a - b v(r)
///   r >= R: b^k [(1+T) v'(r)]^gamma M_bar + alpha [...]^sigma - a - b v(r)
/// Nonpositive by construction of (a, b, R).
double super_chain_bound(const SuperBarrier& sb, double r);

struct BarrierCheckReport {
  double max_residual = 0.0;      // most positive residual over the grid
  double r_at_max_residual = 0.0;
  double t_at_max_residual = 0.0;
  double max_bound = 0.0;         // most positive chain value
  double r_at_max_bound = 0.0;
  double worst_dominance = 0.0;   // min rel slack of residual <= bound
  double r_at_worst_dominance = 0.0;
  std::size_t points = 0;
  double tol = 1e-9;
  bool pass = false;
};

/// Evaluates the exact residual (direct assembly; center limit at r = 0)
/// and the chain bound over r_grid x t_grid. Passes when the residual is
/// nonpositive, the chain is nonpositive, and the chain dominates the
/// residual pointwise, all to relative tolerance `tol`.
BarrierCheckReport super_residual_check(const ProblemSpec& ps,
                                        const SuperBarrier& sb,
                                        const std::vector<double>& r_grid,
                                        const std::vector<double>& t_grid,
                                        double tol = 1e-9);

struct ALimitPoint {
  double b = 0.0;
  double a = 0.0;
  double R = 0.0;
};

struct ALimitStudy {
  std::vector<ALimitPoint> points;
  std::vector<double> skipped;  // b values above the admissibility cap
  std::string note;             // why values were skipped, if any
  double target = 0.0;          // limit of a as b -> 0
  double tail_error = 0.0;      // |a_last - target|
  double tail_tol = 1e-3;
  bool pass = false;
};

/// Rebuilds the barrier for each b in `bs` (inputs otherwise fixed) and
/// records the selected time slope. As b -> 0 the slope tends to the
/// forcing amplitude when sigma = 0 and to zero otherwise; the study
/// records how close the last admissible point lands to that limit.
/// b values above the admissibility cap are skipped with a note.
ALimitStudy a_limit_study(const ProblemSpec& ps, const SuperBarrierInputs& in,
                          const std::vector<double>& bs);

}  // namespace plb
