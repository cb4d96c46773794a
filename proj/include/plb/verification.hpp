#pragma once
// Desk-scale empirical checks tying the constructed barriers to actual
// evolutions: an explicit finite-difference solver for the model equation on
// truncated radial or planar domains, ordering checks between grid fields,
// sup/inf bound checks with their admissible-growth gate, and the change of
// variables check for the doubly nonlinear form.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plb/common.hpp"
#include "plb/problem.hpp"
#include "plb/transform.hpp"

namespace plb {

/// Space-time values on a fixed grid. Radial fields store the node radii in
/// xs; planar fields store per-axis nodes and flatten space as ix * ny + iy.
/// Values are time-major: values[it * space_size() + is].
struct GridField {
  enum class Kind { radial_1d, box_2d };
  Kind kind = Kind::radial_1d;
  std::vector<double> xs;
  std::vector<double> ys;  // box only; empty for radial fields
  std::vector<double> ts;  // snapshot times; first 0, last the horizon
  std::vector<double> values;
  std::vector<std::uint8_t> lateral;  // 1 marks a lateral-boundary node

  std::size_t space_size() const {
    return kind == Kind::radial_1d ? xs.size() : xs.size() * ys.size();
  }
  double at(std::size_t it, std::size_t is) const {
    return values[it * space_size() + is];
  }
  /// Distance of a space node from the origin.
  double radius(std::size_t is) const;
  /// The bottom slice plus lateral nodes at every time.
  bool on_parabolic_boundary(std::size_t it, std::size_t is) const {
    return it == 0 || lateral[is] != 0;
  }
};

/// Lateral boundary data g(r, t); the planar scheme evaluates g at each edge
/// node's distance from the origin.
struct BoundaryData {
  std::function<double(double r, double t)> value;

  /// Dirichlet data frozen at the initial datum.
  static BoundaryData dirichlet(const InitialDatum& h);
  /// Pin to a space-time sampler, e.g. a barrier's value(r, t).
  static BoundaryData pinned(std::function<double(double, double)> sampler);
};

struct SolveOptions {
  GridField::Kind kind = GridField::Kind::radial_1d;
  double rho = 10.0;  // domain radius; the planar domain is [-rho, rho]^2
  int nodes = 201;    // nodes per axis, >= 16
  double dt = 0.0;    // <= 0 selects 0.45x the stability bound
  double grad_reg = 1e-6;  // |Du| -> sqrt(|Du|^2 + eps^2), in [1e-8, 1e-4]
  int snapshots = 101;     // recorded time slices, endpoints included
};

/// Requested time step exceeds the explicit-scheme stability bound.
struct CflViolation : std::invalid_argument {
  CflViolation(double dt, double bound)
      : std::invalid_argument("dt=" + std::to_string(dt) +
                              " exceeds the stability bound " +
                              std::to_string(bound)),
        dt(dt), bound(bound) {}
  double dt, bound;
};

/// The explicit evolution produced a non-finite value.
struct SolverBlowup : std::runtime_error {
  explicit SolverBlowup(std::size_t step)
      : std::runtime_error("non-finite value detected at step " +
                           std::to_string(step)),
        step(step) {}
  std::size_t step;
};

/// Largest stable explicit step, estimated from the initial slice.
double stability_bound(const ProblemSpec& ps, const SolveOptions& opt);

/// Explicit Euler evolution of the equation on the truncated domain, with
/// the lateral boundary held at bc and centered space differences; gradient
/// magnitudes are regularized by opt.grad_reg inside degenerate factors.
GridField fd_solve(const ProblemSpec& ps, const SolveOptions& opt,
                   const BoundaryData& bc);

/// Samples f(r, t) on the same grid as `like` (values only; tags copied).
GridField sample_like(const GridField& like,
                      const std::function<double(double, double)>& f);

/// Radial sample of f(r, t) on explicit node vectors; the outermost node is
/// tagged lateral.
GridField sample_radial(const std::function<double(double, double)>& f,
                        const std::vector<double>& rs,
                        const std::vector<double>& ts);

/// Shapes of the sup/inf bounds certified by the barrier families.
enum class BoundShape {
  max_drift,  // sup_x u(., t) <= nu + alpha t    (zero forcing exponent)
  max_flat,   // sup_x u(., t) <= nu              (positive forcing exponent)
  min_drift,  // inf_x u(., t) >= mu - alpha t    (zero forcing exponent)
  min_power,  // inf_x u >= mu - (alpha^gamma/(ell H)^sigma)^{1/(gamma-sigma)} t
  min_flat,   // inf_x u >= mu  (sign-definite forcing or decayed amplitude)
};

bool is_max_shape(BoundShape s);
std::string to_string(BoundShape s);

/// Which bound the problem's regime certifies from above / below.
BoundShape classify_max_case(const ProblemSpec& ps);
BoundShape classify_min_case(const ProblemSpec& ps);

/// Admissible growth gate: sup over |x| <= rho of the field (its negative
/// part for lower bounds) must stay below eta * rho^exponent for every
/// represented radius >= rho0.
struct GrowthHypothesis {
  double exponent = 2.0;
  double eta = 1.0;
  double rho0 = 1.0;
};

struct MarginPoint {
  double t = 0.0;
  double bound = 0.0;    // certified bound at this time
  double extreme = 0.0;  // field sup (upper shapes) or inf (lower shapes)
  double margin = 0.0;   // bound - sup, or inf - bound; >= -tol to pass
};

struct PrincipleReport {
  BoundShape shape = BoundShape::max_drift;
  std::string bound_label;
  double anchor = 0.0;  // nu or mu
  double drift = 0.0;   // time slope of the bound, 0 for flat shapes
  std::vector<MarginPoint> margins;
  double min_margin = 0.0;
  double t_at_min_margin = 0.0;
  double tol = 1e-2;
  bool pass = false;
};

/// Checks the field against the bound certified for the problem's regime.
/// A supplied growth hypothesis is tested first; a field violating it makes
/// the check inapplicable (HypothesisFailure) rather than failed.
PrincipleReport principle_check(const GridField& field, const ProblemSpec& ps,
                                BoundShape shape,
                                const std::optional<GrowthHypothesis>& hyp,
                                double tol = 1e-2);

/// Ordering contract: requires identical grids and sub <= super + tol on the
/// parabolic boundary (else PreconditionFailure); returns whether the
/// ordering also holds at every interior node.
bool comparison_check(const GridField& sub, const GridField& super,
                      double tol = 1e-2);

struct DoublyNonlinearOptions {
  SolveOptions solve;
  double tol = 1e-2;
};

struct DoublyNonlinearReport {
  double round_trip_error = 0.0;  // max |phi(phi^{-1}(g)) - g| on the grid
  double sup_g = 0.0, inf_g = 0.0;
  double sup_u = 0.0, inf_u = 0.0;  // of the evolved field, mapped back
  double upper_margin = 0.0;        // min over t of sup_g - sup_x u(., t)
  double lower_margin = 0.0;        // min over t of inf_x u(., t) - inf_g
  PrincipleReport upper, lower;     // checks on the transformed field
  bool pass = false;
};

/// Change-of-variables check: evolves v = phi^{-1}(u) under the transformed
/// equation (zero forcing) and verifies the mapped-back field stays inside
/// [inf g, sup g] up to tol. g must be strictly positive.
DoublyNonlinearReport doubly_nonlinear_check(const OperatorDescriptor& op,
                                             const PhiTransform& tr,
                                             const InitialDatum& g, double T,
                                             const DoublyNonlinearOptions& opt);

}  // namespace plb
