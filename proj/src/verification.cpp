#include "plb/verification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "plb/operators.hpp"

namespace plb {

namespace {

constexpr double kSafety = 0.45;  // fraction of the stability bound used

// Regularized |Du| and the matching unit direction; a vanishing gradient
// falls back to the first axis so the degenerate factor, not the direction,
// carries the limit.
struct RegGrad {
  double mag;
  Vec dir;
};

RegGrad reg_grad(const Vec& q, double eps) {
  RegGrad g;
  const double norm = q.norm();
  g.mag = std::sqrt(norm * norm + eps * eps);
  if (norm > 0.0) {
    g.dir = q / norm;
  } else {
    g.dir = Vec::Zero(q.size());
    g.dir(0) = 1.0;
  }
  return g;
}

// Evaluation core shared by the radial and planar schemes: the operator term
// |Du|_reg^{k1} H(direction, D^2u + Z(u) Du x Du) plus the forcing.
struct Scheme {
  const ProblemSpec& ps;
  int n;
  double k1;
  double eps;

  double rhs(const Vec& q, const Mat& hess, double u, double t) const {
    const RegGrad g = reg_grad(q, eps);
    Mat X = hess + ps.Z.fn(u) * q * q.transpose();
    const double hval =
        std::pow(g.mag, k1) * eval_operator(ps.op, g.dir, X);
    return hval + ps.chi.fn(t) * pow_sigma(g.mag, ps.sigma);
  }
};

// Largest |H(e, I)| over directions: the per-unit-curvature diffusivity
// entering the stability estimate.
double diffusivity_scale(const OperatorDescriptor& op) {
  const int n = op.dim;
  const Mat I = Mat::Identity(n, n);
  const double hi = sphere_maximize(
      n, [&](const Vec& e) { return eval_operator(op, e, I); });
  const double lo = sphere_minimize(
      n, [&](const Vec& e) { return eval_operator(op, e, -I); });
  return std::max({1e-12, std::abs(hi), std::abs(lo)});
}

void validate_options(const SolveOptions& opt) {
  if (!(opt.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (opt.nodes < 16) throw std::invalid_argument("need at least 16 nodes");
  if (!(opt.grad_reg >= 1e-8) || !(opt.grad_reg <= 1e-4))
    throw std::invalid_argument("grad_reg must lie in [1e-8, 1e-4]");
  if (opt.snapshots < 2) throw std::invalid_argument("need >= 2 snapshots");
}

// Worst regularized slope magnitude of the initial slice.
double max_initial_slope(const ProblemSpec& ps, const SolveOptions& opt) {
  const int m = opt.nodes;
  const double dr = opt.rho / (m - 1);
  double worst = opt.grad_reg;
  double prev = ps.h.radial(0.0);
  for (int i = 1; i < m; ++i) {
    const double cur = ps.h.radial(dr * i);
    worst = std::max(worst, std::abs(cur - prev) / dr);
    prev = cur;
  }
  return std::sqrt(worst * worst + opt.grad_reg * opt.grad_reg);
}

std::vector<std::size_t> snapshot_steps(std::size_t nsteps, int snapshots) {
  std::vector<std::size_t> idx;
  idx.reserve(snapshots);
  const std::size_t want = std::min<std::size_t>(snapshots, nsteps + 1);
  for (std::size_t j = 0; j < want; ++j) {
    std::size_t s = want == 1 ? nsteps : j * nsteps / (want - 1);
    if (idx.empty() || s > idx.back()) idx.push_back(s);
  }
  if (idx.empty() || idx.back() != nsteps) idx.push_back(nsteps);
  return idx;
}

// Rejects non-finite values and desk-scale runaways (an unstable explicit
// step grows geometrically; the cap converts that into a clean abort long
// before overflow).
void check_finite(const std::vector<double>& v, std::size_t step,
                  double cap) {
  for (double x : v)
    if (!(std::abs(x) <= cap)) throw SolverBlowup(step);
}

}  // namespace

double GridField::radius(std::size_t is) const {
  if (kind == Kind::radial_1d) return xs[is];
  const std::size_t ny = ys.size();
  return std::hypot(xs[is / ny], ys[is % ny]);
}

BoundaryData BoundaryData::dirichlet(const InitialDatum& h) {
  auto fn = h.radial;
  return {[fn](double r, double) { return fn(r); }};
}

BoundaryData BoundaryData::pinned(
    std::function<double(double, double)> sampler) {
  return {std::move(sampler)};
}

double stability_bound(const ProblemSpec& ps, const SolveOptions& opt) {
  ps.validate();
  validate_options(opt);
  const int n = ps.op.dim;
  const double dr = (opt.kind == GridField::Kind::radial_1d)
                        ? opt.rho / (opt.nodes - 1)
                        : 2.0 * opt.rho / (opt.nodes - 1);
  const double qm = max_initial_slope(ps, opt);
  const double diff = diffusivity_scale(ps.op) * std::pow(qm, ps.op.k1);
  // Second differences contribute 2/dr^2 per axis; the planar cross term and
  // the state-coefficient rank-one part are covered by the same scale since
  // |Du x Du| <= qm^2 and Z <= L.
  const double curv = 2.0 * n / (dr * dr) * (1.0 + ps.Z.L * qm * qm);
  // First-order forcing sensitivity through the centered slope stencil.
  const double adv =
      ps.sigma > 0.0
          ? ps.sigma * ps.chi.alpha * pow_sigma(qm, ps.sigma - 1.0) / dr
          : 0.0;
  return 1.0 / (diff * curv + adv + 1e-300);
}

GridField fd_solve(const ProblemSpec& ps, const SolveOptions& opt,
                   const BoundaryData& bc) {
  ps.validate();
  validate_options(opt);
  if (!bc.value) throw std::invalid_argument("boundary data not set");
  const bool radial = opt.kind == GridField::Kind::radial_1d;
  if (!radial && ps.op.dim != 2)
    throw std::invalid_argument("planar scheme requires a 2-d operator");

  // A boundary value that jumps away from the datum at t = 0+ (a pinned
  // barrier) is the steepest slope the first steps see; fold it into the
  // stability estimate.
  double bound = stability_bound(ps, opt);
  {
    const double dr = radial ? opt.rho / (opt.nodes - 1)
                             : 2.0 * opt.rho / (opt.nodes - 1);
    const double r_out = radial ? opt.rho : std::sqrt(2.0) * opt.rho;
    const double jump =
        std::abs(bc.value(r_out, 0.0) - ps.h.radial(r_out)) / dr;
    const double qm0 = max_initial_slope(ps, opt);
    if (jump > qm0) {
      // Rescale the curvature part of the estimate to the jump slope.
      const double ratio = std::pow(jump / qm0, ps.op.k1) *
                           (1.0 + ps.Z.L * jump * jump) /
                           (1.0 + ps.Z.L * qm0 * qm0);
      bound /= std::max(1.0, ratio);
    }
  }
  double dt = opt.dt;
  if (dt <= 0.0) {
    dt = kSafety * bound;
  } else if (dt > bound) {
    throw CflViolation(dt, bound);
  }
  const double T = ps.T;
  const std::size_t nsteps =
      std::max<std::size_t>(opt.snapshots - 1, (std::size_t)std::ceil(T / dt));
  dt = T / double(nsteps);

  Scheme sc{ps, ps.op.dim, ps.op.k1, opt.grad_reg};

  GridField f;
  f.kind = opt.kind;
  const int m = opt.nodes;
  std::vector<double> u;
  if (radial) {
    const double dr = opt.rho / (m - 1);
    f.xs.resize(m);
    for (int i = 0; i < m; ++i) f.xs[i] = dr * i;
    f.lateral.assign(m, 0);
    f.lateral[m - 1] = 1;
    u.resize(m);
    for (int i = 0; i < m; ++i) u[i] = ps.h.radial(f.xs[i]);
  } else {
    const double dx = 2.0 * opt.rho / (m - 1);
    f.xs.resize(m);
    f.ys.resize(m);
    for (int i = 0; i < m; ++i) f.xs[i] = f.ys[i] = -opt.rho + dx * i;
    f.lateral.assign(std::size_t(m) * m, 0);
    u.resize(std::size_t(m) * m);
    for (int ix = 0; ix < m; ++ix)
      for (int iy = 0; iy < m; ++iy) {
        const std::size_t is = std::size_t(ix) * m + iy;
        if (ix == 0 || iy == 0 || ix == m - 1 || iy == m - 1)
          f.lateral[is] = 1;
        u[is] = ps.h.radial(std::hypot(f.xs[ix], f.ys[iy]));
      }
  }
  // Desk-scale runaway cap: generous headroom over everything the data,
  // forcing, and boundary path can legitimately reach.
  double scale = 1.0;
  for (double x : u) scale = std::max(scale, std::abs(x));
  const double r_out = radial ? opt.rho : std::sqrt(2.0) * opt.rho;
  for (double tq : {0.0, 0.5 * T, T})
    scale = std::max(scale, std::abs(bc.value(r_out, tq)));
  scale += ps.chi.alpha * T;
  const double cap = 1e6 * scale;
  check_finite(u, 0, cap);

  const auto snaps = snapshot_steps(nsteps, opt.snapshots);
  std::size_t next_snap = 0;
  auto record = [&](std::size_t step) {
    if (next_snap < snaps.size() && snaps[next_snap] == step) {
      f.ts.push_back(step == nsteps ? T : dt * double(step));
      f.values.insert(f.values.end(), u.begin(), u.end());
      ++next_snap;
    }
  };
  record(0);

  std::vector<double> next(u.size());
  Vec q(sc.n);
  Mat hess(sc.n, sc.n);
  for (std::size_t step = 1; step <= nsteps; ++step) {
    const double t = dt * double(step - 1);
    if (radial) {
      const double dr = f.xs[1] - f.xs[0];
      // Symmetry at the center: zero slope, isotropic curvature.
      q.setZero();
      hess = Mat::Identity(sc.n, sc.n) * (2.0 * (u[1] - u[0]) / (dr * dr));
      next[0] = u[0] + dt * sc.rhs(q, hess, u[0], t);
      for (int i = 1; i + 1 < m; ++i) {
        const double ur = (u[i + 1] - u[i - 1]) / (2.0 * dr);
        const double urr = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dr * dr);
        q.setZero();
        q(0) = ur;
        hess = Mat::Identity(sc.n, sc.n) * (ur / f.xs[i]);
        hess(0, 0) = urr;
        next[i] = u[i] + dt * sc.rhs(q, hess, u[i], t);
      }
      next[m - 1] = bc.value(f.xs[m - 1], t + dt);
    } else {
      const double dx = f.xs[1] - f.xs[0];
      for (int ix = 0; ix < m; ++ix)
        for (int iy = 0; iy < m; ++iy) {
          const std::size_t is = std::size_t(ix) * m + iy;
          if (f.lateral[is]) {
            next[is] =
                bc.value(std::hypot(f.xs[ix], f.ys[iy]), t + dt);
            continue;
          }
          const auto at = [&](int jx, int jy) {
            return u[std::size_t(jx) * m + jy];
          };
          q(0) = (at(ix + 1, iy) - at(ix - 1, iy)) / (2.0 * dx);
          q(1) = (at(ix, iy + 1) - at(ix, iy - 1)) / (2.0 * dx);
          hess(0, 0) =
              (at(ix + 1, iy) - 2.0 * u[is] + at(ix - 1, iy)) / (dx * dx);
          hess(1, 1) =
              (at(ix, iy + 1) - 2.0 * u[is] + at(ix, iy - 1)) / (dx * dx);
          hess(0, 1) = hess(1, 0) =
              (at(ix + 1, iy + 1) - at(ix + 1, iy - 1) -
               at(ix - 1, iy + 1) + at(ix - 1, iy - 1)) /
              (4.0 * dx * dx);
          next[is] = u[is] + dt * sc.rhs(q, hess, u[is], t);
        }
    }
    u.swap(next);
    check_finite(u, step, cap);
    record(step);
  }
  return f;
}

GridField sample_like(const GridField& like,
                      const std::function<double(double, double)>& f) {
  GridField out = like;
  for (std::size_t it = 0; it < out.ts.size(); ++it)
    for (std::size_t is = 0; is < out.space_size(); ++is)
      out.values[it * out.space_size() + is] =
          f(out.radius(is), out.ts[it]);
  return out;
}

GridField sample_radial(const std::function<double(double, double)>& f,
                        const std::vector<double>& rs,
                        const std::vector<double>& ts) {
  if (rs.size() < 2 || ts.size() < 2)
    throw std::invalid_argument("need at least 2 nodes per axis");
  GridField out;
  out.kind = GridField::Kind::radial_1d;
  out.xs = rs;
  out.ts = ts;
  out.lateral.assign(rs.size(), 0);
  out.lateral.back() = 1;
  out.values.reserve(rs.size() * ts.size());
  for (double t : ts)
    for (double r : rs) out.values.push_back(f(r, t));
  return out;
}

bool is_max_shape(BoundShape s) {
  return s == BoundShape::max_drift || s == BoundShape::max_flat;
}

std::string to_string(BoundShape s) {
  switch (s) {
    case BoundShape::max_drift: return "max_drift";
    case BoundShape::max_flat: return "max_flat";
    case BoundShape::min_drift: return "min_drift";
    case BoundShape::min_power: return "min_power";
    case BoundShape::min_flat: return "min_flat";
  }
  return "?";
}

BoundShape classify_max_case(const ProblemSpec& ps) {
  return ps.sigma == 0.0 ? BoundShape::max_drift : BoundShape::max_flat;
}

BoundShape classify_min_case(const ProblemSpec& ps) {
  if (ps.chi.nonnegative) return BoundShape::min_flat;
  if (ps.sigma == 0.0) return BoundShape::min_drift;
  const double gamma = ps.homogeneity().gamma;
  if (ps.sigma < gamma) return BoundShape::min_power;
  return BoundShape::min_flat;  // critical small amplitude or supercritical
}

namespace {

// Admissible-growth gate: cumulative extreme against eta * r^exponent over
// every represented radius >= rho0. `upper` gates the field itself, the
// lower shapes gate its negative part.
void growth_gate(const GridField& f, const GrowthHypothesis& hyp,
                 bool upper) {
  if (!(hyp.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const std::size_t ns = f.space_size();
  std::vector<std::pair<double, double>> per_node(ns);
  for (std::size_t is = 0; is < ns; ++is) {
    double ext = upper ? f.at(0, is) : -f.at(0, is);
    for (std::size_t it = 1; it < f.ts.size(); ++it)
      ext = std::max(ext, upper ? f.at(it, is) : -f.at(it, is));
    per_node[is] = {f.radius(is), ext};
  }
  std::sort(per_node.begin(), per_node.end());
  double cum = -INFINITY;
  for (const auto& [r, ext] : per_node) {
    cum = std::max(cum, ext);
    if (r >= hyp.rho0 && cum > hyp.eta * std::pow(r, hyp.exponent)) {
      throw HypothesisFailure(
          "field exceeds the admissible growth eta r^beta at radius " +
          std::to_string(r));
    }
  }
}

}  // namespace

PrincipleReport principle_check(const GridField& field, const ProblemSpec& ps,
                                BoundShape shape,
                                const std::optional<GrowthHypothesis>& hyp,
                                double tol) {
  ps.validate();
  if (field.values.size() != field.ts.size() * field.space_size())
    throw std::invalid_argument("field storage is inconsistent");
  const bool upper = is_max_shape(shape);
  if (hyp) growth_gate(field, *hyp, upper);

  PrincipleReport rep;
  rep.shape = shape;
  rep.tol = tol;
  rep.anchor = upper ? ps.h.nu : ps.h.mu;
  switch (shape) {
    case BoundShape::max_drift:
    case BoundShape::min_drift:
      rep.drift = ps.chi.alpha;
      break;
    case BoundShape::min_power: {
      const auto hp = ps.homogeneity();
      SpectralEnvelopes env(ps.op, EnvelopeOptions{.L = ps.Z.L, .T = ps.T});
      const double lh = ps.Z.ell * env.report().script_H;
      rep.drift = std::pow(
          std::pow(ps.chi.alpha, hp.gamma) / std::pow(lh, ps.sigma),
          1.0 / (hp.gamma - ps.sigma));
      break;
    }
    default:
      rep.drift = 0.0;
  }
  rep.bound_label = upper ? "sup <= " : "inf >= ";
  rep.bound_label += (upper ? "nu" : "mu");
  if (rep.drift != 0.0)
    rep.bound_label += (upper ? " + " : " - ") + std::to_string(rep.drift) +
                       " t";

  rep.margins.reserve(field.ts.size());
  bool first = true;
  for (std::size_t it = 0; it < field.ts.size(); ++it) {
    const double t = field.ts[it];
    double ext = field.at(it, 0);
    for (std::size_t is = 1; is < field.space_size(); ++is) {
      const double v = field.at(it, is);
      ext = upper ? std::max(ext, v) : std::min(ext, v);
    }
    const double bound =
        upper ? rep.anchor + rep.drift * t : rep.anchor - rep.drift * t;
    const double margin = upper ? bound - ext : ext - bound;
    rep.margins.push_back({t, bound, ext, margin});
    if (first || margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.t_at_min_margin = t;
      first = false;
    }
  }
  rep.pass = rep.min_margin >= -tol;
  return rep;
}

bool comparison_check(const GridField& sub, const GridField& super,
                      double tol) {
  if (sub.kind != super.kind || sub.xs != super.xs || sub.ys != super.ys ||
      sub.ts != super.ts)
    throw std::invalid_argument("fields must share one grid");
  const std::size_t ns = sub.space_size();
  for (std::size_t it = 0; it < sub.ts.size(); ++it)
    for (std::size_t is = 0; is < ns; ++is) {
      if (!sub.on_parabolic_boundary(it, is)) continue;
      if (sub.at(it, is) > super.at(it, is) + tol)
        throw PreconditionFailure(
            "ordering fails on the parabolic boundary at t=" +
            std::to_string(sub.ts[it]) + ", node " + std::to_string(is));
    }
  for (std::size_t it = 0; it < sub.ts.size(); ++it)
    for (std::size_t is = 0; is < ns; ++is) {
      if (sub.on_parabolic_boundary(it, is)) continue;
      if (sub.at(it, is) > super.at(it, is) + tol) return false;
    }
  return true;
}

DoublyNonlinearReport doubly_nonlinear_check(
    const OperatorDescriptor& op, const PhiTransform& tr,
    const InitialDatum& g, double T, const DoublyNonlinearOptions& opt) {
  if (!(g.mu > 0.0))
    throw std::invalid_argument("data must have a positive floor");
  if (!(g.nu >= g.mu)) throw std::invalid_argument("data bounds are inverted");

  DoublyNonlinearReport rep;
  rep.sup_g = g.nu;
  rep.inf_g = g.mu;

  InitialDatum vdat;
  vdat.radial = [&tr, fn = g.radial](double r) { return tr.inv(fn(r)); };
  vdat.mu = tr.inv(g.mu);
  vdat.nu = tr.inv(g.nu);

  ProblemSpec ps;
  ps.op = op;
  ps.Z = tr.z_profile();
  ps.chi = ChiProfile::constant(0.0);
  ps.sigma = 0.0;
  ps.T = T;
  ps.h = vdat;

  const int m = opt.solve.nodes;
  for (int i = 0; i < m; ++i) {
    const double r = opt.solve.rho * i / (m - 1);
    const double back = tr.phi(tr.inv(g.radial(r)));
    rep.round_trip_error =
        std::max(rep.round_trip_error, std::abs(back - g.radial(r)));
  }

  auto field = fd_solve(ps, opt.solve, BoundaryData::dirichlet(vdat));
  rep.upper = principle_check(field, ps, BoundShape::max_drift, std::nullopt,
                              opt.tol);
  rep.lower = principle_check(field, ps, BoundShape::min_drift, std::nullopt,
                              opt.tol);

  bool first = true;
  for (const auto& mp : rep.upper.margins) {
    const double sup_u = tr.phi(mp.extreme);
    const double margin = rep.sup_g - sup_u;
    if (first || sup_u > rep.sup_u) rep.sup_u = sup_u;
    if (first || margin < rep.upper_margin) rep.upper_margin = margin;
    first = false;
  }
  first = true;
  for (const auto& mp : rep.lower.margins) {
    const double inf_u = tr.phi(mp.extreme);
    const double margin = inf_u - rep.inf_g;
    if (first || inf_u < rep.inf_u) rep.inf_u = inf_u;
    if (first || margin < rep.lower_margin) rep.lower_margin = margin;
    first = false;
  }
  rep.pass = rep.upper_margin >= -opt.tol && rep.lower_margin >= -opt.tol;
  return rep;
}

}  // namespace plb
