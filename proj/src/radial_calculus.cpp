#include "plb/radial_calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "plb/operators.hpp"

namespace plb {

SlopeProfile slope_from_aux(const AuxFn& fn) {
  SlopeProfile s;
  s.v = [fn](double r) { return fn.v(r); };
  s.v1 = [fn](double r) { return fn.v1(r); };
  s.v2 = [fn](double r) { return fn.v2(r); };
  s.small_r_coeff = 1.0;
  s.small_r_power = fn.params().beta;
  return s;
}

KappaProfile kappa_one() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }};
}

KappaProfile kappa_one_plus_t() {
  return {[](double t) { return 1.0 + t; }, [](double) { return 1.0; }};
}

double RadialProfile::value(double r, double t) const {
  return m + sign * (a * t + b * kappa.fn(t) * slope.v(r));
}

double RadialProfile::dr(double r, double t) const {
  return sign * b * kappa.fn(t) * slope.v1(r);
}

double RadialProfile::drr(double r, double t) const {
  return sign * b * kappa.fn(t) * slope.v2(r);
}

double RadialProfile::dt(double r, double t) const {
  return sign * (a + b * kappa.dfn(t) * slope.v(r));
}

RadialBreakdown residual_at(const ProblemSpec& ps, const RadialProfile& prof,
                            double r, double t, RadialMode mode) {
  const auto& op = ps.op;
  const int n = op.dim;
  const auto hb = op.homogeneity();
  Vec e = Vec::Zero(n);
  e(0) = 1.0;

  RadialBreakdown out;
  out.r = r;
  out.t = t;
  out.chi = ps.chi.fn(t);

  if (mode == RadialMode::r0_limit) {
    out.w = prof.value(0.0, t);
    out.z = ps.Z.fn(out.w);
    out.w_t = prof.dt(0.0, t);
    out.w_rr = prof.drr(0.0, t);
    const double beta0 = prof.slope.small_r_power;
    const double c0 = prof.slope.small_r_coeff;
    const double expo = hb.k * beta0 - hb.gamma;
    double ck = 0.0;
    if (std::abs(expo) < 1e-12) {
      ck = std::pow(c0 * beta0, hb.k);
    } else if (expo < 0.0) {
      throw std::domain_error(
          "center limit diverges: slope grows slower than r^{gamma/k}");
    }
    double h = 0.0;
    if (ck != 0.0) {
      const double B = prof.b * prof.kappa.fn(t);
      const double q0 = beta0 - 1.0;
      Mat M;
      Vec qhat;
      if (prof.sign > 0.0) {
        M = Mat::Identity(n, n);
        M(0, 0) += q0 - 1.0;
        qhat = e;
      } else {
        // (1 - q0) e x e - I
        M = -Mat::Identity(n, n);
        M(0, 0) += 1.0 - q0;
        qhat = -e;
      }
      h = std::pow(B, hb.k) * ck * eval_operator(op, qhat, M);
    }
    out.h_term = h;
    out.forcing = out.chi * pow_sigma(0.0, ps.sigma);
    out.residual = out.h_term + out.forcing - out.w_t;
    return out;
  }

  if (!(r > 0.0)) {
    throw std::domain_error("positive radius required outside r0_limit mode");
  }

  out.w = prof.value(r, t);
  out.w_r = prof.dr(r, t);
  out.w_rr = prof.drr(r, t);
  out.w_t = prof.dt(r, t);
  out.z = ps.Z.fn(out.w);
  out.forcing = out.chi * pow_sigma(out.w_r, ps.sigma);

  double h = 0.0;
  switch (mode) {
    case RadialMode::direct: {
      Vec q = Vec::Zero(n);
      q(0) = out.w_r;
      Mat X = (out.w_r / r) * Mat::Identity(n, n);
      X(0, 0) = out.w_rr + out.z * sqr(out.w_r);
      h = eval_operator(op, q, X);
      break;
    }
    case RadialMode::small_r: {
      if (!(out.w_r > 0.0)) {
        throw std::domain_error("small_r mode needs an ascending slope");
      }
      Mat M = Mat::Identity(n, n);
      M(0, 0) += r * out.w_rr / out.w_r - 1.0 + r * out.w_r * out.z;
      h = std::pow(out.w_r, hb.k) / r * eval_operator(op, e, M);
      break;
    }
    case RadialMode::large_r: {
      if (out.w_r == 0.0) {
        throw std::domain_error("large_r mode needs a nonzero slope");
      }
      Mat M = (1.0 / (r * out.w_r)) * Mat::Identity(n, n);
      M(0, 0) = out.w_rr / sqr(out.w_r) + out.z;
      Vec qhat = out.w_r > 0.0 ? e : Vec(-e);
      h = std::pow(std::abs(out.w_r), hb.gamma) * eval_operator(op, qhat, M);
      break;
    }
    case RadialMode::negative_slope: {
      if (!(out.w_r < 0.0)) {
        throw std::domain_error("negative_slope mode needs a descending slope");
      }
      const double aw = -out.w_r;
      Mat M = -Mat::Identity(n, n);
      M(0, 0) += 1.0 + r * out.w_rr / aw + r * aw * out.z;
      h = std::pow(aw, hb.k) / r * eval_operator(op, -e, M);
      break;
    }
    case RadialMode::r0_limit:
      break;  // handled above
  }
  out.h_term = h;
  out.residual = out.h_term + out.forcing - out.w_t;
  return out;
}

}  // namespace plb
