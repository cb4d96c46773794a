#include "plb/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "plb/interpolation.hpp"

namespace plb {

struct PhiTransform::Impl {
  TransformInput in;
  bool exact_exp = false;
  MonotoneCubic tab;

  double g(double s) const {
    const double fv = in.f(s);
    if (!(fv > 0.0) || !std::isfinite(fv)) {
      throw std::invalid_argument(
          "nonlinearity must stay positive and finite along phi");
    }
    return std::pow(fv, 1.0 / (in.k - 1.0));
  }

  double phi(double tau) const {
    if (exact_exp) return std::exp(tau);
    if (tau < in.tau_min || tau > in.tau_max) {
      throw std::domain_error("tau outside the tabulated window");
    }
    return tab(tau);
  }

  double Z(double tau) const {
    if (exact_exp) return 1.0;
    const double ph = phi(tau);
    if (in.df) {
      // (d/ds f^{1/(k-1)})(phi) = f^{(2-k)/(k-1)} f' / (k-1)
      const double fv = in.f(ph);
      return std::pow(fv, (2.0 - in.k) / (in.k - 1.0)) * in.df(ph) /
             (in.k - 1.0);
    }
    double h = 1e-5 * std::max(1.0, std::abs(tau));
    h = std::min({h, tau - in.tau_min, in.tau_max - tau});
    if (!(h > 0.0)) h = 1e-7;  // window endpoint: lean on clamped lookups
    const double lo = std::max(in.tau_min, tau - h);
    const double hi = std::min(in.tau_max, tau + h);
    return (g(tab(hi)) - g(tab(lo))) / ((hi - lo) * g(ph));
  }
};

PhiTransform::PhiTransform(TransformInput in) {
  auto impl = std::make_shared<Impl>();
  if (in.k_is_one) {
    if (in.k != 1.0) {
      throw std::invalid_argument("k_is_one set but k differs from 1");
    }
    impl->in = std::move(in);
    impl->exact_exp = true;
    impl_ = std::move(impl);
    return;
  }
  if (!(in.k > 1.0)) {
    throw std::invalid_argument(
        "slope degree must exceed 1 (set k_is_one for the degenerate branch)");
  }
  if (!in.f) throw std::invalid_argument("nonlinearity f is required");
  if (!(in.phi0 > 0.0)) throw std::invalid_argument("phi0 must be positive");
  if (!(in.tau_min < in.tau_max) || in.tau0 < in.tau_min ||
      in.tau0 > in.tau_max) {
    throw std::invalid_argument("need tau_min <= tau0 <= tau_max");
  }
  if (in.rk4_steps < 16) throw std::invalid_argument("too few RK4 steps");

  impl->in = std::move(in);
  const auto& I = impl->in;
  auto step = [&](double s, double h) {
    const double k1 = impl->g(s);
    const double k2 = impl->g(s + 0.5 * h * k1);
    const double k3 = impl->g(s + 0.5 * h * k2);
    const double k4 = impl->g(s + h * k3);
    return s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  const double h0 = (I.tau_max - I.tau_min) / I.rk4_steps;

  std::vector<double> taus{I.tau0}, phis{I.phi0};
  if (I.tau_max > I.tau0) {
    const int m = std::max(1, (int)std::ceil((I.tau_max - I.tau0) / h0));
    const double h = (I.tau_max - I.tau0) / m;
    double s = I.phi0;
    for (int i = 1; i <= m; ++i) {
      s = step(s, h);
      taus.push_back(I.tau0 + h * i);
      phis.push_back(s);
    }
    taus.back() = I.tau_max;
  }
  if (I.tau_min < I.tau0) {
    const int m = std::max(1, (int)std::ceil((I.tau0 - I.tau_min) / h0));
    const double h = (I.tau0 - I.tau_min) / m;
    std::vector<double> bt, bp;
    double s = I.phi0;
    for (int i = 1; i <= m; ++i) {
      s = step(s, -h);
      bt.push_back(I.tau0 - h * i);
      bp.push_back(s);
    }
    bt.back() = I.tau_min;
    taus.insert(taus.begin(), bt.rbegin(), bt.rend());
    phis.insert(phis.begin(), bp.rbegin(), bp.rend());
  }
  impl->tab = MonotoneCubic(std::move(taus), std::move(phis));
  impl_ = std::move(impl);
}

double PhiTransform::phi(double tau) const { return impl_->phi(tau); }

double PhiTransform::dphi(double tau) const {
  if (impl_->exact_exp) return std::exp(tau);
  return impl_->g(impl_->phi(tau));
}

double PhiTransform::inv(double u) const {
  if (impl_->exact_exp) {
    if (!(u > 0.0)) throw std::domain_error("inverse needs a positive value");
    return std::log(u);
  }
  double lo = impl_->in.tau_min, hi = impl_->in.tau_max;
  if (!(u >= impl_->phi(lo)) || !(u <= impl_->phi(hi))) {
    throw std::domain_error("value outside the tabulated range of phi");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (impl_->phi(mid) < u ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

double PhiTransform::Z(double tau) const { return impl_->Z(tau); }

bool PhiTransform::analytic_z() const {
  return impl_->exact_exp || static_cast<bool>(impl_->in.df);
}

double PhiTransform::tau_min() const { return impl_->in.tau_min; }
double PhiTransform::tau_max() const { return impl_->in.tau_max; }

ZProfile PhiTransform::z_profile(int samples) const {
  const double lo = tau_min(), hi = tau_max();
  double zmin = 0.0, zmax = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double tau = lo + (hi - lo) * i / (samples - 1);
    const double z = Z(tau);
    if (i == 0) {
      zmin = zmax = z;
    } else {
      zmin = std::min(zmin, z);
      zmax = std::max(zmax, z);
    }
  }
  if (!(zmin > 0.0)) {
    throw std::invalid_argument(
        "induced state coefficient is not positive over the window");
  }
  auto self = impl_;
  ZProfile zp;
  zp.fn = [self, lo, hi](double tau) {
    return self->Z(std::clamp(tau, lo, hi));
  };
  zp.ell = zmin;
  zp.L = zmax;
  return zp;
}

ConcavityReport concavity_check(const std::function<double(double)>& f,
                                double k, double lo, double hi, int samples) {
  if (!(k > 1.0)) {
    throw std::invalid_argument("concavity screen needs slope degree > 1");
  }
  if (!(hi > lo) || samples < 3) {
    throw std::invalid_argument("concavity screen needs lo < hi, samples >= 3");
  }
  ConcavityReport rep;
  const double h = (hi - lo) / (samples - 1);
  double prev_s = lo, prev_g = std::pow(f(lo), 1.0 / (k - 1.0));
  double prev_slope = 0.0;
  bool have_slope = false;
  for (int i = 1; i < samples; ++i) {
    const double s = lo + h * i;
    const double gv = std::pow(f(s), 1.0 / (k - 1.0));
    const double slope = (gv - prev_g) / (s - prev_s);
    if (have_slope) {
      const double gap = slope - prev_slope;
      const double tol = 1e-12 * std::max(1.0, std::abs(slope));
      if (gap > tol && gap > rep.worst_gap) {
        rep.worst_gap = gap;
        rep.s_at_worst = prev_s;
        rep.concave = false;
      }
    }
    prev_slope = slope;
    have_slope = true;
    prev_g = gv;
    prev_s = s;
  }
  return rep;
}

}  // namespace plb
