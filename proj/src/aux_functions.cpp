#include "plb/aux_functions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace plb {

namespace {

constexpr double kIdentityTol = 1e-12;

double npow(double base, double expo) { return std::pow(base, expo); }

}  // namespace

std::string to_string(AuxCase c) {
  switch (c) {
    case AuxCase::A: return "A";
    case AuxCase::B: return "B";
    case AuxCase::C: return "C";
    case AuxCase::FreePair: return "free";
  }
  return "?";
}

AuxFnParams make_aux_params(double k, double sigma, double epsilon) {
  if (!(k >= 1.0)) {
    throw std::invalid_argument("slope degree k must be >= 1");
  }
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("forcing exponent sigma must be >= 0");
  }
  const double gamma = k + 1.0;
  const double gamma_star = gamma / k;
  AuxFnParams out;
  out.k = k;
  out.sigma = sigma;
  if (sigma > gamma) {
    out.case_tag = AuxCase::C;
    out.beta = gamma_star;
    out.beta_bar = sigma / (sigma - 1.0);
    out.p = (sigma - gamma) / (gamma * (sigma - 1.0));
  } else if (k == 1.0) {
    out.case_tag = AuxCase::A;
    const double gap_cap = (sigma == 0.0 ? 1.0 : sigma) / 8.0;
    if (!(epsilon > 0.0) || !(epsilon < gap_cap)) {
      throw std::invalid_argument(
          "exponent gap epsilon must lie in (0, " + std::to_string(gap_cap) +
          ") for this forcing exponent");
    }
    out.beta = 2.0;
    out.beta_bar = 2.0 - epsilon;
    out.p = epsilon / 2.0;
    out.epsilon = epsilon;
  } else {
    out.case_tag = AuxCase::B;
    out.beta = gamma_star;
    out.beta_bar = gamma_star;
    out.p = 0.0;
  }
  out.c_p = 1.0 / (2.0 * (1.0 - out.p));
  return out;
}

AuxFnParams free_pair(double beta, double beta_bar, double k) {
  if (!(beta_bar > 1.0) || !(beta_bar < beta)) {
    throw std::invalid_argument("free pair needs 1 < beta_bar < beta");
  }
  if (!(k >= 1.0)) {
    throw std::invalid_argument("slope degree k must be >= 1");
  }
  AuxFnParams out;
  out.case_tag = AuxCase::FreePair;
  out.beta = beta;
  out.beta_bar = beta_bar;
  out.p = (beta - beta_bar) / beta;
  out.c_p = 1.0 / (2.0 * (1.0 - out.p));
  out.k = k;
  return out;
}

AuxFn::AuxFn(AuxFnParams params, QuadratureSettings quad)
    : params_(params), quad_(quad) {
  if (!(params_.beta > 1.0) || !(params_.beta_bar > 1.0) ||
      params_.beta_bar > params_.beta) {
    throw std::invalid_argument("profile exponents must satisfy 1 < beta_bar <= beta");
  }
  if (params_.p < 0.0 || params_.p >= 1.0) {
    throw std::invalid_argument("interpolation exponent must lie in [0, 1)");
  }
}

double AuxFn::v(double r) const {
  if (r <= 0.0) return 0.0;
  if (params_.p == 0.0) return npow(r, params_.beta);
  // Substituting tau = s^2 removes the endpoint kink of tau^p at tau = 0:
  //   v(r) = \int_0^{r^{beta/2}} 2 s / (1 + s^{2p}) ds.
  const double two_p = 2.0 * params_.p;
  const double s_max = npow(r, params_.beta / 2.0);
  return integrate_decades(
      [two_p](double s) { return 2.0 * s / (1.0 + npow(s, two_p)); }, s_max,
      quad_);
}

double AuxFn::v1(double r) const {
  const double beta = params_.beta;
  if (r <= 0.0) return 0.0;
  if (params_.p == 0.0) return beta * npow(r, beta - 1.0);
  return beta * npow(r, beta - 1.0) / (1.0 + npow(r, params_.p * beta));
}

double AuxFn::v2(double r) const {
  const double beta = params_.beta, bb = params_.beta_bar;
  if (r <= 0.0) {
    if (beta == 2.0) return beta * (beta - 1.0);
    return beta > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (params_.p == 0.0) return beta * (beta - 1.0) * npow(r, beta - 2.0);
  const double rp = npow(r, params_.p * beta);
  return beta * npow(r, beta - 2.0) * (beta - 1.0 + (bb - 1.0) * rp) /
         sqr(1.0 + rp);
}

AuxEval AuxFn::eval(double r) const {
  const double beta = params_.beta, k = params_.k;
  const double gamma = k + 1.0;
  AuxEval e;
  e.r = r;
  if (r <= 0.0) {
    e.v = 0.0;
    e.v1 = 0.0;
    e.v2 = v2(0.0);
    e.ratio_rv2_v1 = beta - 1.0;
    e.ratio_v2_v1sq = std::numeric_limits<double>::infinity();
    const double expo = k * beta - gamma;
    if (std::abs(expo) < 1e-12) {
      e.power_v1k_r = npow(beta, k);
    } else {
      e.power_v1k_r = expo > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return e;
  }
  e.v = v(r);
  e.v1 = v1(r);
  e.v2 = v2(r);
  e.ratio_rv2_v1 = r * e.v2 / e.v1;
  e.ratio_v2_v1sq = e.v2 / sqr(e.v1);
  e.power_v1k_r = npow(e.v1, k) / r;
  return e;
}

const BoundsItem* BoundsReport::find(const std::string& name) const {
  for (const auto& item : items) {
    if (item.item == name) return &item;
  }
  return nullptr;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("log_grid needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(static_cast<size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

struct ItemTracker {
  BoundsItem item;

  explicit ItemTracker(std::string name, double tol) {
    item.item = std::move(name);
    item.tol = tol;
    item.worst_slack = std::numeric_limits<double>::infinity();
  }

  void le(double lhs, double rhs, double r) {
    const double s = rel_slack(lhs, rhs);
    if (s < item.worst_slack) {
      item.worst_slack = s;
      item.r_at_worst = r;
    }
  }

  void identity(double lhs, double rhs, double r) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    const double s = -std::abs(lhs - rhs) / scale;
    if (s < item.worst_slack) {
      item.worst_slack = s;
      item.r_at_worst = r;
    }
  }

  BoundsItem finish() {
    if (!std::isfinite(item.worst_slack)) item.worst_slack = 0.0;
    item.pass = item.worst_slack >= -item.tol;
    return item;
  }
};

}  // namespace

BoundsReport aux_bounds_check(const AuxFn& fn,
                              const std::vector<double>& r_grid,
                              double R_split, double rel_tol) {
  const AuxFnParams& P = fn.params();
  const double beta = P.beta, bb = P.beta_bar, p = P.p, c_p = P.c_p, k = P.k;
  const double gamma = k + 1.0;
  const bool monomial = (P.case_tag == AuxCase::B);

  BoundsReport report;
  report.params = P;

  std::vector<AuxEval> evs;
  evs.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 0.0)) {
      throw std::invalid_argument("bounds grid must contain positive radii");
    }
    evs.push_back(fn.eval(r));
  }
  const double Rb = std::max(R_split, 1.0);
  const double vR = fn.v(Rb);

  std::deque<ItemTracker> T;
  auto track = [&T](const std::string& name, double tol) -> ItemTracker& {
    T.emplace_back(name, tol);
    return T.back();
  };

  {
    auto& t = track("i", 0.0);
    if (monomial) {
      t.item.pass = (p == 0.0);
      t.item.worst_slack = -std::abs(p);
    } else {
      t.item.pass = (p > 0.0 && p < 1.0);
      t.item.worst_slack = std::min(p, 1.0 - p);
    }
    report.items.push_back(t.item);
    T.pop_back();
  }
  {
    auto& t = track("ii", kIdentityTol);
    t.identity((1.0 - p) * beta, bb, 0.0);
    report.items.push_back(t.finish());
    T.pop_back();
  }

  auto& iii = track("iii", rel_tol);
  auto& iv = track("iv", rel_tol);
  auto& item_v = track("v", rel_tol);
  auto& vi = track("vi", rel_tol);
  auto& vii = track("vii", rel_tol);
  auto& viii = track("viii", rel_tol);
  auto& ix = track("ix", rel_tol);
  ItemTracker* x = monomial ? nullptr : &track("x", kIdentityTol);
  auto& xi = track("xi", rel_tol);

  const double split_denom = 1.0 + npow(Rb, p * beta);
  for (const auto& e : evs) {
    const double r = e.r;
    const double r_b = npow(r, beta), r_bb = npow(r, bb);
    if (r <= R_split) {
      iii.le(r_b / split_denom, e.v, r);
      iii.le(e.v, r_b, r);
    }
    if (r >= Rb) {
      const double gap = npow(r, bb) - npow(Rb, bb);
      iv.le(c_p * gap, e.v - vR, r);
      iv.le(e.v - vR, 2.0 * c_p * gap, r);
    }
    item_v.le(e.v1, beta * std::min(r_bb / r, r_b / r), r);
    vi.le(r * e.v1, beta * std::min(r_bb, r_b), r);
    vii.le(0.0, e.v2 / std::max(1.0, e.v2), r);
    viii.le(e.power_v1k_r,
            npow(beta, k) * std::min(npow(r, k * beta - gamma),
                                     npow(r, k * bb - gamma)),
            r);
    ix.le(bb - 1.0, e.ratio_rv2_v1, r);
    ix.le(e.ratio_rv2_v1, beta - 1.0, r);
    if (x != nullptr) {
      x->identity(e.ratio_v2_v1sq,
                  (beta - 1.0) / (beta * r_b) + (bb - 1.0) / (beta * r_bb), r);
    }
    if (r >= 1.0) {
      xi.le((bb - 1.0) / (beta * r_bb), e.ratio_v2_v1sq, r);
      xi.le(e.ratio_v2_v1sq, 2.0 * (beta - 1.0) / (beta * r_bb), r);
    }
  }

  switch (P.case_tag) {
    case AuxCase::A: {
      const double eps = P.epsilon;
      auto& iii_a = track("iii_A", rel_tol);
      auto& iv_a = track("iv_A", rel_tol);
      auto& vi_a = track("vi_A", rel_tol);
      auto& viii_a = track("viii_A", rel_tol);
      auto& ix_a = track("ix_A", rel_tol);
      auto& xi_a = track("xi_A", rel_tol);
      for (const auto& e : evs) {
        const double r = e.r;
        const double r2 = r * r, r2e = npow(r, 2.0 - eps);
        const double mn = std::min(r2e, r2);
        const double mid = r2 / (1.0 + npow(r, eps));
        iii_a.le(0.5 * mn, mid, r);
        iii_a.le(mid, e.v, r);
        iii_a.le(e.v, std::min(r2, 2.0 * c_p * r2e), r);
        if (r >= Rb) {
          const double gap = r2e - npow(Rb, 2.0 - eps);
          iv_a.le(0.5 * gap, e.v - vR, r);
          iv_a.le(e.v - vR, 2.0 * gap, r);
        }
        vi_a.le(mn, r * e.v1, r);
        vi_a.le(r * e.v1, 2.0 * mn, r);
        viii_a.le(e.v1 / r, 2.0 * std::min(1.0, npow(r, -eps)), r);
        ix_a.le(1.0 - eps, e.ratio_rv2_v1, r);
        ix_a.le(e.ratio_rv2_v1, 1.0, r);
        if (r >= 1.0) {
          xi_a.le((1.0 - eps) / (2.0 * r2e), e.ratio_v2_v1sq, r);
          xi_a.le(e.ratio_v2_v1sq, 1.0 / r2e, r);
        }
      }
      break;
    }
    case AuxCase::B: {
      const double gs = beta;  // both exponents equal gamma* here
      auto& vii_b = track("vii_B", kIdentityTol);
      auto& viii_b = track("viii_B", kIdentityTol);
      auto& ix_b = track("ix_B", kIdentityTol);
      auto& xi_b = track("xi_B", kIdentityTol);
      for (const auto& e : evs) {
        const double r = e.r;
        vii_b.identity(r * e.v1, gs * npow(r, gs), r);
        viii_b.identity(e.power_v1k_r, npow(gs, k), r);
        ix_b.identity(e.ratio_rv2_v1, gs - 1.0, r);
        xi_b.identity(e.ratio_v2_v1sq, 1.0 / (gamma * npow(r, gs)), r);
      }
      break;
    }
    case AuxCase::C: {
      const double sig = P.sigma;
      const double sp = bb;  // sigma / (sigma - 1)
      const double m = (sig - gamma) / (sig - 1.0);
      auto& iii_c = track("iii_C", rel_tol);
      auto& vii_c = track("vii_C", rel_tol);
      auto& viii_c = track("viii_C", rel_tol);
      auto& ix_c = track("ix_C", rel_tol);
      auto& xi_c = track("xi_C", rel_tol);
      for (const auto& e : evs) {
        const double r = e.r;
        const double r_gs = npow(r, beta), r_sp = npow(r, sp);
        const double mn = std::min(r_gs, r_sp);
        iii_c.le(0.5 * mn, e.v, r);
        iii_c.le(e.v, std::min(r_gs, 2.0 * c_p * r_sp), r);
        vii_c.le(0.5 * beta * mn, r * e.v1, r);
        vii_c.le(r * e.v1, beta * mn, r);
        const double cap = std::min(1.0, npow(r, -m));
        viii_c.le(npow(0.5 * beta, k) * cap, e.power_v1k_r, r);
        viii_c.le(e.power_v1k_r, npow(beta, k) * cap, r);
        ix_c.le(1.0 / sig, e.ratio_rv2_v1, r);
        ix_c.le(e.ratio_rv2_v1, beta - 1.0, r);
        if (r >= 1.0) {
          xi_c.le(1.0 / (beta * sig * r_sp), e.ratio_v2_v1sq, r);
          xi_c.le(e.ratio_v2_v1sq, 2.0 / r_sp, r);
        }
      }
      break;
    }
    case AuxCase::FreePair:
      break;
  }

  for (auto& t : T) report.items.push_back(t.finish());
  report.all_pass = true;
  for (const auto& item : report.items) report.all_pass = report.all_pass && item.pass;
  return report;
}

}  // namespace plb
