#include "plb/barriers_super.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "barrier_selection.hpp"

namespace plb {

using detail::bisect_slope_cap;

SuperBarrier build_super(const ProblemSpec& ps, const SuperBarrierInputs& in) {
  ps.validate();
  const auto hp = ps.homogeneity();
  const double k = hp.k, gamma = hp.gamma, gs = hp.gamma_star;
  const double sigma = ps.sigma;
  const double T = ps.T;
  const double alpha = ps.chi.alpha;
  const bool degree_one = hp.k1 == 0.0;

  SpectralEnvelopes env(ps.op, EnvelopeOptions{.L = ps.Z.L, .T = T});
  const EnvelopeReport er = env.report();
  const double M_bar = er.M_bar, M11 = er.M11;
  const double E = gs * (1.0 + T);

  const double eps =
      in.epsilon > 0.0 ? in.epsilon : (sigma == 0.0 ? 1.0 / 16.0 : sigma / 16.0);
  AuxFnParams aux = make_aux_params(k, sigma, eps);
  AuxFn fn(aux);

  // Case selection: the admissible slope-scale cap never depends on b, so it
  // is fixed first; the split radius may depend on the resolved b.
  std::string tag;
  double cap = 1.0;
  if (sigma > gamma) {
    tag = "super/II";
    if (!degree_one)
      cap = std::min(1.0, bisect_slope_cap(E, gamma, M_bar, alpha, sigma, k,
                                     0.5 * aux.c_p));
    else if (alpha > 0.0)
      cap = std::min(
          1.0, std::pow(aux.c_p / (4.0 * alpha * std::pow(E, sigma)),
                        1.0 / (sigma - 1.0)));
  } else if (degree_one) {
    tag = sigma == 0.0 ? "super/I.i.a" : "super/I.i.b";
  } else if (sigma == 0.0) {
    tag = "super/I.ii.1";
    cap = std::min(1.0, std::pow(std::pow(E, gamma) * M_bar,
                                 -1.0 / (k - 1.0)));
  } else if (sigma > 1.0) {
    tag = "super/I.ii.2";
    cap = std::min(1.0, bisect_slope_cap(E, gamma, M_bar, alpha, sigma, k, 0.5));
  } else {
    tag = "super/I.ii.3";
    cap = std::min(1.0, std::pow(4.0 * std::pow(E, gamma) * M_bar,
                                 -1.0 / (k - 1.0)));
  }

  double b = in.b;
  if (b > 0.0) {
    if (b > cap) throw BParameterTooLarge(b, cap);
  } else {
    b = std::min(0.25, 0.5 * cap);
  }

  double R = 1.0;
  if (sigma > gamma) {
    if (degree_one)
      R = std::max(1.0, std::pow(4.0 * std::pow(E, gamma) * M_bar / aux.c_p,
                                 (sigma - 1.0) / (sigma - gamma)));
  } else if (degree_one) {
    if (sigma == 0.0) {
      R = std::pow(std::max(1.0, 8.0 * sqr(1.0 + T) * M_bar), 1.0 / eps);
    } else {
      const double P = 4.0 * sqr(1.0 + T) * M_bar;
      const double Q = alpha * std::pow(2.0 * (1.0 + T), sigma);
      if (sigma < 1.0)
        R = std::max({1.0, std::pow(2.0 * (1.0 + P), 1.0 / eps),
                      std::pow(2.0 * Q * std::pow(b, sigma - 1.0),
                               1.0 / ((2.0 - sigma) * (1.0 - eps)))});
      else
        R = std::max(1.0, std::pow(2.0 * P + 2.0 * Q, 1.0 / eps));
    }
  } else if (tag == "super/I.ii.3") {
    R = std::max(1.0, std::pow(4.0 * alpha * std::pow(E, sigma) *
                                   std::pow(b, sigma - 1.0),
                               k / (gamma - sigma)));
  }

  // Inner-region need plus forcing need plus the outer-region carry: the
  // carry covers the gap between b v(r) and its power-law minorant past R.
  const double s_chi = sigma > gamma ? sigma / (sigma - 1.0) : sigma / k;
  const double inner = std::pow(b * gs * (1.0 + T), k) * M11 * std::pow(R, gs);
  const double forcing = alpha * pow_sigma(b * E, sigma) * std::pow(R, s_chi);
  double extra = 0.0;
  if (sigma > gamma)
    extra = aux.c_p * b * std::pow(R, aux.beta_bar);
  else if (degree_one)
    extra = 0.5 * b * std::pow(R, aux.beta_bar);
  const double a = inner + forcing + extra;

  SuperBarrier sb;
  sb.case_tag = tag;
  sb.profile.m = in.nu;
  sb.profile.sign = +1.0;
  sb.profile.a = a;
  sb.profile.b = b;
  sb.profile.kappa = kappa_one_plus_t();
  sb.profile.slope = slope_from_aux(fn);
  sb.aux = aux;
  sb.envelopes = er;
  sb.R = R;
  sb.a = a;
  sb.b = b;
  sb.b_cap = cap;
  sb.E = E;
  sb.alpha = alpha;
  sb.sigma = sigma;
  sb.extra = extra;
  return sb;
}

double super_chain_bound(const SuperBarrier& sb, double r) {
  const EnvelopeReport& er = sb.envelopes;
  const double oT = 1.0 + er.T;
  const double v = sb.profile.slope.v(r);
  const double v1 = sb.profile.slope.v1(r);
  const double chi_part = sb.alpha * pow_sigma(sb.b * oT * v1, sb.sigma);
  double h_part;
  if (r <= sb.R)
    h_part = std::pow(sb.b * er.gamma_star * oT, er.k) * er.M11 *
             std::pow(sb.R, er.gamma_star);
  else
    h_part = std::pow(sb.b, er.k) * std::pow(oT * v1, er.gamma) * er.M_bar;
  return h_part + chi_part - sb.a - sb.b * v;
}

BarrierCheckReport super_residual_check(const ProblemSpec& ps,
                                        const SuperBarrier& sb,
                                        const std::vector<double>& r_grid,
                                        const std::vector<double>& t_grid,
                                        double tol) {
  BarrierCheckReport rep;
  rep.tol = tol;
  rep.max_residual = -std::numeric_limits<double>::infinity();
  rep.max_bound = -std::numeric_limits<double>::infinity();
  rep.worst_dominance = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double r : r_grid) {
    const double bound = super_chain_bound(sb, r);
    if (bound > rep.max_bound) {
      rep.max_bound = bound;
      rep.r_at_max_bound = r;
    }
    ok = ok && rel_slack(bound, 0.0) >= -tol;
    for (double t : t_grid) {
      const auto mode = r == 0.0 ? RadialMode::r0_limit : RadialMode::direct;
      const double res = residual_at(ps, sb.profile, r, t, mode).residual;
      if (res > rep.max_residual) {
        rep.max_residual = res;
        rep.r_at_max_residual = r;
        rep.t_at_max_residual = t;
      }
      const double dom = rel_slack(res, bound);
      if (dom < rep.worst_dominance) {
        rep.worst_dominance = dom;
        rep.r_at_worst_dominance = r;
      }
      ok = ok && rel_slack(res, 0.0) >= -tol && dom >= -tol;
      ++rep.points;
    }
  }
  rep.pass = ok && rep.points > 0;
  return rep;
}

ALimitStudy a_limit_study(const ProblemSpec& ps, const SuperBarrierInputs& in,
                          const std::vector<double>& bs) {
  ALimitStudy study;
  study.points.reserve(bs.size());
  for (double b : bs) {
    SuperBarrierInputs run = in;
    run.b = b;
    try {
      auto sb = build_super(ps, run);
      study.points.push_back({sb.b, sb.a, sb.R});
    } catch (const BParameterTooLarge& e) {
      study.skipped.push_back(b);
      study.note = "skipped b above the admissibility cap " +
                   std::to_string(e.bound);
    }
  }
  study.target = ps.sigma == 0.0 ? ps.chi.alpha : 0.0;
  if (!study.points.empty()) {
    study.tail_error = std::abs(study.points.back().a - study.target);
    study.pass = study.tail_error <= study.tail_tol;
  }
  return study;
}

}  // namespace plb
