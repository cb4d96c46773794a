#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "plb/aux_functions.hpp"
#include "plb/operators.hpp"
#include "plb/problem.hpp"
#include "plb/radial_calculus.hpp"

using namespace plb;

namespace {

// Closed forms for the (beta, beta_bar) = (2.2, 1.1) profile, p = 1/2.
double cv(double r) {
  double s = std::pow(r, 1.1);
  return 2.0 * s - 2.0 * std::log1p(s);
}
double cv1(double r) {
  return 2.2 * std::pow(r, 1.2) / (1.0 + std::pow(r, 1.1));
}
double cv2(double r) {
  double rp = std::pow(r, 1.1);
  return 2.2 * std::pow(r, 0.2) * (1.2 + 0.1 * rp) / ((1.0 + rp) * (1.0 + rp));
}

ProblemSpec heat_like(double z0, double chi0, double sigma) {
  ProblemSpec ps;
  ps.op = make_operator("p_laplacian", {.n = 2});
  ps.Z = ZProfile::constant(z0);
  ps.chi = ChiProfile::constant(chi0);
  ps.sigma = sigma;
  return ps;
}

}  // namespace

TEST_CASE("assembled residual matches a hand computation for the Laplacian") {
  auto ps = heat_like(0.8, 1.2, 2.0);
  RadialProfile prof;
  prof.m = 0.3;
  prof.sign = +1.0;
  prof.a = 0.5;
  prof.b = 2.0;
  prof.kappa = kappa_one_plus_t();
  prof.slope = slope_from_aux(AuxFn(free_pair(2.2, 1.1)));

  for (double r : {0.4, 1.7, 12.0}) {
    for (double t : {0.0, 0.3}) {
      const double kap = 1.0 + t;
      const double w = 0.3 + 0.5 * t + 2.0 * kap * cv(r);
      const double wr = 2.0 * kap * cv1(r);
      const double wrr = 2.0 * kap * cv2(r);
      const double wt = 0.5 + 2.0 * cv(r);
      const double want =
          wrr + wr / r + 0.8 * wr * wr + 1.2 * wr * wr - wt;

      auto out = residual_at(ps, prof, r, t, RadialMode::direct);
      CHECK(out.w == doctest::Approx(w).epsilon(1e-11));
      CHECK(out.w_r == doctest::Approx(wr).epsilon(1e-11));
      CHECK(out.w_t == doctest::Approx(wt).epsilon(1e-11));
      CHECK(out.residual == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("descending profile matches a hand computation") {
  auto ps = heat_like(0.5, 0.7, 1.5);
  RadialProfile prof;
  prof.m = 1.0;
  prof.sign = -1.0;
  prof.a = 0.4;
  prof.b = 0.9;
  prof.kappa = kappa_one();
  prof.slope = slope_from_aux(AuxFn(free_pair(2.2, 1.1)));

  const double r = 1.3, t = 0.25;
  const double wr = -0.9 * cv1(r);
  const double wrr = -0.9 * cv2(r);
  const double want = wrr + wr / r + 0.5 * wr * wr +
                      0.7 * std::pow(std::abs(wr), 1.5) - (-0.4);
  auto out = residual_at(ps, prof, r, t, RadialMode::direct);
  CHECK(out.w_r == doctest::Approx(wr).epsilon(1e-11));
  CHECK(out.residual == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("factored evaluations agree with direct assembly") {
  OperatorParams pp;
  std::vector<OperatorDescriptor> ops = {
      make_operator("p_laplacian", {.n = 2}),
      make_operator("p_laplacian", {.n = 3, .p = 3.0}),
      make_operator("infinity_laplacian", {.n = 2}),
      make_operator("pucci_min", {.n = 2}),
  };
  for (const auto& op : ops) {
    for (double sigma : {0.0, 2.5}) {
      ProblemSpec ps;
      ps.op = op;
      ps.Z = ZProfile::clamped_linear(2.0, 0.1, 0.5);
      ps.chi = ChiProfile::linear(0.3, 0.8, 1.0);
      ps.sigma = sigma;

      RadialProfile prof;
      prof.m = -0.2;
      prof.sign = +1.0;
      prof.a = 0.7;
      prof.b = 1.3;
      prof.kappa = kappa_one_plus_t();
      prof.slope = slope_from_aux(AuxFn(free_pair(2.3, 1.4)));

      for (double r : {1e-3, 0.04, 1.0, 37.0, 900.0}) {
        for (double t : {0.0, 0.6}) {
          auto d = residual_at(ps, prof, r, t, RadialMode::direct);
          auto s = residual_at(ps, prof, r, t, RadialMode::small_r);
          auto l = residual_at(ps, prof, r, t, RadialMode::large_r);
          const double scale =
              std::max({1.0, std::abs(d.residual), std::abs(s.residual)});
          INFO("op=", op.name, " sigma=", sigma, " r=", r, " t=", t);
          CHECK(std::abs(d.residual - s.residual) / scale <= 1e-9);
          CHECK(std::abs(d.residual - l.residual) / scale <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("factored evaluations agree for descending profiles") {
  for (const auto& name : {"p_laplacian", "pseudo_p_laplacian", "infinity_laplacian"}) {
    OperatorParams par;
    par.n = 2;
    par.p = 3.0;
    ProblemSpec ps;
    ps.op = make_operator(name, par);
    ps.Z = ZProfile::clamped_linear(1.5, 0.2, 0.6);
    ps.chi = ChiProfile::constant(0.4);
    ps.sigma = 1.0;

    RadialProfile prof;
    prof.m = 2.0;
    prof.sign = -1.0;
    prof.a = 0.3;
    prof.b = 0.8;
    prof.kappa = kappa_one();
    prof.slope = slope_from_aux(AuxFn(make_aux_params(2.0, 6.0, 0.0)));

    for (double r : {0.3, 1.0, 5.0, 80.0}) {
      auto d = residual_at(ps, prof, r, 0.5, RadialMode::direct);
      auto n = residual_at(ps, prof, r, 0.5, RadialMode::negative_slope);
      auto l = residual_at(ps, prof, r, 0.5, RadialMode::large_r);
      const double scale = std::max({1.0, std::abs(d.residual)});
      INFO("op=", name, " r=", r);
      CHECK(std::abs(d.residual - n.residual) / scale <= 1e-9);
      CHECK(std::abs(d.residual - l.residual) / scale <= 1e-9);
    }
  }
}

TEST_CASE("mode preconditions are enforced") {
  auto ps = heat_like(1.0, 0.0, 0.0);
  RadialProfile up;
  up.sign = +1.0;
  up.a = 0.1;
  up.b = 1.0;
  up.kappa = kappa_one();
  up.slope = slope_from_aux(AuxFn(free_pair(2.2, 1.1)));
  RadialProfile down = up;
  down.sign = -1.0;

  CHECK_THROWS_AS(residual_at(ps, down, 1.0, 0.0, RadialMode::small_r),
                  std::domain_error);
  CHECK_THROWS_AS(residual_at(ps, up, 1.0, 0.0, RadialMode::negative_slope),
                  std::domain_error);
  CHECK_THROWS_AS(residual_at(ps, up, 0.0, 0.0, RadialMode::direct),
                  std::domain_error);
}

TEST_CASE("center limit: quadratic slope under the Laplacian") {
  auto ps = heat_like(1.0, 0.0, 0.0);
  ps.chi = ChiProfile::constant(0.9);
  RadialProfile prof;
  prof.sign = +1.0;
  prof.a = 0.6;
  prof.b = 1.4;
  prof.kappa = kappa_one_plus_t();
  prof.slope = slope_from_aux(AuxFn(make_aux_params(1.0, 0.0, 0.05)));

  for (double t : {0.0, 0.8}) {
    // Near r = 0 the slope profile is r^2, so the operator part tends to
    // b kappa v''(0) * n = 1.4 kappa * 2 * 2; sigma = 0 keeps the forcing.
    const double want = 1.4 * (1.0 + t) * 4.0 + 0.9 - 0.6;
    auto lim = residual_at(ps, prof, 0.0, t, RadialMode::r0_limit);
    CHECK(lim.residual == doctest::Approx(want).epsilon(1e-12));
    // This slope approaches its center behaviour only like r^epsilon, so an
    // astronomically small radius is needed to see the limit.
    auto near = residual_at(ps, prof, 1e-100, t, RadialMode::direct);
    CHECK(near.residual == doctest::Approx(lim.residual).epsilon(1e-4));
  }
}

TEST_CASE("center limit: monomial slope under the 3-Laplacian") {
  OperatorParams par;
  par.n = 2;
  par.p = 3.0;
  ProblemSpec ps;
  ps.op = make_operator("p_laplacian", par);
  ps.Z = ZProfile::constant(1.0);
  ps.chi = ChiProfile::constant(0.5);
  ps.sigma = 2.0;  // positive exponent: forcing vanishes at the center

  RadialProfile up;
  up.sign = +1.0;
  up.a = 0.3;
  up.b = 1.1;
  up.kappa = kappa_one();
  up.slope = slope_from_aux(AuxFn(make_aux_params(2.0, 3.0, 0.0)));

  // (v')^k / r -> (3/2)^2 = 2.25 and r v''/v' -> 1/2, so the operator part is
  // b^2 * 2.25 * H(e, I - e x e / 2) with H(e, M) = tr M + (p-2) <M e, e>.
  const double h_up = 1.5 + 0.5;
  const double want_up = 1.1 * 1.1 * 2.25 * h_up - 0.3;
  auto lim_up = residual_at(ps, up, 0.0, 0.0, RadialMode::r0_limit);
  CHECK(lim_up.residual == doctest::Approx(want_up).epsilon(1e-12));
  auto near_up = residual_at(ps, up, 1e-6, 0.0, RadialMode::direct);
  CHECK(near_up.residual == doctest::Approx(want_up).epsilon(1e-5));

  RadialProfile down = up;
  down.sign = -1.0;
  // Descending branch: H(-e, e x e / 2 - I) = -1.5 - 0.5 = -2.
  const double want_down = 1.1 * 1.1 * 2.25 * (-2.0) + 0.3;
  auto lim_down = residual_at(ps, down, 0.0, 0.0, RadialMode::r0_limit);
  CHECK(lim_down.residual == doctest::Approx(want_down).epsilon(1e-12));
  auto near_down = residual_at(ps, down, 1e-6, 0.0, RadialMode::direct);
  CHECK(near_down.residual == doctest::Approx(want_down).epsilon(1e-5));
}

TEST_CASE("center limit: steep and shallow slopes") {
  auto ps = heat_like(1.0, 0.3, 0.0);
  RadialProfile prof;
  prof.sign = +1.0;
  prof.a = 0.2;
  prof.b = 1.0;
  prof.kappa = kappa_one();

  // Slope grows faster than r^{gamma/k}: operator part vanishes.
  prof.slope = slope_from_aux(AuxFn(free_pair(3.0, 2.0)));
  auto lim = residual_at(ps, prof, 0.0, 0.0, RadialMode::r0_limit);
  CHECK(lim.residual == doctest::Approx(0.3 - 0.2).epsilon(1e-12));

  // Slope grows slower: the limit diverges and evaluation refuses.
  prof.slope = slope_from_aux(AuxFn(free_pair(1.5, 1.2)));
  CHECK_THROWS_AS(residual_at(ps, prof, 0.0, 0.0, RadialMode::r0_limit),
                  std::domain_error);
}
