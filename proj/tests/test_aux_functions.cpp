#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "plb/aux_functions.hpp"

using namespace plb;

namespace {

// Independent closed form for the exponent pair (beta, beta_bar) = (2.2, 1.1),
// i.e. p = 1/2:  with s = r^{beta/2},
//   v(r) = \int_0^{s^2} dtau / (1 + sqrt(tau)) = 2s - 2 log(1 + s).
double closed_v_p_half(double r, double beta) {
  const double s = std::pow(r, beta / 2.0);
  return 2.0 * s - 2.0 * std::log1p(s);
}

}  // namespace

TEST_CASE("profile selection by gradient degree and forcing exponent") {
  // k = 1, small forcing: interpolating profile just under quadratic growth.
  auto a = make_aux_params(1.0, 0.0, 0.05);
  CHECK(a.case_tag == AuxCase::A);
  CHECK(a.beta == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(a.beta_bar == doctest::Approx(1.95).epsilon(1e-15));
  CHECK(a.p == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(a.c_p == doctest::Approx(1.0 / 1.95).epsilon(1e-14));
  CHECK(a.epsilon == doctest::Approx(0.05));
  CHECK(a.k == 1.0);

  // k > 1, forcing exponent at or below gamma = k + 1: pure monomial.
  auto b = make_aux_params(2.0, 3.0, 0.0);
  CHECK(b.case_tag == AuxCase::B);
  CHECK(b.beta == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(b.beta_bar == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(b.p == 0.0);
  CHECK(b.c_p == doctest::Approx(0.5).epsilon(1e-15));

  // Forcing exponent above gamma: interpolating profile, either k.
  auto c = make_aux_params(2.0, 6.0, 0.0);
  CHECK(c.case_tag == AuxCase::C);
  CHECK(c.beta == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c.beta_bar == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(c.p == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(c.c_p == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(c.sigma == doctest::Approx(6.0));

  auto c1 = make_aux_params(1.0, 4.0, 0.0);
  CHECK(c1.case_tag == AuxCase::C);
  CHECK(c1.beta == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c1.beta_bar == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(c1.p == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  auto a2 = make_aux_params(1.0, 1.5, 0.1);
  CHECK(a2.case_tag == AuxCase::A);
  CHECK(a2.beta_bar == doctest::Approx(1.9).epsilon(1e-15));

  auto b2 = make_aux_params(3.0, 2.0, 0.0);
  CHECK(b2.case_tag == AuxCase::B);
  CHECK(b2.beta == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  // Exponent-gap validation for the k = 1 interpolating profile.
  CHECK_THROWS_AS(make_aux_params(1.0, 0.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(make_aux_params(1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_aux_params(1.0, 0.0, 0.125), std::invalid_argument);
  CHECK_THROWS_AS(make_aux_params(1.0, 1.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(make_aux_params(1.0, 2.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_aux_params(0.5, 0.0, 0.05), std::invalid_argument);

  // Free pairs need 1 < beta_bar < beta.
  auto f = free_pair(2.2, 1.1);
  CHECK(f.case_tag == AuxCase::FreePair);
  CHECK(f.p == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f.c_p == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(free_pair(1.5, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(free_pair(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(free_pair(2.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(free_pair(1.0, 1.2), std::invalid_argument);
}

TEST_CASE("quadrature profile matches the p = 1/2 closed form") {
  AuxFn fn(free_pair(2.2, 1.1));
  // Frozen value at r = 1 (upper limit of the inner integral is 1):
  // 2 - 2 log 2.
  CHECK(fn.v(1.0) == doctest::Approx(0.6137056388801094).epsilon(1e-12));
  for (double r : {0.05, 0.3, 1.0, 2.5, 17.0, 800.0}) {
    const double want = closed_v_p_half(r, 2.2);
    CHECK(fn.v(r) == doctest::Approx(want).epsilon(1e-11));
  }
  CHECK(fn.v(0.0) == 0.0);
}

TEST_CASE("derivatives agree with difference quotients of the integral") {
  for (auto params : {make_aux_params(1.0, 0.0, 0.05),
                      make_aux_params(2.0, 6.0, 0.0),
                      free_pair(2.5, 1.3)}) {
    AuxFn fn(params);
    for (double r : {0.3, 1.0, 2.7, 15.0}) {
      const double h = 1e-4 * r;
      const double fd1 = (fn.v(r + h) - fn.v(r - h)) / (2.0 * h);
      CHECK(fn.v1(r) == doctest::Approx(fd1).epsilon(5e-7));
      const double h2 = 1e-6 * r;
      const double fd2 = (fn.v1(r + h2) - fn.v1(r - h2)) / (2.0 * h2);
      CHECK(fn.v2(r) == doctest::Approx(fd2).epsilon(1e-7));
    }
  }
}

TEST_CASE("curvature-over-slope-squared splits into the two power terms") {
  // v''/v'^2 = (beta-1)/(beta r^beta) + (beta_bar-1)/(beta r^beta_bar),
  // exactly, for every interpolating profile.
  for (auto params : {make_aux_params(1.0, 0.0, 0.05),
                      make_aux_params(2.0, 6.0, 0.0),
                      make_aux_params(1.0, 4.0, 0.0),
                      free_pair(2.2, 1.1), free_pair(3.0, 1.01)}) {
    AuxFn fn(params);
    const double beta = params.beta, bb = params.beta_bar;
    for (double r : {0.5, 1.0, 2.0, 10.0}) {
      const auto e = fn.eval(r);
      const double rhs = (beta - 1.0) / (beta * std::pow(r, beta)) +
                         (bb - 1.0) / (beta * std::pow(r, bb));
      const double scale = std::max({1.0, std::abs(e.ratio_v2_v1sq), rhs});
      CHECK(std::abs(e.ratio_v2_v1sq - rhs) / scale <= 1e-12);
    }
  }
}

TEST_CASE("evaluation bundle is consistent and handles the origin") {
  AuxFn fn(make_aux_params(2.0, 6.0, 0.0));  // interpolating, k = 2
  auto e = fn.eval(2.0);
  CHECK(e.r == 2.0);
  CHECK(e.v == doctest::Approx(fn.v(2.0)));
  CHECK(e.v1 == doctest::Approx(fn.v1(2.0)));
  CHECK(e.v2 == doctest::Approx(fn.v2(2.0)));
  CHECK(e.ratio_rv2_v1 == doctest::Approx(2.0 * e.v2 / e.v1));
  CHECK(e.ratio_v2_v1sq == doctest::Approx(e.v2 / (e.v1 * e.v1)));
  CHECK(e.power_v1k_r == doctest::Approx(std::pow(e.v1, 2.0) / 2.0));

  // Monomial profile at the origin: finite limits everywhere they exist.
  AuxFn mono(make_aux_params(2.0, 3.0, 0.0));  // v = r^{3/2}, k = 2
  auto z = mono.eval(0.0);
  CHECK(z.v == 0.0);
  CHECK(z.v1 == 0.0);
  CHECK(z.ratio_rv2_v1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(z.power_v1k_r == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(std::isinf(z.ratio_v2_v1sq));

  // Quadratic-growth profile at the origin: v'' tends to beta(beta-1) = 2.
  AuxFn qa(make_aux_params(1.0, 0.0, 0.05));
  auto z2 = qa.eval(0.0);
  CHECK(z2.v2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(z2.ratio_rv2_v1 == doctest::Approx(1.0).epsilon(1e-14));
  // k beta - gamma = 0 here too, so the limit is beta^k = v''(0).
  CHECK(z2.power_v1k_r == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("two-sided envelope report passes on the standard grid") {
  const auto grid = log_grid(1e-3, 1e3, 64);
  for (auto params : {make_aux_params(1.0, 0.0, 0.05),
                      make_aux_params(1.0, 1.5, 0.1),
                      make_aux_params(2.0, 3.0, 0.0),
                      make_aux_params(3.0, 2.0, 0.0),
                      make_aux_params(2.0, 6.0, 0.0),
                      make_aux_params(1.0, 4.0, 0.0)}) {
    AuxFn fn(params);
    auto report = aux_bounds_check(fn, grid, 10.0);
    INFO("case ", to_string(params.case_tag), " beta=", params.beta,
         " beta_bar=", params.beta_bar);
    for (const auto& item : report.items) {
      INFO("item ", item.item, " slack ", item.worst_slack, " at r=",
           item.r_at_worst);
      CHECK(item.pass);
    }
    CHECK(report.all_pass);
  }
}

TEST_CASE("envelope report covers random exponent pairs") {
  const auto grid = log_grid(1e-3, 1e3, 48);
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> ub(1.05, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    double beta = ub(rng);
    double beta_bar = 1.0 + (beta - 1.0) * std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    AuxFn fn(free_pair(beta, beta_bar));
    auto report = aux_bounds_check(fn, grid, 10.0);
    INFO("beta=", beta, " beta_bar=", beta_bar);
    for (const auto& item : report.items) {
      INFO("item ", item.item, " slack ", item.worst_slack, " at r=",
           item.r_at_worst);
      CHECK(item.pass);
    }
    CHECK(report.all_pass);
  }
}

TEST_CASE("report lookup and determinism") {
  AuxFn fn(make_aux_params(2.0, 6.0, 0.0));
  const auto grid = log_grid(1e-3, 1e3, 32);
  auto r1 = aux_bounds_check(fn, grid, 10.0);
  auto r2 = aux_bounds_check(fn, grid, 10.0);
  REQUIRE(r1.items.size() == r2.items.size());
  for (size_t i = 0; i < r1.items.size(); ++i) {
    CHECK(r1.items[i].worst_slack == r2.items[i].worst_slack);
    CHECK(r1.items[i].r_at_worst == r2.items[i].r_at_worst);
  }
  CHECK(r1.find("ix") != nullptr);
  CHECK(r1.find("no-such-item") == nullptr);
  // The far-field ratio bound has strictly positive slack for this profile.
  const auto* xi = r1.find("xi");
  REQUIRE(xi != nullptr);
  CHECK(xi->worst_slack > 0.0);
}
