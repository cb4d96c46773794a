#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "plb/transform.hpp"

using namespace plb;

TEST_CASE("linear nonlinearity integrates to the exponential") {
  TransformInput in;
  in.f = [](double s) { return s; };
  in.df = [](double) { return 1.0; };
  in.k = 2.0;
  in.tau_min = -2.0;
  in.tau_max = 2.0;
  PhiTransform tr(in);

  for (double tau : {-2.0, -1.3, 0.0, 0.8, 2.0}) {
    CHECK(tr.phi(tau) == doctest::Approx(std::exp(tau)).epsilon(1e-7));
    CHECK(tr.dphi(tau) == doctest::Approx(std::exp(tau)).epsilon(1e-7));
    CHECK(tr.Z(tau) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(tr.analytic_z());
  CHECK_THROWS_AS(tr.phi(2.5), std::domain_error);
  CHECK_THROWS_AS(tr.phi(-2.5), std::domain_error);
}

TEST_CASE("square-root nonlinearity integrates to the shifted parabola") {
  TransformInput in;
  in.f = [](double s) { return std::sqrt(s); };
  in.df = [](double s) { return 0.5 / std::sqrt(s); };
  in.k = 2.0;
  in.tau_min = -1.5;
  in.tau_max = 3.0;
  PhiTransform tr(in);

  for (double tau : {-1.0, 0.0, 0.4, 2.7}) {
    const double want = (tau / 2.0 + 1.0) * (tau / 2.0 + 1.0);
    CHECK(tr.phi(tau) == doctest::Approx(want).epsilon(1e-7));
    // Z = (1/2) phi^{-1/2} for this nonlinearity.
    CHECK(tr.Z(tau) ==
          doctest::Approx(0.5 / (tau / 2.0 + 1.0)).epsilon(1e-7));
    // Z is the logarithmic derivative of phi', whatever the nonlinearity.
    const double h = 1e-5;
    const double fd =
        (std::log(tr.dphi(tau + h)) - std::log(tr.dphi(tau - h))) / (2.0 * h);
    CHECK(tr.Z(tau) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("difference-quotient fallback matches the analytic ratio") {
  TransformInput base;
  base.f = [](double s) { return std::sqrt(s); };
  base.df = [](double s) { return 0.5 / std::sqrt(s); };
  base.k = 2.0;
  base.tau_min = -1.0;
  base.tau_max = 2.0;
  PhiTransform analytic(base);

  TransformInput no_df = base;
  no_df.df = nullptr;
  PhiTransform fallback(no_df);
  CHECK(!fallback.analytic_z());

  for (double tau : {-0.6, 0.0, 1.1, 1.9}) {
    CHECK(fallback.Z(tau) == doctest::Approx(analytic.Z(tau)).epsilon(1e-5));
  }
}

TEST_CASE("power nonlinearity with cubic slope degree is also exponential") {
  // f(s) = s^2 with k = 3 gives phi' = phi, independently of the k = 2 route.
  TransformInput in;
  in.f = [](double s) { return s * s; };
  in.df = [](double s) { return 2.0 * s; };
  in.k = 3.0;
  in.tau_min = -1.0;
  in.tau_max = 1.5;
  PhiTransform tr(in);
  for (double tau : {-0.9, 0.0, 1.4}) {
    CHECK(tr.phi(tau) == doctest::Approx(std::exp(tau)).epsilon(1e-7));
    CHECK(tr.Z(tau) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("degenerate degree-one branch is the exact exponential") {
  TransformInput in;
  in.f = [](double s) { return 123.0 * s; };  // ignored on this branch
  in.k = 1.0;
  in.k_is_one = true;
  in.tau_min = -4.0;
  in.tau_max = 4.0;
  PhiTransform tr(in);
  for (double tau : {-4.0, -0.5, 0.0, 3.3}) {
    CHECK(tr.phi(tau) == std::exp(tau));
    CHECK(tr.dphi(tau) == std::exp(tau));
    CHECK(tr.Z(tau) == 1.0);
  }
}

TEST_CASE("shifted base point and scale") {
  TransformInput in;
  in.f = [](double s) { return s; };
  in.df = [](double) { return 1.0; };
  in.k = 2.0;
  in.tau0 = 1.0;
  in.phi0 = 2.0;
  in.tau_min = 0.0;
  in.tau_max = 2.0;
  PhiTransform tr(in);
  for (double tau : {0.0, 1.0, 1.7}) {
    CHECK(tr.phi(tau) == doctest::Approx(2.0 * std::exp(tau - 1.0)).epsilon(1e-7));
  }
}

TEST_CASE("state-coefficient bundle has the right pinch") {
  TransformInput in;
  in.f = [](double s) { return std::sqrt(s); };
  in.df = [](double s) { return 0.5 / std::sqrt(s); };
  in.k = 2.0;
  in.tau_min = 0.0;
  in.tau_max = 3.0;
  PhiTransform tr(in);

  auto zp = tr.z_profile();
  // phi runs over [1, 6.25] so Z = phi^{-1/2}/2 runs over [0.2, 0.5].
  CHECK(zp.ell == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(zp.L == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(zp.fn(0.0) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(zp.fn(3.0) == doctest::Approx(0.2).epsilon(1e-7));
  // Constant extrapolation outside the tabulated window.
  CHECK(zp.fn(-1.0) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(zp.fn(10.0) == doctest::Approx(0.2).epsilon(1e-7));
}

TEST_CASE("concavity screen separates admissible nonlinearities") {
  auto sqrt_f = [](double s) { return std::sqrt(s); };
  auto lin_f = [](double s) { return s; };
  auto sq_f = [](double s) { return s * s; };

  auto ok = concavity_check(sqrt_f, 2.0, 0.1, 4.0, 256);
  CHECK(ok.concave);
  auto affine = concavity_check(lin_f, 2.0, 0.1, 4.0, 256);
  CHECK(affine.concave);
  // s^2 with k = 2 effectively transforms with slope s^2: convex, rejected.
  auto bad = concavity_check(sq_f, 2.0, 0.1, 4.0, 256);
  CHECK(!bad.concave);
  CHECK(bad.worst_gap > 0.0);
  // The same f is fine at k = 3, where the effective slope is |s|.
  auto good_k3 = concavity_check(sq_f, 3.0, 0.1, 4.0, 256);
  CHECK(good_k3.concave);
}

TEST_CASE("invalid inputs are rejected") {
  TransformInput in;
  in.f = [](double s) { return s; };
  in.k = 2.0;
  in.tau_min = 1.0;
  in.tau_max = -1.0;
  CHECK_THROWS_AS(PhiTransform{in}, std::invalid_argument);

  TransformInput neg;
  neg.f = [](double s) { return s - 10.0; };  // negative at phi0 = 1
  neg.k = 2.0;
  CHECK_THROWS_AS(PhiTransform{neg}, std::invalid_argument);

  TransformInput k1bad;
  k1bad.f = [](double s) { return s; };
  k1bad.k = 1.0;  // k == 1 requires the explicit flag
  CHECK_THROWS_AS(PhiTransform{k1bad}, std::invalid_argument);
}

TEST_CASE("inverse round-trips through the change of variables") {
  TransformInput exp_in;
  exp_in.k = 1.0;
  exp_in.k_is_one = true;
  PhiTransform exact{exp_in};
  CHECK(exact.inv(1.0) == doctest::Approx(0.0));
  CHECK(exact.inv(std::exp(1.7)) == doctest::Approx(1.7).epsilon(1e-12));
  CHECK_THROWS_AS(exact.inv(-1.0), std::domain_error);

  // f(s) = s with k = 2 integrates to the exponential numerically.
  TransformInput lin;
  lin.f = [](double s) { return s; };
  lin.df = [](double) { return 1.0; };
  lin.k = 2.0;
  PhiTransform tab{lin};
  for (double tau : {-2.5, -0.3, 0.0, 0.9, 2.8}) {
    CHECK(tab.inv(tab.phi(tau)) == doctest::Approx(tau).epsilon(1e-10));
  }
  for (double u : {0.2, 0.7, 1.0, 3.5, 12.0}) {
    CHECK(tab.phi(tab.inv(u)) == doctest::Approx(u).epsilon(1e-10));
  }
  CHECK_THROWS_AS(tab.inv(1e9), std::domain_error);
}
