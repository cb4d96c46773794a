#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "plb/quadrature.hpp"

using namespace plb;

TEST_CASE("polynomial and trig integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("substituted slope-profile integrand") {
  // int_0^X 2s/(1+s) ds = 2 (X - log(1+X)); at X=1 this is 2 - 2 log 2
  auto f = [](double s) { return 2.0 * s / (1.0 + s); };
  CHECK(integrate(f, 0.0, 1.0) ==
        doctest::Approx(0.6137056388801094).epsilon(1e-11));
  double X = 37.5;
  CHECK(integrate(f, 0.0, X) ==
        doctest::Approx(2.0 * (X - std::log1p(X))).epsilon(1e-12));
}

TEST_CASE("decade splitting handles huge ranges") {
  auto f = [](double s) { return 2.0 * s / (1.0 + s); };
  double X = 1e6;
  double closed = 2.0 * (X - std::log1p(X));
  CHECK(integrate_decades(f, X) == doctest::Approx(closed).epsilon(1e-12));
  X = 1e30;
  closed = 2.0 * (X - std::log1p(X));
  CHECK(integrate_decades(f, X) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("near-singular integrand stays within tolerance") {
  // int_0^{0.998} dt/(1 - t^2) = atanh(0.998)
  auto f = [](double t) { return 1.0 / (1.0 - t * t); };
  CHECK(integrate(f, 0.0, 0.998) ==
        doctest::Approx(std::atanh(0.998)).epsilon(1e-10));
}
