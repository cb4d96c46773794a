#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plb/operators.hpp"

using namespace plb;

namespace {

// Independent dense scan over the 2D unit circle; accuracy ~ dtheta^2.
template <class G>
double scan_min_n2(const G& g, int npts = 40001) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < npts; ++i) {
    double th = 2.0 * M_PI * i / npts;
    Vec e(2);
    e << std::cos(th), std::sin(th);
    best = std::min(best, g(e));
  }
  return best;
}

template <class G>
double scan_max_n2(const G& g, int npts = 40001) {
  return -scan_min_n2([&](const Vec& e) { return -g(e); }, npts);
}

Mat rank1(const Vec& e) { return e * e.transpose(); }

Vec unit2(double x, double y) {
  Vec e(2);
  e << x, y;
  return e / e.norm();
}

// Closed two-by-two eigenvalues, the oracle for the Pucci evaluator.
std::pair<double, double> eig2(const Mat& X) {
  double tr = X(0, 0) + X(1, 1);
  double det = X(0, 0) * X(1, 1) - X(0, 1) * X(1, 0);
  double d = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return {0.5 * tr - d, 0.5 * tr + d};
}

}  // namespace

TEST_CASE("evaluation guards") {
  auto lap = make_operator("p_laplacian", {.n = 2, .p = 2.0});
  Vec q(3);
  q << 1, 0, 0;
  Mat I2 = Mat::Identity(2, 2);
  CHECK_THROWS_AS(eval_operator(lap, q, I2), std::invalid_argument);
  Mat bad = I2;
  bad(0, 1) = 0.5;  // asymmetric
  Vec e1 = unit2(1, 0);
  CHECK_THROWS_AS(eval_operator(lap, e1, bad), std::invalid_argument);
  Mat nan = I2;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(eval_operator(lap, e1, nan), std::invalid_argument);
}

TEST_CASE("pointwise evaluation examples") {
  Mat I2 = Mat::Identity(2, 2);
  Vec e1 = unit2(1, 0);

  auto lap = make_operator("p_laplacian", {.n = 2, .p = 2.0});
  CHECK(eval_operator(lap, e1, I2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eval_operator(lap, e1, Mat::Zero(2, 2)) == 0.0);

  auto p3 = make_operator("p_laplacian", {.n = 2, .p = 3.0});
  // |q|^{p-2} (tr X + (p-2) <X qhat, qhat>), hand-evaluated
  Vec q(2);
  q << 2, 0;
  Mat X(2, 2);
  X << 3, 1, 1, -1;
  double expect = 2.0 * (2.0 + 1.0 * 3.0);
  CHECK(eval_operator(p3, q, X) == doctest::Approx(expect).epsilon(1e-14));
  // gradient degeneracy: value 0 at q = 0 for p > 2
  CHECK(eval_operator(p3, Vec::Zero(2), X) == 0.0);

  auto inf = make_operator("infinity_laplacian", {.n = 2});
  Mat D(2, 2);
  D << 3, 0, 0, 5;
  CHECK(eval_operator(inf, e1, D) == doctest::Approx(3.0).epsilon(1e-14));

  auto ps3 = make_operator("pseudo_p_laplacian", {.n = 2, .p = 3.0});
  Vec qp(2);
  qp << 1, -2;
  Mat Xp(2, 2);
  Xp << 2, 0.3, 0.3, 1;
  // (p-1) sum |q_i|^{p-2} X_ii = 2 (1*2 + 2*1)
  CHECK(eval_operator(ps3, qp, Xp) == doctest::Approx(8.0).epsilon(1e-14));

  // Pucci minimal vs the closed 2x2 eigenvalue oracle
  auto pm = make_operator("pucci_min", {.n = 2});
  Mat Xm(2, 2);
  Xm << 1.0, 0.7, 0.7, -2.0;
  auto [lo, hi] = eig2(Xm);
  double expect_pucci = 1.0 * std::max(hi, 0.0) + 2.0 * std::min(hi, 0.0) +
                        1.0 * std::max(lo, 0.0) + 2.0 * std::min(lo, 0.0);
  CHECK(eval_operator(pm, e1, Xm) ==
        doctest::Approx(expect_pucci).epsilon(1e-12));
}

// Structure conditions probed directly, independent of
// check_structure_conditions: ten thousand random triples per operator.
TEST_CASE("randomized structure oracle") {
  OperatorParams par;
  par.n = 2;
  par.p = 3.0;
  std::vector<OperatorDescriptor> ops = {
      make_operator("p_laplacian", par),
      make_operator("pseudo_p_laplacian", par),
      make_operator("infinity_laplacian", par),
      make_operator("pucci_min", par),
      make_operator("pucci_max", par),
  };
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> logsc(-1.0, 1.0);
  for (auto& op : ops) {
    CAPTURE(op.name);
    double worst_mono = 0, worst_zero = 0, worst_qh = 0, worst_xh = 0;
    for (int it = 0; it < 10000; ++it) {
      int n = op.dim;
      Vec q(n);
      for (int i = 0; i < n; ++i) q(i) = gauss(rng);
      q *= std::pow(10.0, logsc(rng));
      Mat A(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
      Mat X = 0.5 * (A + A.transpose());
      Mat G(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
      Mat P = G * G.transpose();

      double h0 = op.evaluate(q, X);
      double scale = std::max({1.0, std::abs(h0)});
      worst_zero = std::max(worst_zero, std::abs(op.evaluate(q, Mat::Zero(n, n))));
      worst_mono = std::max(worst_mono, (h0 - op.evaluate(q, X + P)) / scale);
      double th = 0.5 + 2.5 * std::abs(gauss(rng));
      worst_qh = std::max(worst_qh,
                          std::abs(op.evaluate(th * q, X) -
                                   std::pow(th, op.k1) * h0) / scale);
      worst_qh = std::max(worst_qh,
                          std::abs(op.evaluate(-q, X) - h0) / scale);
      worst_xh = std::max(worst_xh,
                          std::abs(op.evaluate(q, th * X) - th * h0) /
                              (scale * th));
    }
    CHECK(worst_zero == 0.0);
    CHECK(worst_mono <= 1e-10);
    CHECK(worst_qh <= 1e-9);
    CHECK(worst_xh <= 1e-9);
  }
}

TEST_CASE("structure report for conforming operators") {
  for (int n : {2, 3}) {
    for (double p : {2.0, 3.0, 4.0}) {
      auto op = make_operator("p_laplacian", {.n = n, .p = p});
      auto rep = check_structure_conditions(op, 10000, 11);
      CAPTURE(n);
      CAPTURE(p);
      CHECK(rep.all_ok());
      CHECK(rep.k1_estimate == doctest::Approx(p - 2.0).epsilon(1e-6));
    }
    auto inf = make_operator("infinity_laplacian", {.n = n});
    auto ri = check_structure_conditions(inf, 10000, 12);
    CHECK(ri.all_ok());
    CHECK(ri.k1_estimate == doctest::Approx(2.0).epsilon(1e-6));
    auto pm = make_operator("pucci_min", {.n = n});
    auto rp = check_structure_conditions(pm, 10000, 13);
    CHECK(rp.all_ok());
    CHECK(rp.k1_estimate == doctest::Approx(0.0).epsilon(1e-6));
  }
  auto ps = make_operator("pseudo_p_laplacian", {.n = 2, .p = 3.0});
  auto rps = check_structure_conditions(ps, 10000, 14);
  CHECK(rps.all_ok());
  CHECK(rps.k1_estimate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quasilinear bracket declares k1 but scales with k1+2") {
  auto op = make_operator("quasilinear_bracket", {.n = 2, .k1 = 1.0});
  auto rep = check_structure_conditions(op, 4000, 21);
  CHECK_FALSE(rep.q_homog_ok);
  CHECK(rep.k1_estimate == doctest::Approx(3.0).epsilon(1e-6));
  // rank-one pinch degenerates: H(e, lambda e x e +/- I) = -/+ (n-1)
  Vec e = unit2(0.3, -0.9);
  for (double lam : {1.5, 4.0, 100.0}) {
    Mat arg = lam * rank1(e) + Mat::Identity(2, 2);
    CHECK(op.evaluate(e, arg) == doctest::Approx(1.0).epsilon(1e-12));
    Mat argm = lam * rank1(e) - Mat::Identity(2, 2);
    CHECK(op.evaluate(e, argm) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  CHECK_FALSE(rep.condition_c_ok);
  // min_e H(e, e x e) collapses to zero for this family
  double hmin = scan_min_n2(
      [&](const Vec& dir) { return op.evaluate(dir, rank1(dir)); });
  CHECK(std::abs(hmin) <= 1e-8);
}

TEST_CASE("determinant example gives 1+lambda upper envelope but no degree-1 scaling") {
  auto op = make_operator("det_operator", {.n = 2});
  Vec e = unit2(1, 1);
  for (double lam : {1.0, 2.5, 10.0}) {
    Mat arg = lam * rank1(e) + Mat::Identity(2, 2);
    CHECK(op.evaluate(e, arg) == doctest::Approx(1.0 + lam).epsilon(1e-12));
  }
  auto rep = check_structure_conditions(op, 2000, 31);
  CHECK_FALSE(rep.x_homog_ok);
}

TEST_CASE("closed and sampled envelopes agree") {
  std::vector<OperatorDescriptor> ops;
  for (int n : {2, 3})
    for (double p : {2.0, 3.0, 4.0})
      ops.push_back(make_operator("p_laplacian", {.n = n, .p = p}));
  for (int n : {2, 3}) {
    ops.push_back(make_operator("infinity_laplacian", {.n = n}));
    ops.push_back(make_operator("pucci_min", {.n = n}));
    ops.push_back(make_operator("pucci_max", {.n = n}));
  }
  for (auto& op : ops) {
    CAPTURE(op.name);
    CAPTURE(op.dim);
    SpectralEnvelopes env(op);
    for (double lam : {1.0625, 1.5, 2.0, 5.0, 17.0, 1025.0}) {
      double closed_min = op.closed_lambda_min(lam);
      double closed_max = op.closed_lambda_max(lam);
      double rel = std::max(1.0, std::abs(closed_min));
      CHECK(std::abs(env.sampled_lambda_min(lam) - closed_min) / rel <= 1e-6);
      rel = std::max(1.0, std::abs(closed_max));
      CHECK(std::abs(env.sampled_lambda_max(lam) - closed_max) / rel <= 1e-6);
    }
  }
}

TEST_CASE("sampled envelope matches dense scan for the anisotropic operator") {
  auto ps = make_operator("pseudo_p_laplacian", {.n = 2, .p = 3.0});
  SpectralEnvelopes env(ps);
  for (double lam : {1.5, 2.0, 5.0}) {
    double scan = scan_min_n2([&](const Vec& e) {
      return ps.evaluate(e, lam * rank1(e) - Mat::Identity(2, 2));
    });
    CHECK(env.sampled_lambda_min(lam) <= scan + 1e-9);
    CHECK(env.sampled_lambda_min(lam) >= scan - 1e-6);
  }
  // interior minimum of min_e H(e, e x e): 2 sum |e_i|^3 at |e_i| = 1/sqrt(2)
  double hmin = scan_min_n2(
      [&](const Vec& e) { return ps.evaluate(e, rank1(e)); });
  CHECK(hmin == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(env.report().script_H == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("envelope report constants: Laplacian n=2") {
  auto lap = make_operator("p_laplacian", {.n = 2, .p = 2.0});
  SpectralEnvelopes env(lap, {.L = 1.0, .T = 1.0});
  const auto& r = env.report();
  CHECK(r.k1 == doctest::Approx(0.0));
  CHECK(r.gamma == doctest::Approx(2.0));
  CHECK(r.gamma_star == doctest::Approx(2.0));
  // pinch grid 1 + 2^j: first positive at lambda = 3
  CHECK(r.lambda0 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.K0 == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(r.script_H == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.N == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(r.M_bar == doctest::Approx(6.0).epsilon(1e-9));   // (2+L) n
  CHECK(r.M11 == doctest::Approx(6.0).epsilon(1e-9));     // n + (1+T) L g*
  CHECK(r.S == doctest::Approx(-6.0).epsilon(1e-9));      // -2 (n+1)
}

TEST_CASE("envelope report constants: p-Laplacian p=3 n=2") {
  auto p3 = make_operator("p_laplacian", {.n = 2, .p = 3.0});
  SpectralEnvelopes env(p3, {.L = 1.0, .T = 1.0});
  const auto& r = env.report();
  CHECK(r.k1 == doctest::Approx(1.0));
  CHECK(r.gamma == doctest::Approx(3.0));
  CHECK(r.gamma_star == doctest::Approx(1.5));
  CHECK(r.lambda0 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.K0 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.script_H == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.N == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(r.M_bar == doctest::Approx(9.0).epsilon(1e-9));   // (2+L)(n+p-2)
  CHECK(r.M11 == doctest::Approx(9.0).epsilon(1e-9));     // (n+p-2)+ c (p-1), c=3
  CHECK(r.S == doctest::Approx(-10.0).epsilon(1e-9));     // -2 (n+2p-3)
}

TEST_CASE("pinch constants for the remaining builtins") {
  auto inf = make_operator("infinity_laplacian", {.n = 2});
  SpectralEnvelopes einf(inf);
  CHECK(einf.report().lambda0 == doctest::Approx(1.0 + std::pow(2.0, -6)));
  CHECK(einf.report().script_H == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(einf.report().N == doctest::Approx(-1.0).epsilon(1e-9));

  auto pm = make_operator("pucci_min", {.n = 2});
  SpectralEnvelopes epm(pm);
  CHECK(epm.report().lambda0 == doctest::Approx(5.0));
  CHECK(epm.report().K0 == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(epm.report().script_H == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(epm.report().N == doctest::Approx(-4.0).epsilon(1e-9));  // -Lambda n
  CHECK(epm.report().S == doctest::Approx(-12.0).epsilon(1e-9)); // -2 Lambda (n+1)
}

TEST_CASE("normalized lower envelope is monotone and saturates at script_H") {
  for (auto name : {"p_laplacian", "infinity_laplacian", "pucci_min"}) {
    auto op = make_operator(name, {.n = 2, .p = 3.0});
    SpectralEnvelopes env(op);
    double prev = -std::numeric_limits<double>::infinity();
    for (double lam : SpectralEnvelopes::lambda_grid()) {
      if (lam < env.report().lambda0) continue;
      double val = env.lambda_min(lam) / lam;
      CHECK(val >= prev - 1e-10);
      CHECK(val >= env.report().K0 - 1e-9);
      prev = val;
    }
    CHECK(std::abs(env.lambda_min(1e6) / 1e6 - env.report().script_H) <= 1e-4);
  }
}

TEST_CASE("script_H_lambda grows to script_H") {
  auto p3 = make_operator("p_laplacian", {.n = 2, .p = 3.0});
  SpectralEnvelopes env(p3);
  // closed value: (p-1) - (n+p-2)/lambda
  CHECK(env.script_H_lambda(4.0) == doctest::Approx(2.0 - 3.0 / 4.0).epsilon(1e-9));
  CHECK(env.script_H_lambda(9.0) == doctest::Approx(2.0 - 3.0 / 9.0).epsilon(1e-9));
  CHECK(env.script_H_lambda(4.0) < env.script_H_lambda(9.0));
}

TEST_CASE("pinch failure raises") {
  auto op = make_operator("quasilinear_bracket", {.n = 2, .k1 = 1.0});
  CHECK_THROWS_AS(SpectralEnvelopes{op}, ConditionCFailure);
}

TEST_CASE("determinism of sampled envelopes") {
  auto ps = make_operator("pseudo_p_laplacian", {.n = 3, .p = 3.0});
  SpectralEnvelopes a(ps), b(ps);
  CHECK(a.report().script_H == b.report().script_H);
  CHECK(a.report().M_bar == b.report().M_bar);
  CHECK(a.sampled_lambda_min(3.7) == b.sampled_lambda_min(3.7));
}
