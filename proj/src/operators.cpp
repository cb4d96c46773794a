#include "plb/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

namespace plb {

namespace {

double pow_or_one(double base, double expo) {
  if (expo == 0.0) return 1.0;
  return std::pow(base, expo);
}

OperatorDescriptor p_laplacian(const OperatorParams& par) {
  if (par.p < 2.0)
    throw std::invalid_argument("p_laplacian requires p >= 2");
  int n = par.n;
  double p = par.p;
  OperatorDescriptor d;
  d.name = "p_laplacian";
  d.dim = n;
  d.k1 = p - 2.0;
  d.evaluate = [p](const Vec& q, const Mat& X) {
    double qn = q.norm();
    if (qn == 0.0) return p == 2.0 ? X.trace() : 0.0;
    double base = X.trace() + (p - 2.0) * q.dot(X * q) / (qn * qn);
    return pow_or_one(qn, p - 2.0) * base;
  };
  d.closed_lambda_min = [n, p](double lam) {
    return (p - 1.0) * lam - (n + p - 2.0);
  };
  d.closed_lambda_max = [n, p](double lam) {
    return (p - 1.0) * lam + (n + p - 2.0);
  };
  return d;
}

OperatorDescriptor pseudo_p_laplacian(const OperatorParams& par) {
  if (par.p < 2.0)
    throw std::invalid_argument("pseudo_p_laplacian requires p >= 2");
  double p = par.p;
  OperatorDescriptor d;
  d.name = "pseudo_p_laplacian";
  d.dim = par.n;
  d.k1 = p - 2.0;
  d.evaluate = [p](const Vec& q, const Mat& X) {
    double s = 0.0;
    for (int i = 0; i < q.size(); ++i) {
      double a = std::abs(q(i));
      if (p == 2.0)
        s += X(i, i);
      else if (a > 0.0)
        s += std::pow(a, p - 2.0) * X(i, i);
    }
    return (p - 1.0) * s;
  };
  return d;  // no closed envelopes: direction-dependent
}

OperatorDescriptor infinity_laplacian(const OperatorParams& par) {
  OperatorDescriptor d;
  d.name = "infinity_laplacian";
  d.dim = par.n;
  d.k1 = 2.0;
  d.evaluate = [](const Vec& q, const Mat& X) { return q.dot(X * q); };
  d.closed_lambda_min = [](double lam) { return lam - 1.0; };
  d.closed_lambda_max = [](double lam) { return lam + 1.0; };
  return d;
}

OperatorDescriptor pucci(const OperatorParams& par, bool minimal) {
  if (!(par.pucci_lambda > 0.0) || !(par.pucci_Lambda >= par.pucci_lambda))
    throw std::invalid_argument("pucci requires 0 < lambda <= Lambda");
  int n = par.n;
  double lo = par.pucci_lambda, hi = par.pucci_Lambda;
  OperatorDescriptor d;
  d.name = minimal ? "pucci_min" : "pucci_max";
  d.dim = n;
  d.k1 = 0.0;
  d.evaluate = [lo, hi, minimal](const Vec&, const Mat& X) {
    Eigen::SelfAdjointEigenSolver<Mat> es(X);
    double s = 0.0;
    for (int i = 0; i < X.rows(); ++i) {
      double ev = es.eigenvalues()(i);
      if (minimal)
        s += ev > 0.0 ? lo * ev : hi * ev;
      else
        s += ev > 0.0 ? hi * ev : lo * ev;
    }
    return s;
  };
  // lambda e x e +/- I has eigenvalues lambda -/+ 1 (once) and -/+ 1 (n-1)
  if (minimal) {
    d.closed_lambda_min = [lo, hi, n](double lam) {
      return lo * (lam - 1.0) - hi * (n - 1.0);
    };
    d.closed_lambda_max = [lo, n](double lam) { return lo * (lam + n); };
  } else {
    d.closed_lambda_min = [lo, hi, n](double lam) {
      return hi * (lam - 1.0) - lo * (n - 1.0);
    };
    d.closed_lambda_max = [hi, n](double lam) { return hi * (lam + n); };
  }
  return d;
}

OperatorDescriptor quasilinear_bracket(const OperatorParams& par) {
  if (par.k1 < 0.0)
    throw std::invalid_argument("quasilinear_bracket requires k1 >= 0");
  int n = par.n;
  double k1 = par.k1;
  OperatorDescriptor d;
  d.name = "quasilinear_bracket";
  d.dim = n;
  d.k1 = k1;  // declared degree; the actual gradient degree is k1 + 2
  d.evaluate = [k1](const Vec& q, const Mat& X) {
    double qn2 = q.squaredNorm();
    if (qn2 == 0.0) return 0.0;
    return pow_or_one(std::sqrt(qn2), k1) * (qn2 * X.trace() - q.dot(X * q));
  };
  d.closed_lambda_min = [n](double) { return -(n - 1.0); };
  d.closed_lambda_max = [n](double) { return n - 1.0; };
  return d;
}

OperatorDescriptor det_operator(const OperatorParams& par) {
  int n = par.n;
  OperatorDescriptor d;
  d.name = "det_operator";
  d.dim = n;
  d.k1 = 0.0;
  d.evaluate = [](const Vec&, const Mat& X) { return X.determinant(); };
  d.closed_lambda_min = [n](double lam) {
    return (lam - 1.0) * ((n % 2 == 1) ? 1.0 : -1.0);
  };
  d.closed_lambda_max = [](double lam) { return 1.0 + lam; };
  return d;
}

}  // namespace

OperatorDescriptor make_operator(const std::string& name,
                                 const OperatorParams& params) {
  if (params.n < 2 || params.n > 8)
    throw std::invalid_argument("operator dimension must be in [2, 8]");
  if (name == "p_laplacian") return p_laplacian(params);
  if (name == "pseudo_p_laplacian") return pseudo_p_laplacian(params);
  if (name == "infinity_laplacian") return infinity_laplacian(params);
  if (name == "pucci_min") return pucci(params, true);
  if (name == "pucci_max") return pucci(params, false);
  if (name == "quasilinear_bracket") return quasilinear_bracket(params);
  if (name == "det_operator") return det_operator(params);
  throw std::invalid_argument("unknown operator: " + name);
}

double eval_operator(const OperatorDescriptor& desc, const Vec& q,
                     const Mat& X) {
  if (q.size() != desc.dim)
    throw std::invalid_argument("gradient dimension mismatch");
  if (X.rows() != desc.dim || X.cols() != desc.dim)
    throw std::invalid_argument("matrix dimension mismatch");
  double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix argument must be symmetric");
  if (!q.allFinite() || !X.allFinite())
    throw std::invalid_argument("non-finite operator arguments");
  return desc.evaluate(q, X);
}

// ---------------------------------------------------------------------------
// sphere search

namespace {

void push_unit(std::vector<Vec>& out, Vec v) {
  double n = v.norm();
  if (n > 0) out.push_back(v / n);
}

std::vector<Vec> sphere_candidates(int dim, const SphereSearchOptions& opt) {
  std::vector<Vec> cand;
  cand.reserve(opt.budget + 4 * dim * dim + 20);
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e(i) = 1.0;
    cand.push_back(e);
    cand.push_back(-e);
  }
  if (dim <= 4) {
    int combos = 1 << dim;
    for (int m = 0; m < combos; ++m) {
      Vec v(dim);
      for (int i = 0; i < dim; ++i) v(i) = (m >> i) & 1 ? -1.0 : 1.0;
      push_unit(cand, v);
    }
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (double s : {1.0, -1.0}) {
        Vec v = Vec::Zero(dim);
        v(i) = 1.0;
        v(j) = s;
        push_unit(cand, v);
      }

  if (dim == 2) {
    const double golden = 0.6180339887498949;
    double u = 0.5;
    for (int i = 0; i < opt.budget; ++i) {
      u += golden;
      u -= std::floor(u);
      double th = 2.0 * M_PI * u;
      Vec v(2);
      v << std::cos(th), std::sin(th);
      cand.push_back(v);
    }
  } else if (dim == 3) {
    // additive recurrence in the cylindrical equal-area chart
    const double a1 = 0.7548776662466927, a2 = 0.5698402909980532;
    double u1 = 0.5, u2 = 0.5;
    for (int i = 0; i < opt.budget; ++i) {
      u1 += a1;
      u1 -= std::floor(u1);
      u2 += a2;
      u2 -= std::floor(u2);
      double z = 2.0 * u1 - 1.0;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = 2.0 * M_PI * u2;
      Vec v(3);
      v << r * std::cos(th), r * std::sin(th), z;
      cand.push_back(v);
    }
  } else if (dim == 4) {
    const double a1 = 0.8191725133961645, a2 = 0.6710436067037893,
                 a3 = 0.5497004779019703;
    double u1 = 0.5, u2 = 0.5, u3 = 0.5;
    for (int i = 0; i < opt.budget; ++i) {
      u1 += a1; u1 -= std::floor(u1);
      u2 += a2; u2 -= std::floor(u2);
      u3 += a3; u3 -= std::floor(u3);
      double s = u1, ca = 2.0 * M_PI * u2, cb = 2.0 * M_PI * u3;
      Vec v(4);
      v << std::sqrt(1.0 - s) * std::cos(ca), std::sqrt(1.0 - s) * std::sin(ca),
          std::sqrt(s) * std::cos(cb), std::sqrt(s) * std::sin(cb);
      cand.push_back(v);
    }
  } else {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < opt.budget; ++i) {
      Vec v(dim);
      for (int j = 0; j < dim; ++j) v(j) = gauss(rng);
      push_unit(cand, v);
    }
  }
  return cand;
}

std::vector<Vec> tangent_basis(const Vec& e) {
  int dim = static_cast<int>(e.size());
  std::vector<Vec> basis;
  basis.reserve(dim - 1);
  for (int i = 0; i < dim && static_cast<int>(basis.size()) < dim - 1; ++i) {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    v -= v.dot(e) * e;
    for (const auto& b : basis) v -= v.dot(b) * b;
    double n = v.norm();
    if (n > 1e-8) basis.push_back(v / n);
  }
  return basis;
}

double refine_min(const std::function<double(const Vec&)>& g, Vec e,
                  double val, int iters) {
  const double h = 1e-6;
  double step = 0.25;
  for (int it = 0; it < iters; ++it) {
    auto basis = tangent_basis(e);
    Vec dir = Vec::Zero(e.size());
    for (const auto& t : basis) {
      double gp = g((e + h * t).normalized());
      double gm = g((e - h * t).normalized());
      dir -= (gp - gm) / (2.0 * h) * t;
    }
    double dn = dir.norm();
    if (dn < 1e-14) break;
    dir /= dn;
    bool improved = false;
    while (step > 1e-14) {
      Vec e2 = (e + step * dir).normalized();
      double v2 = g(e2);
      if (v2 < val) {
        e = e2;
        val = v2;
        improved = true;
        step = std::min(0.25, 2.0 * step);
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return val;
}

}  // namespace

double sphere_minimize(int dim, const std::function<double(const Vec&)>& g,
                       const SphereSearchOptions& opt) {
  auto cand = sphere_candidates(dim, opt);
  std::vector<double> vals(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) vals[i] = g(cand[i]);
  std::vector<std::size_t> order(cand.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t keep = std::min<std::size_t>(opt.refine_top, order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  double best = vals[order[0]];
  for (std::size_t i = 0; i < keep; ++i)
    best = std::min(best, refine_min(g, cand[order[i]], vals[order[i]],
                                     opt.refine_iters));
  return best;
}

double sphere_maximize(int dim, const std::function<double(const Vec&)>& g,
                       const SphereSearchOptions& opt) {
  return -sphere_minimize(dim, [&](const Vec& e) { return -g(e); }, opt);
}

// ---------------------------------------------------------------------------
// structure conditions

ConditionReport check_structure_conditions(const OperatorDescriptor& desc,
                                           int samples, std::uint64_t seed) {
  ConditionReport rep;
  int n = desc.dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> logsc(-1.0, 1.0);

  double worst_mono = 0, worst_zero = 0, worst_qh = 0, worst_xh = 0;
  std::vector<double> degree_samples;
  degree_samples.reserve(samples);

  for (int it = 0; it < samples; ++it) {
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

    double h0 = desc.evaluate(q, X);
    double scale = std::max(1.0, std::abs(h0));
    worst_zero = std::max(worst_zero,
                          std::abs(desc.evaluate(q, Mat::Zero(n, n))));
    worst_mono = std::max(worst_mono, (h0 - desc.evaluate(q, X + P)) / scale);

    double th = 0.5 + 2.5 * std::abs(gauss(rng));
    double hq = desc.evaluate(th * q, X);
    worst_qh = std::max(
        worst_qh, std::abs(hq - std::pow(th, desc.k1) * h0) / scale);
    worst_qh = std::max(worst_qh, std::abs(desc.evaluate(-q, X) - h0) / scale);
    if (std::abs(h0) > 1e-9 * scale && hq != 0.0 && h0 * hq > 0.0)
      degree_samples.push_back(std::log(hq / h0) / std::log(th));

    double hx = desc.evaluate(q, th * X);
    worst_xh = std::max(worst_xh, std::abs(hx - th * h0) / (scale * th));
  }

  rep.worst_monotone = worst_mono;
  rep.worst_zero = worst_zero;
  rep.worst_q_homog = worst_qh;
  rep.worst_x_homog = worst_xh;
  rep.monotone_ok = worst_mono <= 1e-8;
  rep.zero_ok = worst_zero <= 1e-12;
  rep.q_homog_ok = worst_qh <= 1e-8;
  rep.x_homog_ok = worst_xh <= 1e-8;
  if (!degree_samples.empty()) {
    auto mid = degree_samples.begin() + degree_samples.size() / 2;
    std::nth_element(degree_samples.begin(), mid, degree_samples.end());
    rep.k1_estimate = *mid;
  }

  SphereSearchOptions sopt;
  sopt.budget = 2048;
  Mat I = Mat::Identity(n, n);
  rep.max_H_minus_I = sphere_maximize(
      n, [&](const Vec& e) { return desc.evaluate(e, -I); }, sopt);
  rep.min_H_plus_I = sphere_minimize(
      n, [&](const Vec& e) { return desc.evaluate(e, I); }, sopt);
  rep.script_H = sphere_minimize(
      n, [&](const Vec& e) { return desc.evaluate(e, e * e.transpose()); },
      sopt);

  rep.lambda0 = 0.0;
  for (double lam : SpectralEnvelopes::lambda_grid()) {
    double lmin =
        desc.closed_lambda_min
            ? desc.closed_lambda_min(lam)
            : sphere_minimize(n,
                              [&](const Vec& e) {
                                return desc.evaluate(e,
                                                     lam * (e * e.transpose()) - I);
                              },
                              sopt);
    if (lmin > 0.0) {
      rep.lambda0 = lam;
      break;
    }
  }
  rep.condition_c_ok =
      rep.max_H_minus_I < 0.0 && rep.min_H_plus_I > 0.0 && rep.lambda0 > 0.0;

  if (!rep.monotone_ok) rep.notes += "monotonicity violated; ";
  if (!rep.zero_ok) rep.notes += "nonzero at X=0; ";
  if (!rep.q_homog_ok)
    rep.notes += "gradient degree != declared (measured " +
                 std::to_string(rep.k1_estimate) + "); ";
  if (!rep.x_homog_ok) rep.notes += "not degree-1 in X; ";
  if (!rep.condition_c_ok) rep.notes += "sign pinch not certified; ";
  return rep;
}

// ---------------------------------------------------------------------------
// envelopes

std::vector<double> SpectralEnvelopes::lambda_grid() {
  std::vector<double> grid;
  for (int j = -6; j <= 10; ++j) grid.push_back(1.0 + std::pow(2.0, j));
  return grid;
}

SpectralEnvelopes::SpectralEnvelopes(OperatorDescriptor desc,
                                     EnvelopeOptions opt)
    : desc_(std::move(desc)), opt_(opt) {
  auto hom = desc_.homogeneity();
  rep_.k1 = hom.k1;
  rep_.k = hom.k;
  rep_.gamma = hom.gamma;
  rep_.gamma_star = hom.gamma_star;
  rep_.L = opt_.L;
  rep_.T = opt_.T;
  rep_.closed_form_used =
      static_cast<bool>(desc_.closed_lambda_min) &&
      static_cast<bool>(desc_.closed_lambda_max);

  int n = desc_.dim;
  Mat I = Mat::Identity(n, n);
  const auto& sopt = opt_.sphere;
  rep_.script_H = sphere_minimize(
      n, [&](const Vec& e) { return desc_.evaluate(e, e * e.transpose()); },
      sopt);
  rep_.N = sphere_minimize(
      n, [&](const Vec& e) { return desc_.evaluate(e, -I); }, sopt);
  rep_.M_bar = sphere_maximize(
      n, [&](const Vec& e) { return desc_.evaluate(e, (2.0 + opt_.L) * I); },
      sopt);
  double c = (1.0 + opt_.T) * opt_.L * hom.gamma_star;
  rep_.M11 = sphere_maximize(
      n,
      [&](const Vec& e) {
        return desc_.evaluate(e, I + c * (e * e.transpose()));
      },
      sopt);
  rep_.S = sphere_minimize(
      n,
      [&](const Vec& e) {
        return desc_.evaluate(e, -2.0 * (I + e * e.transpose()));
      },
      sopt);

  rep_.lambda0 = 0.0;
  for (double lam : lambda_grid()) {
    double lmin = lambda_min(lam);
    if (lmin > 0.0) {
      rep_.lambda0 = lam;
      rep_.K0 = lmin / lam;
      break;
    }
  }
  if (rep_.lambda0 == 0.0)
    throw ConditionCFailure("no probe lambda certifies the pinch for " +
                            desc_.name);
}

double SpectralEnvelopes::lambda_min(double lambda) const {
  if (desc_.closed_lambda_min) return desc_.closed_lambda_min(lambda);
  return sampled_lambda_min(lambda);
}

double SpectralEnvelopes::lambda_max(double lambda) const {
  if (desc_.closed_lambda_max) return desc_.closed_lambda_max(lambda);
  return sampled_lambda_max(lambda);
}

double SpectralEnvelopes::sampled_lambda_min(double lambda) const {
  int n = desc_.dim;
  Mat I = Mat::Identity(n, n);
  return sphere_minimize(
      n,
      [&](const Vec& e) {
        return desc_.evaluate(e, lambda * (e * e.transpose()) - I);
      },
      opt_.sphere);
}

double SpectralEnvelopes::sampled_lambda_max(double lambda) const {
  int n = desc_.dim;
  Mat I = Mat::Identity(n, n);
  return sphere_maximize(
      n,
      [&](const Vec& e) {
        return desc_.evaluate(e, lambda * (e * e.transpose()) + I);
      },
      opt_.sphere);
}

double SpectralEnvelopes::script_H_lambda(double lambda) const {
  int n = desc_.dim;
  Mat I = Mat::Identity(n, n);
  // closed reduction: H(e, e x e - I/lambda) = Lambda_min-type probe at
  // rescaled argument; evaluate directly to stay exact for all builtins
  if (desc_.closed_lambda_min)
    // H(e, e x e - I/lambda) = (1/lambda) H(e, lambda e x e - I)
    return desc_.closed_lambda_min(lambda) / lambda;
  return sphere_minimize(
      n,
      [&](const Vec& e) {
        return desc_.evaluate(e, e * e.transpose() - I / lambda);
      },
      opt_.sphere);
}

}  // namespace plb
