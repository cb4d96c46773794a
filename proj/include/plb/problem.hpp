#pragma once

#include <functional>
#include <string>
#include <vector>

#include "plb/common.hpp"
#include "plb/operators.hpp"

namespace plb {

/// Slope profile Z: positive, non-increasing, with finite pinch
/// 0 < ell <= Z <= L. ell and L are carried explicitly because every barrier
/// constant depends on them, not on pointwise values.
struct ZProfile {
  std::function<double(double)> fn;
  double ell = 1.0;  // inf Z
  double L = 1.0;    // sup Z

  static ZProfile constant(double z) {
    if (!(z > 0.0)) throw std::invalid_argument("Z must be positive");
    return {[z](double) { return z; }, z, z};
  }

  /// z0 at s <= 0 decaying linearly with `rate` to the floor; clamped so the
  /// profile stays within [floor, z0] on all of R.
  static ZProfile clamped_linear(double z0, double rate, double floor) {
    if (!(floor > 0.0) || !(z0 >= floor) || !(rate >= 0.0))
      throw std::invalid_argument("clamped_linear needs 0 < floor <= z0, rate >= 0");
    return {[z0, rate, floor](double s) {
              return std::min(z0, std::max(floor, z0 - rate * s));
            },
            floor, z0};
  }

  /// Piecewise-linear through (s_i, z_i); validated positive non-increasing;
  /// constant extrapolation outside the node range.
  static ZProfile tabulated(std::vector<double> s, std::vector<double> z);
};

/// Forcing amplitude chi(t) on [0, T]; alpha = sup |chi|, and the
/// nonnegative flag unlocks the sign-definite barrier regimes.
struct ChiProfile {
  std::function<double(double)> fn;
  double alpha = 0.0;
  bool nonnegative = false;

  static ChiProfile constant(double c) {
    return {[c](double) { return c; }, std::abs(c), c >= 0.0};
  }

  static ChiProfile linear(double c0, double c1, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("linear chi needs T > 0");
    double a = std::max(std::abs(c0), std::abs(c0 + c1 * T));
    bool nn = c0 >= 0.0 && c0 + c1 * T >= 0.0;
    return {[c0, c1](double t) { return c0 + c1 * t; }, a, nn};
  }

  static ChiProfile tabulated(std::vector<double> t, std::vector<double> c);
};

/// Initial datum along with its essential bounds mu = inf h, nu = sup h.
struct InitialDatum {
  std::function<double(double)> radial;  // h as a function of |x|
  double mu = 0.0;
  double nu = 0.0;

  static InitialDatum constant(double c) {
    return {[c](double) { return c; }, c, c};
  }

  /// base + height * exp(-(r/width)^2); bounds are those on all of R^n.
  static InitialDatum bump(double base, double height, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("bump needs width > 0");
    auto f = [base, height, width](double r) {
      return base + height * std::exp(-sqr(r / width));
    };
    return {f, base + std::min(0.0, height), base + std::max(0.0, height)};
  }
};

inline ZProfile ZProfile::tabulated(std::vector<double> s,
                                    std::vector<double> z) {
  if (s.size() < 2 || s.size() != z.size())
    throw std::invalid_argument("tabulated Z needs >= 2 matching nodes");
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (!(s[i + 1] > s[i]))
      throw std::invalid_argument("tabulated Z nodes must be increasing");
    if (z[i + 1] > z[i])
      throw std::invalid_argument("Z must be non-increasing");
  }
  for (double v : z)
    if (!(v > 0.0)) throw std::invalid_argument("Z must be positive");
  double lo = z.back(), hi = z.front();
  auto fn = [s = std::move(s), z = std::move(z)](double x) {
    if (x <= s.front()) return z.front();
    if (x >= s.back()) return z.back();
    std::size_t i = 0;
    while (i + 2 < s.size() && x > s[i + 1]) ++i;
    double t = (x - s[i]) / (s[i + 1] - s[i]);
    return z[i] + t * (z[i + 1] - z[i]);
  };
  return {fn, lo, hi};
}

inline ChiProfile ChiProfile::tabulated(std::vector<double> t,
                                        std::vector<double> c) {
  if (t.size() < 2 || t.size() != c.size())
    throw std::invalid_argument("tabulated chi needs >= 2 matching nodes");
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!(t[i + 1] > t[i]))
      throw std::invalid_argument("tabulated chi nodes must be increasing");
  double a = 0.0;
  bool nn = true;
  for (double v : c) {
    a = std::max(a, std::abs(v));
    nn = nn && v >= 0.0;
  }
  auto fn = [t = std::move(t), c = std::move(c)](double x) {
    if (x <= t.front()) return c.front();
    if (x >= t.back()) return c.back();
    std::size_t i = 0;
    while (i + 2 < t.size() && x > t[i + 1]) ++i;
    double u = (x - t[i]) / (t[i + 1] - t[i]);
    return c[i] + u * (c[i + 1] - c[i]);
  };
  return {fn, a, nn};
}

/// Full problem data for one equation
///   H(Dv, D^2 v + Z(v) Dv x Dv) + chi(t) |Dv|^sigma - v_t = 0.
struct ProblemSpec {
  OperatorDescriptor op;
  ZProfile Z = ZProfile::constant(1.0);
  ChiProfile chi = ChiProfile::constant(0.0);
  double sigma = 0.0;
  double T = 1.0;
  InitialDatum h = InitialDatum::constant(0.0);

  HomogeneityProfile homogeneity() const { return op.homogeneity(); }

  void validate() const {
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    if (!(Z.ell > 0.0) || !(Z.L >= Z.ell))
      throw std::invalid_argument("Z pinch must satisfy 0 < ell <= L");
    if (!(chi.alpha >= 0.0))
      throw std::invalid_argument("chi amplitude must be >= 0");
    if (!op.evaluate) throw std::invalid_argument("operator not set");
  }
};

}  // namespace plb
