#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace plb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Structure-condition C could not be certified on the probe grid.
struct ConditionCFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A builder was asked for a (k, sigma, chi) regime it does not cover.
struct WrongRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Barrier amplitude b exceeds the admissibility bound for the regime.
struct BParameterTooLarge : std::runtime_error {
  BParameterTooLarge(double b, double bound)
      : std::runtime_error("amplitude b=" + std::to_string(b) +
                           " exceeds admissible bound " + std::to_string(bound)),
        b(b), bound(bound) {}
  double b, bound;
};

/// A check's stated precondition does not hold for the supplied data.
struct PreconditionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A growth hypothesis required by the selected principle case fails.
struct HypothesisFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// |x|^sigma with the sigma=0 convention fixed to 1 everywhere (including
/// x=0, matching the limit factor the barrier constructions rely on).
inline double pow_sigma(double x, double sigma) {
  if (sigma == 0.0) return 1.0;
  return std::pow(std::abs(x), sigma);
}

inline double sqr(double x) { return x * x; }

/// Relative gap of lhs <= rhs, scaled so huge magnitudes don't drown the
/// comparison: positive when the inequality holds.
inline double rel_slack(double lhs, double rhs) {
  double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return (rhs - lhs) / scale;
}

/// Runs fn(i) for i in [0, count). With threads <= 1 this is a plain loop;
/// otherwise indices are split in contiguous chunks. Results must be written
/// to per-index slots so the outcome is independent of the thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::size_t nthr = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nthr);
  std::size_t chunk = (count + nthr - 1) / nthr;
  for (std::size_t t = 0; t < nthr; ++t) {
    std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace plb
