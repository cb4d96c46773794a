#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace plb {

/// Monotone cubic interpolant (Fritsch–Carlson slope limiting). Preserves
/// monotonicity of the data, which keeps tabulated strictly increasing maps
/// invertible after interpolation.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
      throw std::invalid_argument("MonotoneCubic: need >= 2 matching nodes");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i]))
        throw std::invalid_argument("MonotoneCubic: x must be increasing");
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    m_.assign(n, 0.0);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0)
        m_[i] = 0.0;
      else
        m_[i] = 0.5 * (d[i - 1] + d[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (d[i] == 0.0) {
        m_[i] = m_[i + 1] = 0.0;
        continue;
      }
      double a = m_[i] / d[i], b = m_[i + 1] / d[i];
      double s = a * a + b * b;
      if (s > 9.0) {
        double t = 3.0 / std::sqrt(s);
        m_[i] = t * a * d[i];
        m_[i + 1] = t * b * d[i];
      }
    }
  }

  double operator()(double xq) const {
    std::size_t i = locate(xq);
    double h = x_[i + 1] - x_[i];
    double t = (xq - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
  }

  double derivative(double xq) const {
    std::size_t i = locate(xq);
    double h = x_[i + 1] - x_[i];
    double t = (xq - x_[i]) / h;
    double t2 = t * t;
    double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
    double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    return d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
  }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::size_t locate(double xq) const {
    if (xq <= x_.front()) return 0;
    if (xq >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace plb
