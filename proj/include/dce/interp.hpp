#pragma once

// Natural cubic spline over strictly increasing nodes, with first and second
// derivatives. Used for sampled boundary motions.

#include <stdexcept>
#include <vector>

namespace dce {

class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 matching nodes");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: nodes must increase");
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      sub[i] = h0;
      diag[i] = 2.0 * (h0 + h1);
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // Thomas solve (natural BCs: m[0] = m[n-1] = 0)
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double h1 = x_[i + 1] - x_[i];
      double w = sub[i] / diag[i - 1];
      diag[i] -= w * c[i - 1];
      rhs[i] -= w * rhs[i - 1];
      c[i] = h1;
    }
    for (std::size_t i = n - 2; i >= 1; --i) m_[i] = (rhs[i] - c[i] * m_[i + 1]) / diag[i];
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

  double value(double t) const { return eval(t, 0); }
  double deriv(double t) const { return eval(t, 1); }
  double deriv2(double t) const { return eval(t, 2); }

 private:
  double eval(double t, int order) const {
    if (t < x_.front() || t > x_.back()) throw std::domain_error("CubicSpline: query outside sampled range");
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= t ? lo : hi) = mid;
    }
    double h = x_[hi] - x_[lo];
    double A = (x_[hi] - t) / h, B = (t - x_[lo]) / h;
    if (order == 0)
      return A * y_[lo] + B * y_[hi] + ((A * A * A - A) * m_[lo] + (B * B * B - B) * m_[hi]) * h * h / 6.0;
    if (order == 1)
      return (y_[hi] - y_[lo]) / h + ((3.0 * B * B - 1.0) * m_[hi] - (3.0 * A * A - 1.0) * m_[lo]) * h / 6.0;
    return A * m_[lo] + B * m_[hi];
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace dce
