#pragma once

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince coefficients) over
// std::vector states with real or complex scalars. Step-size control uses the
// standard mixed absolute/relative weighted RMS error with a PI-style
// limiter. This is the single integrator used by every module; the systems
// here are linear and non-stiff, so an explicit pair is the right tool.

#include <algorithm>
#include <cmath>
#include <vector>

#include "dce/core.hpp"

namespace dce {

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-11;
  double h_init = 0.0;      // 0: choose automatically
  double h_max = 0.0;       // 0: no cap
  long max_steps = 40000000;
};

struct OdeStats {
  long steps = 0;
  long rejected = 0;
};

namespace detail {

template <class S>
double abs2(const S& v) {
  if constexpr (std::is_same_v<S, Complex>)
    return std::norm(v);
  else
    return v * v;
}

}  // namespace detail

// F: void(double t, const std::vector<S>& y, std::vector<S>& dydt)
template <class S, class F>
OdeStats integrate_ode(F&& f, std::vector<S>& y, double t0, double t1, const OdeOptions& opt = {}) {
  // Dormand-Prince 5(4) tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const std::size_t n = y.size();
  OdeStats st;
  if (t1 == t0) return st;
  const double dir = (t1 > t0) ? 1.0 : -1.0;

  std::vector<S> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
  f(t0, y, k1);

  double h = opt.h_init;
  if (h == 0.0) {
    double ynorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ynorm = std::max(ynorm, std::sqrt(detail::abs2(y[i])));
      fnorm = std::max(fnorm, std::sqrt(detail::abs2(k1[i])));
    }
    h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, opt.atol) / fnorm : 1e-4 * std::abs(t1 - t0);
    h = std::min(h, 0.1 * std::abs(t1 - t0));
  }
  if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
  h *= dir;

  double t = t0;
  double errold = 1e-4;
  bool fsal_valid = true;
  while (dir * (t1 - t) > 0.0) {
    if (st.steps >= opt.max_steps) throw convergence_error("integrate_ode: step budget exhausted");
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) throw convergence_error("integrate_ode: step size underflow");
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    if (!fsal_valid) f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a21 * k1[i]);
    f(t + c2 * h, yt, k2);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, yt, k3);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, yt, k4);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, yt, k5);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, yt, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      S e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = opt.atol + opt.rtol * std::max(std::sqrt(detail::abs2(y[i])), std::sqrt(detail::abs2(ynew[i])));
      err += detail::abs2(e) / (sc * sc);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0) {
      t += h;
      std::swap(y, ynew);
      std::swap(k1, k7);  // FSAL
      fsal_valid = true;
      ++st.steps;
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(errold, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 6.0);
      errold = std::max(err, 1e-10);
      h *= fac;
      if (opt.h_max > 0.0 && std::abs(h) > opt.h_max) h = dir * opt.h_max;
    } else {
      ++st.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      fsal_valid = true;  // k1 still holds f(t, y)
    }
  }
  return st;
}

/// Adaptive Simpson quadrature; fa/fb may be reused across the recursion.
template <class F>
double adaptive_simpson_impl(F&& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                             int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace dce
