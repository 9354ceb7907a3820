#pragma once

// Solutions and verifiers for the Moore functional equation
//     R(t + L(t)) - R(t - L(t)) = 2,
// whose solutions generate the exact mode functions of a 1D cavity with a
// moving ideal boundary:
//     A_n(x,t) = (1/(2i sqrt(n))) [ exp(-i pi n R(t-x)) - exp(-i pi n R(t+x)) ].
//
// Closed forms are available for the uniform law L = L0 (1 + alpha t), for a
// derivative expansion valid at short times, and for the asymptotic regime of
// a resonantly vibrating wall. The inverse method integrates the ODE
//     dL/dt = [R'(t-L) - R'(t+L)] / [R'(t-L) + R'(t+L)]
// to recover a law of motion from a prescribed R.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "dce/core.hpp"
#include "dce/interp.hpp"
#include "dce/ode.hpp"

namespace dce {

struct BoundaryMotion {
  enum class Kind { uniform, reciprocal, resonant, custom };
  Kind kind = Kind::uniform;
  double L0 = 1.0;
  double alpha = 0.0;    // rate for uniform / reciprocal laws
  double epsilon = 0.0;  // resonant amplitude
  int q = 1;             // resonance order (wall frequency q * pi / L0)
  std::optional<CubicSpline> samples;

  static BoundaryMotion uniform(double L0, double alpha) {
    BoundaryMotion m;
    m.kind = Kind::uniform;
    m.L0 = L0;
    m.alpha = alpha;
    return m;
  }
  static BoundaryMotion reciprocal(double L0, double alpha) {
    BoundaryMotion m;
    m.kind = Kind::reciprocal;
    m.L0 = L0;
    m.alpha = alpha;
    return m;
  }
  static BoundaryMotion resonant(double L0, double epsilon, int q) {
    BoundaryMotion m;
    m.kind = Kind::resonant;
    m.L0 = L0;
    m.epsilon = epsilon;
    m.q = q;
    return m;
  }
  static BoundaryMotion sampled(std::vector<double> t, std::vector<double> L) {
    BoundaryMotion m;
    m.kind = Kind::custom;
    m.samples.emplace(std::move(t), std::move(L));
    m.L0 = m.samples->value(m.samples->min_x());
    return m;
  }

  double L(double t) const {
    switch (kind) {
      case Kind::uniform: return L0 * (1.0 + alpha * t);
      case Kind::reciprocal: return L0 / (1.0 + alpha * t);
      case Kind::resonant: return L0 * (1.0 + epsilon * std::sin(kPi * q * t / L0));
      case Kind::custom: return samples->value(t);
    }
    return L0;
  }
  double Ldot(double t) const {
    switch (kind) {
      case Kind::uniform: return L0 * alpha;
      case Kind::reciprocal: return -L0 * alpha / ((1.0 + alpha * t) * (1.0 + alpha * t));
      case Kind::resonant: return epsilon * kPi * q * std::cos(kPi * q * t / L0);
      case Kind::custom: return samples->deriv(t);
    }
    return 0.0;
  }
  double Lddot(double t) const {
    switch (kind) {
      case Kind::uniform: return 0.0;
      case Kind::reciprocal: {
        double u = 1.0 + alpha * t;
        return 2.0 * L0 * alpha * alpha / (u * u * u);
      }
      case Kind::resonant: {
        double w = kPi * q / L0;
        return -epsilon * w * w * L0 * std::sin(w * t);
      }
      case Kind::custom: return samples->deriv2(t);
    }
    return 0.0;
  }
  // lambda(xi) = 1 / L(xi) and its first two derivatives, for the
  // derivative-expansion solution.
  double lambda(double t) const { return 1.0 / L(t); }
  double lambda_dot(double t) const {
    switch (kind) {
      case Kind::uniform: return -alpha / (L0 * (1.0 + alpha * t) * (1.0 + alpha * t));
      case Kind::reciprocal: return alpha / L0;
      case Kind::resonant:
      case Kind::custom: {
        double l = L(t), ld = Ldot(t);
        return -ld / (l * l);
      }
    }
    return 0.0;
  }
  double lambda_ddot(double t) const {
    switch (kind) {
      case Kind::uniform: {
        double u = 1.0 + alpha * t;
        return 2.0 * alpha * alpha / (L0 * u * u * u);
      }
      case Kind::reciprocal: return 0.0;
      case Kind::resonant: {
        double w = kPi * q / L0;
        double l = L(t), ld = Ldot(t);
        double ldd = -epsilon * w * w * L0 * std::sin(w * t);
        return (2.0 * ld * ld - l * ldd) / (l * l * l);
      }
      case Kind::custom: {
        double l = L(t), ld = Ldot(t), ldd = samples->deriv2(t);
        return (2.0 * ld * ld - l * ldd) / (l * l * l);
      }
    }
    return 0.0;
  }
};

/// Closed-form R for the uniformly moving boundary L = L0 (1 + alpha t):
///   R_alpha(xi) = 2 ln|1 + alpha xi| / ln|(1+v)/(1-v)|,  v = alpha L0.
/// alpha -> 0 reduces smoothly to xi / L0.
inline double r_uniform(double alpha, double L0, double xi) {
  double v = alpha * L0;
  if (std::abs(v) >= 1.0) throw std::domain_error("r_uniform: |alpha * L0| >= 1 (superluminal)");
  if (std::abs(v) < 1e-9) {
    // series in v avoids 0/0: R = (xi/L0) * [1 - (alpha xi - v)/2 * ...] to O(v)
    double u = alpha * xi;
    double num = xi / L0 * (1.0 - 0.5 * u + u * u / 3.0);
    double den = 1.0 - 0.0;  // ln((1+v)/(1-v)) / (2v) = 1 + v^2/3 + ...
    return num / (den + v * v / 3.0);
  }
  return 2.0 * std::log(std::abs(1.0 + alpha * xi)) / std::log(std::abs((1.0 + v) / (1.0 - v)));
}

/// Derivative-expansion solution
///   R(xi) = xi lam - (1/2) xi^2 lam' + (1/6) xi lam'' (xi^2 - L^2) + ...
/// truncated at the requested order (1, 2 or 3). Not valid at large xi.
inline double r_perturbative(const BoundaryMotion& motion, double xi, int order) {
  if (order < 1 || order > 3) throw std::domain_error("r_perturbative: order must be 1, 2 or 3");
  double r = xi * motion.lambda(xi);
  if (order >= 2) r += -0.5 * xi * xi * motion.lambda_dot(xi);
  if (order >= 3) {
    double l = motion.L(xi);
    r += (1.0 / 6.0) * xi * motion.lambda_ddot(xi) * (xi * xi - l * l);
  }
  return r;
}

/// Asymptotic solution for the resonant law L = L0 [1 + eps sin(pi q t / L0)],
/// valid once eps * t / L0 >> 1:
///   R(t) = t - (2/(pi q)) Im ln[1 + zeta + e^{i pi q t} (1 - zeta)],
///   zeta = exp[(-1)^{q+1} pi q eps t],
/// written here for L0 = 1 internally and rescaled via t -> t / L0.
inline double r_resonant_asymptotic(double epsilon, int q, double t, double L0 = 1.0) {
  if (q < 1) throw std::domain_error("r_resonant_asymptotic: q must be >= 1");
  if (epsilon < 0.0) throw std::domain_error("r_resonant_asymptotic: epsilon must be >= 0");
  double u = t / L0;
  double sgn = (q % 2 == 0) ? -1.0 : 1.0;
  double ex = sgn * kPi * q * epsilon * u;
  if (epsilon == 0.0 || ex == 0.0) return u;
  // For large positive exponent factor zeta out to keep doubles finite.
  Complex w;
  if (ex > 40.0) {
    double inv = std::exp(-ex);
    w = inv + 1.0 + std::exp(Complex(0.0, kPi * q * u)) * (inv - 1.0);
  } else {
    double zeta = std::exp(ex);
    w = 1.0 + zeta + std::exp(Complex(0.0, kPi * q * u)) * (1.0 - zeta);
  }
  return u - (2.0 / (kPi * q)) * std::arg(w);
}

/// A solution (or approximate solution) R(xi) of the Moore equation together
/// with its derivative, packaged for the verifiers and the inverse method.
struct RFunction {
  enum class Representation { uniform_closed_form, perturbative_series, resonant_asymptotic, sampled, custom };
  Representation representation = Representation::custom;
  std::function<double(double)> value;
  std::function<double(double)> deriv;  // optional; finite differences if empty

  double operator()(double xi) const { return value(xi); }
  double dvalue(double xi) const {
    if (deriv) return deriv(xi);
    double h = 1e-6 * std::max(1.0, std::abs(xi));
    return (value(xi + h) - value(xi - h)) / (2.0 * h);
  }
};

inline RFunction make_r_uniform(double alpha, double L0) {
  RFunction r;
  r.representation = RFunction::Representation::uniform_closed_form;
  r.value = [alpha, L0](double xi) { return r_uniform(alpha, L0, xi); };
  r.deriv = [alpha, L0](double xi) {
    double v = alpha * L0;
    if (std::abs(v) < 1e-9) return (1.0 - alpha * xi + alpha * alpha * xi * xi) / (L0 * (1.0 + v * v / 3.0));
    return 2.0 * alpha / ((1.0 + alpha * xi) * std::log(std::abs((1.0 + v) / (1.0 - v))));
  };
  return r;
}

inline RFunction make_r_perturbative(const BoundaryMotion& motion, int order) {
  RFunction r;
  r.representation = RFunction::Representation::perturbative_series;
  r.value = [motion, order](double xi) { return r_perturbative(motion, xi, order); };
  return r;
}

inline RFunction make_r_resonant_asymptotic(double epsilon, int q, double L0 = 1.0) {
  RFunction r;
  r.representation = RFunction::Representation::resonant_asymptotic;
  r.value = [epsilon, q, L0](double t) { return r_resonant_asymptotic(epsilon, q, t, L0); };
  return r;
}

inline RFunction make_r_custom(std::function<double(double)> f, std::function<double(double)> df = nullptr) {
  RFunction r;
  r.representation = RFunction::Representation::custom;
  r.value = std::move(f);
  r.deriv = std::move(df);
  return r;
}

/// max_t |R(t + L(t)) - R(t - L(t)) - 2| over the given grid: the universal
/// verification metric of this module.
inline double moore_residual(const RFunction& r, const BoundaryMotion& motion, const std::vector<double>& t_grid) {
  double worst = 0.0;
  for (double t : t_grid) {
    double l = motion.L(t);
    if (!(l > 0.0)) throw std::domain_error("moore_residual: L(t) <= 0 on grid");
    worst = std::max(worst, std::abs(r(t + l) - r(t - l) - 2.0));
  }
  return worst;
}

struct SampledMotion {
  std::vector<double> t;
  std::vector<double> L;
  bool physical = true;  // false if |dL/dt| >= 1 or L <= 0 was hit
  double max_speed = 0.0;
};

/// Inverse method: integrate dL/dt = [R'(t-L) - R'(t+L)] / [R'(t-L) + R'(t+L)]
/// from L(0) = L0. The result is flagged unphysical when the recovered motion
/// is superluminal or the cavity collapses; integration still continues so the
/// caller can inspect where it failed.
inline SampledMotion inverse_motion_from_r(const RFunction& r, double L0, double t_end, double step) {
  if (!(step > 0.0) || !(t_end > 0.0)) throw std::domain_error("inverse_motion_from_r: need positive step and t_end");
  SampledMotion out;
  auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    double rp_m = r.dvalue(t - y[0]);
    double rp_p = r.dvalue(t + y[0]);
    double den = rp_m + rp_p;
    if (rp_m <= 0.0 || rp_p <= 0.0) throw std::domain_error("inverse_motion_from_r: R' <= 0 encountered");
    dy[0] = (rp_m - rp_p) / den;
  };
  std::vector<double> y{L0};
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-10;
  double t = 0.0;
  out.t.push_back(0.0);
  out.L.push_back(L0);
  const long nsteps = static_cast<long>(std::ceil(t_end / step));
  for (long i = 1; i <= nsteps; ++i) {
    double tn = std::min(t_end, i * step);
    integrate_ode(rhs, y, t, tn, opt);
    t = tn;
    out.t.push_back(t);
    out.L.push_back(y[0]);
    std::vector<double> dy(1);
    rhs(t, y, dy);
    out.max_speed = std::max(out.max_speed, std::abs(dy[0]));
    if (y[0] <= 0.0 || std::abs(dy[0]) >= 1.0) out.physical = false;
  }
  return out;
}

/// Mode function A_n(x,t) built from a Moore solution; the normalization
/// reproduces sin(n pi x / L0) exp(-i omega_n t) / sqrt(n) for the static
/// cavity.
inline Complex mode_function(int n, const RFunction& r, double L0, double x, double t) {
  if (n < 1) throw std::domain_error("mode_function: n must be >= 1");
  if (x < 0.0) throw std::domain_error("mode_function: x outside cavity");
  Complex em = std::exp(Complex(0.0, -kPi * n * r(t - x)));
  Complex ep = std::exp(Complex(0.0, -kPi * n * r(t + x)));
  return (em - ep) / (Complex(0.0, 2.0) * std::sqrt(static_cast<double>(n)));
}

}  // namespace dce
