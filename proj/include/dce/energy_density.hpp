#pragma once

// Spatial energy density W(x,t) of the field after the wall stops moving
// (units hbar = c = L0 = 1, so the static vacuum Casimir density is
// -pi/24). The density is a sum of two identical functions of the light-cone
// variables,
//   W(x,t) = (pi/2) [ F(t'+x) + F(t'-x) ],
//   F(u)   = -B + f(u;kappa) { B + state terms },   B = (p^2 - 1)/24,
//   f(u;k) = (1-k^2)^2 / [1 + k^2 + 2 sigma k cos(p pi u - phi)]^2,
// with the state terms built from G^{(n)}(u) = n z (z g + sigma S)^{n/p - 1}
// (g* + sigma S z)^{-n/p - 1}, z = exp(-i pi p u). The vacuum Casimir
// constant is never added silently; it is carried as a separate field.

#include <vector>

#include "dce/closedform.hpp"
#include "dce/core.hpp"
#include "dce/statistics.hpp"

namespace dce {

/// Point-splitting regularization of the static vacuum energy density at
/// separation eta:  (pi/8) sinh^{-2}(pi eta / 2) - 1/(2 pi eta^2)
/// = -pi/24 + (pi^3/480) eta^2 + O(eta^4).
inline double casimir_point_split(double eta) {
  if (!(eta > 0.0)) throw std::domain_error("casimir_point_split: eta must be > 0");
  double s = std::sinh(0.5 * kPi * eta);
  return kPi / (8.0 * s * s) - 1.0 / (2.0 * kPi * eta * eta);
}

struct CasimirResult {
  double value = 0.0;                  // Richardson-extrapolated eta -> 0 limit
  std::vector<double> raw;             // point-split values at the input etas
};

/// Richardson extrapolation of the point-split density to eta -> 0 over a
/// decreasing sequence of at least 4 separations; converges to -pi/24.
inline CasimirResult casimir_regularized(const std::vector<double>& etas) {
  if (etas.size() < 4) throw std::invalid_argument("casimir_regularized: need at least 4 separations");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(etas[i] > 0.0) || etas[i] > 0.5) throw std::invalid_argument("casimir_regularized: eta must lie in (0, 0.5]");
    if (i > 0 && !(etas[i] < etas[i - 1]))
      throw std::invalid_argument("casimir_regularized: separations must decrease");
  }
  CasimirResult res;
  res.raw.reserve(etas.size());
  for (double e : etas) res.raw.push_back(casimir_point_split(e));
  // Neville tableau in the variable eta^2 (the series is even in eta)
  std::vector<double> t = res.raw;
  std::vector<double> x(etas.size());
  for (std::size_t i = 0; i < etas.size(); ++i) x[i] = etas[i] * etas[i];
  for (std::size_t k = 1; k < t.size(); ++k)
    for (std::size_t i = 0; i + k < t.size(); ++i)
      t[i] = (x[i + k] * t[i] - x[i] * t[i + 1]) / (x[i + k] - x[i]);
  res.value = t[0];
  return res;
}

namespace detail {

// shared u-dependent pieces of F(u)
struct LightconeEval {
  int p;
  double sigma;
  KappaLambda kl;
  double phi;  // arg(lambda)

  explicit LightconeEval(int p_, double gamma, double tau)
      : p(p_), sigma(p_ % 2 == 0 ? 1.0 : -1.0), kl(kappa_lambda(gamma, p_ * tau)), phi(kl.lambda_arg) {}

  double f_of_u(double u) const {
    double k = kl.kappa;
    double den = 1.0 + k * k + 2.0 * sigma * k * std::cos(p * kPi * u - phi);
    return powi(1.0 - k * k, 2) / (den * den);
  }

  // G^{(n)}(u) = n z M^{n/p} / (w1 w2) on the continuous branch
  Complex G(int n, double u) const {
    Complex z = std::exp(Complex(0.0, -kPi * p * u));
    Complex w1 = z * kl.g + sigma * kl.S;
    Complex w2 = std::conj(kl.g) + sigma * kl.S * z;
    double phiM = -kPi * p * u - 2.0 * std::arg(w2);
    return static_cast<double>(n) * z * std::exp(Complex(0.0, (static_cast<double>(n) / p) * phiM)) / (w1 * w2);
  }

  double F(double u, const InitialFieldState& state) const {
    const double B = (static_cast<double>(p) * p - 1.0) / 24.0;
    double base = B * (f_of_u(u) - 1.0);
    if (state.kind == InitialFieldState::Kind::vacuum) return base;
    if (state.kind == InitialFieldState::Kind::diagonal) {
      // F_diag = -B + f (B + N0), N0 = sum n nu_n
      return base + f_of_u(u) * state.total_energy_omega1();
    }
    const int C = state.mode_cutoff;
    std::vector<Complex> Gs(C + 1);
    for (int n = 1; n <= C; ++n) Gs[n] = G(n, u);
    double acc = 0.0;
    for (int n = 1; n <= C; ++n)
      for (int k = 1; k <= C; ++k) {
        double w = 1.0 / std::sqrt(static_cast<double>(n) * k);
        Complex t = state.moment_b_b(n, k) * Gs[n] * Gs[k] + state.moment_bdag_b(n, k) * std::conj(Gs[n]) * Gs[k];
        acc += w * t.real();
      }
    return base + acc;
  }
};

}  // namespace detail

struct Peak {
  double x = 0.0;
  double height = 0.0;
  double width_quarter = 0.0;  // distance between the points where W drops 4x
  double width_energy = 0.0;   // E(tau)/(p * height)
  bool is_maximum = true;
};

struct EnergyProfile {
  int p = 2;
  double gamma = 0.0;
  double tau = 0.0;
  double t = 0.0;  // fast time (measured from the stop instant)
  std::vector<double> x;
  std::vector<double> W;                  // dynamical density, Casimir level excluded
  double casimir_constant = -kPi / 24.0;  // add to W for the absolute density
  double state_energy_omega1 = 0.0;       // diagonal/vacuum N0 used by predictions
  bool state_diagonal = true;
};

/// Energy density W(x, t) over the given x grid (all x in [0,1]). The
/// profile excludes the static Casimir constant, reported separately.
inline EnergyProfile density_profile(int p, double gamma, double tau, const InitialFieldState& state, double t,
                                     const std::vector<double>& x_grid) {
  if (p < 1) throw std::domain_error("density_profile: p must be >= 1");
  state.validate();
  detail::LightconeEval ev(p, gamma, tau);
  EnergyProfile prof;
  prof.p = p;
  prof.gamma = gamma;
  prof.tau = tau;
  prof.t = t;
  prof.x = x_grid;
  prof.W.resize(x_grid.size());
  prof.state_energy_omega1 = state.total_energy_omega1();
  prof.state_diagonal = (state.kind != InitialFieldState::Kind::gaussian);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    double x = x_grid[i];
    if (x < -1e-12 || x > 1.0 + 1e-12) throw std::domain_error("density_profile: x outside [0,1]");
    prof.W[i] = 0.5 * kPi * (ev.F(t + x, state) + ev.F(t - x, state));
  }
  return prof;
}

/// Continuous evaluator used by the peak refinement and tests.
inline double density_at(int p, double gamma, double tau, const InitialFieldState& state, double t, double x) {
  detail::LightconeEval ev(p, gamma, tau);
  return 0.5 * kPi * (ev.F(t + x, state) + ev.F(t - x, state));
}

/// Uniform x grid with extra points packed around the predicted peak
/// positions (peaks narrow like e^{-2 p tau}, so uniform sampling alone
/// misses them quickly).
inline std::vector<double> refined_density_grid(int p, double gamma, double tau, double t, int n_base = 1024) {
  detail::LightconeEval ev(p, gamma, tau);
  std::vector<double> xs;
  xs.reserve(n_base + 64 * 2 * p);
  for (int i = 0; i <= n_base; ++i) xs.push_back(static_cast<double>(i) / n_base);
  // peak positions: sigma cos(p pi u - phi) = -1 on either light cone
  double k = std::abs(ev.kl.kappa);
  double width = std::max(1e-9, 2.0 / (p * kPi) * (1.0 - k) / std::sqrt(std::max(k, 1e-12)));
  double off = (ev.sigma > 0.0) ? kPi : 0.0;
  for (int branch = 0; branch < 2; ++branch) {
    double ulo = (branch == 0) ? t : t - 1.0;  // u = t + x or v = t - x, x in [0,1]
    long mlo = static_cast<long>(std::floor((p * kPi * (ulo - 0.1) - ev.phi - off) / (2.0 * kPi))) - 1;
    long mhi = static_cast<long>(std::ceil((p * kPi * (ulo + 1.1) - ev.phi - off) / (2.0 * kPi))) + 1;
    for (long m = mlo; m <= mhi; ++m) {
      double ustar = (ev.phi + off + 2.0 * kPi * m) / (p * kPi);
      double x = (branch == 0) ? (ustar - t) : (t - ustar);
      if (x < -0.05 || x > 1.05) continue;
      for (int s = -32; s <= 32; ++s) {
        double xx = x + width * s / 8.0;
        if (xx >= 0.0 && xx <= 1.0) xs.push_back(xx);
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }), xs.end());
  return xs;
}

struct PeakAnalysis {
  std::vector<Peak> maxima;
  std::vector<Peak> minima;
  double predicted_height = 0.0;        // single light-cone prediction (gamma = 0 form: (pi/2) B (e^{4 p tau} - 1))
  double predicted_height_exact = 0.0;  // both light-cone terms at the peak position
  double predicted_min = 0.0;           // pi (B + N0) (e^{-4 p tau} - 1) analogue
  double predicted_width_quarter = 0.0;
};

/// Locate and refine extrema of a profile; compare with the closed-form peak
/// height and width. Throws when the grid is too coarse to resolve the
/// quarter width (suggesting a finer size in the message).
inline PeakAnalysis peak_analysis(const EnergyProfile& prof, const InitialFieldState& state) {
  if (prof.x.size() < 8) throw std::invalid_argument("peak_analysis: profile too small");
  const int p = prof.p;
  detail::LightconeEval ev(p, prof.gamma, prof.tau);
  double k = std::abs(ev.kl.kappa);
  PeakAnalysis out;
  double B = (static_cast<double>(p) * p - 1.0) / 24.0;
  double boost = prof.state_diagonal ? prof.state_energy_omega1 : 0.0;
  double fmax = powi((1.0 + k) / (1.0 - k), 2), fmin = powi((1.0 - k) / (1.0 + k), 2);
  // one light-cone term at its maximum (the gamma = 0 vacuum value is
  // (pi/2) B (e^{4 p tau} - 1)); "exact" adds the off-peak second term
  out.predicted_height = 0.5 * kPi * ((B + boost) * fmax - B);
  out.predicted_height_exact = 0.5 * kPi * ((B + boost) * (fmax + fmin) - 2.0 * B);
  out.predicted_min = kPi * ((B + boost) * fmin - B);
  out.predicted_width_quarter = 2.0 / (p * kPi) * (1.0 - k) / std::sqrt(std::max(k, 1e-300));

  double grid_step = 1.0;
  for (std::size_t i = 1; i < prof.x.size(); ++i) grid_step = std::min(grid_step, prof.x[i] - prof.x[i - 1]);
  if (grid_step > out.predicted_width_quarter / 4.0 && k > 0.1) {
    int suggested = static_cast<int>(std::ceil(32.0 / out.predicted_width_quarter));
    throw std::invalid_argument("peak_analysis: grid too coarse to resolve peaks; need about " +
                                std::to_string(suggested) + " points (or refined_density_grid)");
  }

  auto refine = [&](std::size_t i, bool want_max) {
    // golden-section polish on the continuous evaluator
    double a = prof.x[i - 1], b = prof.x[i + 1];
    auto val = [&](double x) {
      double w = density_at(p, prof.gamma, prof.tau, state, prof.t, x);
      return want_max ? -w : w;
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = val(c), fd = val(d);
    for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = val(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = val(d);
      }
    }
    double x = 0.5 * (a + b);
    Peak pk;
    pk.x = x;
    pk.height = density_at(p, prof.gamma, prof.tau, state, prof.t, x);
    pk.is_maximum = want_max;
    if (want_max && pk.height > 0.0) {
      // quarter width by bisection on both sides
      double target = pk.height / 4.0;
      auto cross = [&](double dir) {
        double lo = x, hi = x + dir * std::max(4.0 * out.predicted_width_quarter, 4.0 * grid_step);
        for (int it = 0; it < 200; ++it) {
          double mid = 0.5 * (lo + hi);
          double w = density_at(p, prof.gamma, prof.tau, state, prof.t, mid);
          if (w > target)
            lo = mid;
          else
            hi = mid;
        }
        return std::abs(0.5 * (lo + hi) - x);
      };
      pk.width_quarter = cross(+1.0) + cross(-1.0);
    }
    return pk;
  };

  for (std::size_t i = 1; i + 1 < prof.x.size(); ++i) {
    if (prof.W[i] > prof.W[i - 1] && prof.W[i] >= prof.W[i + 1]) {
      Peak pk = refine(i, true);
      // de-duplicate refinements converging to the same extremum
      bool dup = false;
      for (const Peak& q : out.maxima)
        if (std::abs(q.x - pk.x) < 1e-9) dup = true;
      if (!dup && pk.height > 0.25 * out.predicted_height) out.maxima.push_back(pk);
    }
    if (prof.W[i] < prof.W[i - 1] && prof.W[i] <= prof.W[i + 1]) {
      Peak pk = refine(i, false);
      bool dup = false;
      for (const Peak& q : out.minima)
        if (std::abs(q.x - pk.x) < 1e-9) dup = true;
      if (!dup) out.minima.push_back(pk);
    }
  }
  return out;
}

/// Fine structure of a peak for an initial coherent state |alpha| e^{i psi}
/// in mode 1 at p = 2, gamma = 0:
///   dW(z) = pi |alpha|^2 (1-k^2)^2 [k sin(z+psi) + sin(z-psi)]^2
///           / [(1-k)^2 + 4 k sin^2 z]^3,     z = pi (u - u*).
inline double fine_structure_coherent(Complex alpha, double tau, double z) {
  double k = std::tanh(2.0 * tau);
  double psi = std::arg(alpha);
  double num = powi(1.0 - k * k, 2) * powi(k * std::sin(z + psi) + std::sin(z - psi), 2);
  double den = powi(powi(1.0 - k, 2) + 4.0 * k * powi(std::sin(z), 2), 3);
  return kPi * std::norm(alpha) * num / den;
}

}  // namespace dce
