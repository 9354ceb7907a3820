#pragma once

// Single-mode reductions for a three-dimensional nondegenerate cavity:
// parametric amplification of one resonant mode, its squeezed-vacuum
// statistics, the probe-oscillator and two-level (Jaynes-Cummings-type)
// detectors, and the damped parametric oscillator described by the moment
// equations of a Fokker-Planck model.
//
// omega_0 = 1 internally throughout (public interfaces rescale explicitly).

#include <array>
#include <vector>

#include "dce/core.hpp"
#include "dce/ode.hpp"
#include "dce/specfun.hpp"
#include "dce/statistics.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct CavityGeometry {
  double Lx = 1.0, Ly = 1.0, Lz = 0.1;

  /// omega_{mnl} = pi sqrt((m/Lx)^2 + (n/Ly)^2 + (l/Lz)^2)
  double eigenfrequency(int m, int n, int l) const {
    return kPi * std::sqrt(powi(m / Lx, 2) + powi(n / Ly, 2) + powi(l / Lz, 2));
  }

  /// Pairs of distinct mode triples (l = 0 sector) closer than tol in
  /// frequency; an empty result certifies the nondegeneracy the single-mode
  /// reduction requires.
  std::vector<std::array<int, 6>> degenerate_pairs(int max_index, double tol = 1e-9) const {
    std::vector<std::array<int, 6>> bad;
    for (int m1 = 1; m1 <= max_index; ++m1)
      for (int n1 = 1; n1 <= max_index; ++n1)
        for (int m2 = m1; m2 <= max_index; ++m2)
          for (int n2 = (m2 == m1 ? n1 + 1 : 1); n2 <= max_index; ++n2) {
            if (std::abs(eigenfrequency(m1, n1, 0) - eigenfrequency(m2, n2, 0)) < tol)
              bad.push_back({m1, n1, 0, m2, n2, 0});
          }
    return bad;
  }

  /// Scaled-index families (m,n) -> (km, kn): the only equidistant subsets of
  /// the spectrum; their mutual coupling coefficients vanish identically, so
  /// they do not obstruct the single-mode reduction.
  std::vector<std::array<int, 4>> equidistant_subsets(int max_index) const {
    std::vector<std::array<int, 4>> fams;
    for (int m = 1; m <= max_index; ++m)
      for (int n = 1; n <= max_index; ++n)
        for (int k = 2; k * m <= max_index && k * n <= max_index; ++k) fams.push_back({m, n, k * m, k * n});
    return fams;
  }
};

// ---------------------------------------------------------------------------
// Single resonant mode: u'' + omega^2(t) u = 0
// ---------------------------------------------------------------------------

struct ModeSolution {
  Complex u{0.0, 0.0};
  Complex udot{0.0, 0.0};
  double n_mean = 0.0;          // photons from the ground state
  double wronskian_drift = 0.0; // |udot u* - udot* u - 2i|
};

/// Complex classical solution of u'' + omega^2(t) u = 0 with
/// omega(t) = omega0 [1 + 2 eps cos(2 omega0 t)], u(0) = 1/sqrt(omega0),
/// u'(0) = i sqrt(omega0). Direct integration or the slowly-varying-amplitude
/// solution xi = cosh(omega0 eps t), eta = -i sinh(omega0 eps t).
inline ModeSolution classical_mode_solution(double eps_tilde, double omega0, double t_end, bool direct,
                                            double rtol = 1e-12) {
  if (!(omega0 > 0.0)) throw std::domain_error("classical_mode_solution: omega0 must be > 0");
  ModeSolution out;
  if (direct) {
    std::vector<Complex> y{Complex(1.0 / std::sqrt(omega0), 0.0), Complex(0.0, std::sqrt(omega0))};
    auto rhs = [&](double t, const std::vector<Complex>& v, std::vector<Complex>& dv) {
      double w = omega0 * (1.0 + 2.0 * eps_tilde * std::cos(2.0 * omega0 * t));
      dv[0] = v[1];
      dv[1] = -w * w * v[0];
    };
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = 1e-14;
    integrate_ode(rhs, y, 0.0, t_end, opt);
    out.u = y[0];
    out.udot = y[1];
  } else {
    double mu = omega0 * eps_tilde * t_end;
    Complex xi = std::cosh(mu);
    Complex eta = Complex(0.0, -1.0) * std::sinh(mu);
    Complex ep = std::exp(Complex(0.0, omega0 * t_end));
    out.u = (xi * ep + eta * std::conj(ep)) / std::sqrt(omega0);
    out.udot = Complex(0.0, omega0) * (xi * ep - eta * std::conj(ep)) / std::sqrt(omega0);
  }
  out.n_mean = (std::norm(out.udot) + omega0 * omega0 * std::norm(out.u)) / (4.0 * omega0) - 0.5;
  out.wronskian_drift = std::abs(out.udot * std::conj(out.u) - std::conj(out.udot) * out.u - Complex(0.0, 2.0));
  return out;
}

// ---------------------------------------------------------------------------
// Squeezed vacuum of the empty resonant mode
// ---------------------------------------------------------------------------

struct SqueezedVacuumStats {
  double N = 0.0;       // sinh^2 mu
  double U = 0.5;       // e^{-2 mu} / 2
  double V = 0.5;       // e^{+2 mu} / 2
  double sigma_n = 0.0; // (1/2) sinh^2(2 mu)
  std::vector<double> P;  // photon-number probabilities, odd entries exactly 0
};

inline SqueezedVacuumStats squeezed_vacuum_stats(double mu, int n_max = -1) {
  if (mu < 0.0) throw std::domain_error("squeezed_vacuum_stats: mu must be >= 0");
  SqueezedVacuumStats s;
  double th = std::tanh(mu), ch = std::cosh(mu);
  s.N = std::sinh(mu) * std::sinh(mu);
  s.U = 0.5 * std::exp(-2.0 * mu);
  s.V = 0.5 * std::exp(2.0 * mu);
  s.sigma_n = 0.5 * powi(std::sinh(2.0 * mu), 2);
  if (n_max < 0) n_max = std::max(30, static_cast<int>(std::ceil(20.0 * (s.N + 1.0))));
  s.P.assign(n_max + 1, 0.0);
  double p2m = 1.0 / ch;  // P_0
  for (int m = 0; 2 * m <= n_max; ++m) {
    s.P[2 * m] = p2m;
    p2m *= th * th * (2.0 * m + 1.0) / (2.0 * m + 2.0);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Probe harmonic oscillator coupled to the resonant mode (long-time limit)
// ---------------------------------------------------------------------------

struct DetectorCovariance {
  std::array<std::array<double, 2>, 2> M{};  // reduced covariance of the probe
  double T = 0.0, d = 0.0;                   // trace and determinant invariants
  double s = 0.0;                            // minimal quadrature variance (degree of squeezing)
  double N = 0.0;                            // mean quanta in the probe
  double sigma_n = 0.0;
  double mandel_q = 0.0;
  std::vector<double> P;                     // photon distribution (Legendre form)
  bool long_time_valid = true;               // mu >= 2 flag
};

/// Reduced covariance matrix of the probe oscillator after parametric pumping
/// for squeezing parameter mu and accumulated phase phi; derived in the
/// long-time limit mu >> 1 (the mu < 2 case is flagged, not rejected).
inline DetectorCovariance detector_covariance(double mu, double phi, int n_max = -1) {
  DetectorCovariance out;
  double ch2 = std::cosh(mu) * std::cosh(mu), th = std::tanh(mu);
  out.M[0][0] = 0.5 * ch2 * (1.0 - th * std::sin(phi));
  out.M[0][1] = out.M[1][0] = 0.5 * ch2 * th * std::cos(phi);
  out.M[1][1] = 0.5 * ch2 * (1.0 + th * std::sin(phi));
  out.T = out.M[0][0] + out.M[1][1];
  out.d = out.M[0][0] * out.M[1][1] - out.M[0][1] * out.M[1][0];
  out.s = out.T - std::sqrt(out.T * out.T - 4.0 * out.d);
  out.N = 0.5 * (out.T - 1.0);
  out.sigma_n = 0.25 * (2.0 * out.T * out.T - 4.0 * out.d - 1.0);
  out.mandel_q = (out.N > 0.0) ? out.sigma_n / out.N - 1.0 : 0.0;
  out.long_time_valid = (mu >= 2.0);
  // P_n = 2 (i z)^n / sqrt(1 + 3 cosh^2 mu) * P_n(-i z),
  // z = sinh(mu) / sqrt(1 + 3 cosh^2 mu)
  double root = std::sqrt(1.0 + 3.0 * ch2);
  double z = std::sinh(mu) / root;
  if (n_max < 0) n_max = std::max(30, static_cast<int>(std::ceil(20.0 * (out.N + 1.0))));
  out.P.assign(n_max + 1, 0.0);
  // scaled recurrence on q_n = (i z)^n P_n(-i z) (real by parity)
  Complex iz(0.0, z), miz(0.0, -z);
  Complex q0 = 1.0, q1 = iz * miz;  // n = 1 term: (iz) * P_1(-iz)
  for (int n = 0; n <= n_max; ++n) {
    Complex qn;
    if (n == 0)
      qn = q0;
    else if (n == 1)
      qn = q1;
    else {
      qn = ((2.0 * n - 1.0) * (iz * miz) * q1 - (n - 1.0) * (iz * iz) * q0) / static_cast<double>(n);
      q0 = q1;
      q1 = qn;
    }
    out.P[n] = 2.0 / root * qn.real();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-level detector (Jaynes-Cummings type) under resonant wall vibration
// ---------------------------------------------------------------------------

struct JcDetectorResult {
  double P1 = 0.0;      // 1 photon present (detector excited)
  double P2 = 0.0;      // 2 photons present (detector in ground state)
  double Pplus = 0.0;   // detector excited
  double theta1 = 0.0;  // dressed-state mixing angle
  double rabi = 0.0;    // slow Rabi frequency alpha = sin(theta1) eps sqrt(2)/4
  bool validity_warning = false;  // eps_tilde not << kappa_c
};

/// Resonantly driven Jaynes-Cummings detector: level splitting Omega (field
/// mode at 1), coupling kappa_c, wall amplitude eps_tilde << kappa_c, drive
/// tuned to nu = lambda_1 = sqrt((1-Omega)^2/4 + 2 kappa_c^2).
inline JcDetectorResult jc_detector(double Omega, double kappa_c, double eps_tilde, double t) {
  if (!(kappa_c > 0.0)) throw std::domain_error("jc_detector: kappa_c must be > 0");
  JcDetectorResult r;
  r.validity_warning = !(eps_tilde < 0.2 * kappa_c);
  double lam1 = std::sqrt(0.25 * powi(1.0 - Omega, 2) + 2.0 * kappa_c * kappa_c);
  double tan1 = std::sqrt((2.0 * lam1 - 1.0 + Omega) / (2.0 * lam1 + 1.0 - Omega));
  r.theta1 = std::atan(tan1);
  r.rabi = std::sin(r.theta1) * eps_tilde * std::sqrt(2.0) / 4.0;
  double s2 = powi(std::sin(r.rabi * t), 2);
  r.P1 = powi(std::cos(r.theta1), 2) * s2;
  r.P2 = powi(std::sin(r.theta1), 2) * s2;
  r.Pplus = r.P1;
  return r;
}

// ---------------------------------------------------------------------------
// Damped parametric oscillator (moment / Fokker-Planck description)
// ---------------------------------------------------------------------------

struct DampedOscParams {
  double kappa = 1e-3;   // eps_tilde * omega0 (parametric drive strength)
  double delta = 0.0;    // detuning: wall at Omega = 2 (omega0 + delta)
  double gamma = 0.0;    // damping, 2 gamma = omega0 / Q
  double E_star = 0.5;   // equilibrium energy (>= 1/2 at T = 0)

  Complex nu() const { return std::sqrt(Complex(kappa * kappa - delta * delta, 0.0)); }
  void validate() const {
    if (gamma < 0.0) throw std::domain_error("DampedOscParams: gamma must be >= 0");
    if (E_star < 0.5 - 1e-12) throw std::domain_error("DampedOscParams: E_star must be >= 1/2");
  }
};

struct DampedOscState {
  double A = 0.0, B = 0.0, C = 0.0;  // slow amplitudes; A is the mean energy
  double sigma_qq = 0.0, sigma_pq = 0.0, sigma_pp = 0.0;
  double E = 0.0;  // (sigma_qq + sigma_pp)/2
  double d = 0.0;  // sigma_qq sigma_pp - sigma_pq^2  (>= 1/4 for physical states)
  double u = 0.0;  // minimal invariant variance E - sqrt(E^2 - d)
  double t = 0.0;
};

namespace detail {

inline DampedOscState pack_damped(double A, double B, double C, double t, double delta) {
  DampedOscState s;
  s.A = A;
  s.B = B;
  s.C = C;
  s.t = t;
  double Om = 2.0 * (1.0 + delta);
  s.sigma_qq = A + B * std::cos(Om * t) + C * std::sin(Om * t);
  s.sigma_pp = A - B * std::cos(Om * t) - C * std::sin(Om * t);
  s.sigma_pq = C * std::cos(Om * t) - B * std::sin(Om * t);
  s.E = A;
  s.d = A * A - B * B - C * C;
  s.u = A - std::sqrt(B * B + C * C);
  return s;
}

}  // namespace detail

/// Evolve the second moments of the damped parametric oscillator.
/// direct = true integrates the full moment equations with
/// omega(t) = 1 + 2 eps sin(Omega t); otherwise the closed slow-amplitude
/// solutions A(t), B(t), C(t) are evaluated (degenerate nu = gamma handled by
/// its limit).
inline DampedOscState damped_moments_evolve(const DampedOscParams& par, std::array<double, 3> sigma0, double t_end,
                                            bool direct, double rtol = 1e-11) {
  par.validate();
  const double A0 = 0.5 * (sigma0[0] + sigma0[2]);
  const double B0 = 0.5 * (sigma0[0] - sigma0[2]);
  const double C0 = sigma0[1];
  if (direct) {
    const double Om = 2.0 * (1.0 + par.delta);
    const double eps = par.kappa;  // omega0 = 1
    std::vector<double> y{sigma0[0], sigma0[1], sigma0[2]};
    auto rhs = [&](double t, const std::vector<double>& v, std::vector<double>& dv) {
      double w = 1.0 + 2.0 * eps * std::sin(Om * t);
      double w2 = w * w;
      dv[0] = 2.0 * v[1] - 2.0 * par.gamma * v[0] + 2.0 * par.gamma * par.E_star;
      dv[1] = v[2] - w2 * v[0] - 2.0 * par.gamma * v[1];
      dv[2] = -2.0 * w2 * v[1] - 2.0 * par.gamma * v[2] + 2.0 * par.gamma * par.E_star;
    };
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = 1e-13;
    integrate_ode(rhs, y, 0.0, t_end, opt);
    DampedOscState s;
    s.sigma_qq = y[0];
    s.sigma_pq = y[1];
    s.sigma_pp = y[2];
    s.t = t_end;
    s.E = 0.5 * (y[0] + y[2]);
    s.d = y[0] * y[2] - y[1] * y[1];
    s.u = s.E - std::sqrt(std::max(0.0, s.E * s.E - s.d));
    double Omt = Om * t_end;
    s.A = s.E;
    s.B = 0.5 * (y[0] - y[2]) * std::cos(Omt) - y[1] * std::sin(Omt);
    s.C = 0.5 * (y[0] - y[2]) * std::sin(Omt) + y[1] * std::cos(Omt);
    return s;
  }
  // slow closed solutions
  const double k = par.kappa, dl = par.delta, g = par.gamma, Es = par.E_star;
  if (k == 0.0) {
    // drive off: A relaxes, (B, C) spiral down at rate 2 gamma, frequency 2 delta
    double A = Es + (A0 - Es) * std::exp(-2.0 * g * t_end);
    Complex bc = Complex(B0, C0) * std::exp(Complex(-2.0 * g * t_end, 2.0 * dl * t_end));
    return detail::pack_damped(A, bc.real(), bc.imag(), t_end, dl);
  }
  Complex nu = par.nu();
  // degenerate denominators (nu ~ gamma at threshold, nu ~ 0 at kappa = delta)
  // are taken through a tiny split of nu; the induced error is O(1e-8 kappa t)
  if (nu.imag() == 0.0 && std::abs(nu.real() - g) < 1e-9 * std::max(g + k, 1e-300))
    nu = Complex(g * (1.0 + 3e-8) + 1e-300, 0.0);
  if (std::abs(nu) < 1e-9 * k) nu = Complex(1e-9 * k, 0.0);
  Complex g2nu2 = Complex(g * g, 0.0) - nu * nu;
  Complex As = (g * g + dl * dl) * Es / g2nu2;
  Complex Bs = k * g * Es / g2nu2;
  Complex Cs = k * dl * Es / g2nu2;
  Complex a0 = (k * C0 - dl * A0 + Es * dl) / (nu * nu);
  Complex ap = (k * A0 - dl * C0 + nu * B0 - k * g * Es / (g - nu)) / (2.0 * nu * nu);
  Complex am = (k * A0 - dl * C0 - nu * B0 - k * g * Es / (g + nu)) / (2.0 * nu * nu);
  Complex ep = std::exp(2.0 * nu * t_end), em = 1.0 / ep;
  double decay = std::exp(-2.0 * g * t_end);
  Complex A = As + decay * (a0 * dl + ap * k * ep + am * k * em);
  Complex B = Bs + decay * (ap * nu * ep - am * nu * em);
  Complex C = Cs + decay * (a0 * k + ap * dl * ep + am * dl * em);
  return detail::pack_damped(A.real(), B.real(), C.real(), t_end, dl);
}

struct StabilityResult {
  bool stable = true;
  double E_inf = 0.0, d_inf = 0.0, u_inf = 0.0;  // stable side asymptotics
  double growth_rate = 0.0;                      // unstable: E ~ e^{2(nu - gamma) t}
  double u_inf_unstable = 0.0;                   // gamma E_eq / (gamma + nu), thermal start
};

/// Threshold classification gamma^2 + delta^2 vs kappa^2 with the asymptotic
/// energy, d-invariant, and minimal variance on the stable side, or the
/// growth rate and limiting minimal variance (thermal start) above threshold.
inline StabilityResult stability_classify(const DampedOscParams& par) {
  par.validate();
  StabilityResult r;
  const double g = par.gamma, dl = par.delta, k = par.kappa, E = par.E_star;
  r.stable = (g * g + dl * dl > k * k);
  if (r.stable) {
    double denom = g * g + dl * dl - k * k;  // = gamma^2 - nu^2
    r.E_inf = (g * g + dl * dl) * E / denom;
    r.d_inf = (g * g + dl * dl) * E * E / denom;
    r.u_inf = std::sqrt(g * g + dl * dl) * E / (k + std::sqrt(g * g + dl * dl));
  } else {
    double nu = std::sqrt(k * k - dl * dl);
    r.growth_rate = 2.0 * (nu - g);
    r.u_inf_unstable = g * E / (g + nu);
  }
  return r;
}

/// d(t) for an initial thermal-equilibrium state (closed form).
inline double damped_d_thermal(const DampedOscParams& par, double t) {
  const double g = par.gamma, k = par.kappa, E = par.E_star;
  Complex nu = par.nu();
  if (std::abs(nu) < 1e-300) return E * E;
  Complex nom = 2.0 * k * k * g * std::exp(-2.0 * g * t) * std::sinh(2.0 * nu * t) +
                k * k * nu * std::exp(-4.0 * g * t) - nu * (g * g + par.delta * par.delta);
  Complex val = E * E / (nu * (nu * nu - Complex(g * g, 0.0))) * nom;
  return val.real();
}

}  // namespace dce
