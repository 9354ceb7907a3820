#pragma once

// Photon statistics of the field after the wall stops: per-mode quadrature
// (co)variances and occupations, squeezing, photon-generation rates, total
// energy, purity, the Mandel parameter, and the full photon distribution of
// the resulting Gaussian states.
//
// Everything consumes either the numeric BogoliubovMatrix or the closed-form
// coefficients through a common RhoSource handle. With the closed forms the
// vacuum (co)variances are obtained by integrating their exact rate
// expressions in the slow time, which involve only the first p-1 columns and
// therefore stay cheap at arbitrarily large tau.

#include <algorithm>
#include <cmath>
#include <vector>

#include "dce/closedform.hpp"
#include "dce/core.hpp"
#include "dce/evolution.hpp"
#include "dce/ode.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Initial field state
// ---------------------------------------------------------------------------

struct InitialFieldState {
  enum class Kind { vacuum, diagonal, gaussian };
  Kind kind = Kind::vacuum;
  int mode_cutoff = 0;                 // highest initially occupied mode
  std::vector<double> nu;              // diagonal occupations nu[n-1], n <= mode_cutoff
  std::vector<Complex> bdag_b;         // <b_n^+ b_k>, row-major cutoff x cutoff
  std::vector<Complex> b_b;            // <b_n b_k>
  std::vector<Complex> mean_b;         // <b_n>

  static InitialFieldState vacuum_state() { return {}; }

  static InitialFieldState diagonal(std::vector<double> occupations) {
    InitialFieldState s;
    s.kind = Kind::diagonal;
    s.nu = std::move(occupations);
    s.mode_cutoff = static_cast<int>(s.nu.size());
    for (double v : s.nu)
      if (v < 0.0) throw std::domain_error("InitialFieldState: occupations must be >= 0");
    return s;
  }

  /// Planck occupations nu_n = 1/(e^{beta n} - 1), n <= cutoff.
  static InitialFieldState thermal(double beta, int cutoff) {
    if (!(beta > 0.0)) throw std::domain_error("InitialFieldState: beta must be > 0");
    std::vector<double> v(cutoff);
    for (int n = 1; n <= cutoff; ++n) v[n - 1] = 1.0 / std::expm1(beta * n);
    return diagonal(std::move(v));
  }

  /// Low-temperature approximation nu_n = e^{-beta n}.
  static InitialFieldState thermal_low_t(double beta, int cutoff) {
    std::vector<double> v(cutoff);
    for (int n = 1; n <= cutoff; ++n) v[n - 1] = std::exp(-beta * n);
    return diagonal(std::move(v));
  }

  /// High-temperature equipartition nu_n = Theta / n up to the cutoff.
  static InitialFieldState high_temperature(double Theta, int cutoff) {
    std::vector<double> v(cutoff);
    for (int n = 1; n <= cutoff; ++n) v[n - 1] = Theta / n;
    return diagonal(std::move(v));
  }

  static InitialFieldState single_mode(int n, double occupation) {
    std::vector<double> v(n, 0.0);
    v[n - 1] = occupation;
    return diagonal(std::move(v));
  }

  /// Coherent state |alpha> in mode n, vacuum elsewhere.
  static InitialFieldState coherent(int n, Complex alpha) {
    InitialFieldState s;
    s.kind = Kind::gaussian;
    s.mode_cutoff = n;
    s.bdag_b.assign(static_cast<std::size_t>(n) * n, 0.0);
    s.b_b.assign(static_cast<std::size_t>(n) * n, 0.0);
    s.mean_b.assign(n, 0.0);
    s.bdag_b[static_cast<std::size_t>(n - 1) * n + (n - 1)] = std::norm(alpha);
    s.b_b[static_cast<std::size_t>(n - 1) * n + (n - 1)] = alpha * alpha;
    s.mean_b[n - 1] = alpha;
    return s;
  }

  Complex moment_bdag_b(int n, int k) const {
    if (kind == Kind::vacuum || n > mode_cutoff || k > mode_cutoff) return 0.0;
    if (kind == Kind::diagonal) return (n == k) ? Complex(nu[n - 1], 0.0) : Complex(0.0, 0.0);
    return bdag_b[static_cast<std::size_t>(n - 1) * mode_cutoff + (k - 1)];
  }
  Complex moment_b_b(int n, int k) const {
    if (kind != Kind::gaussian || n > mode_cutoff || k > mode_cutoff) return 0.0;
    return b_b[static_cast<std::size_t>(n - 1) * mode_cutoff + (k - 1)];
  }
  Complex mean(int n) const {
    if (kind != Kind::gaussian || n > mode_cutoff) return 0.0;
    return mean_b[n - 1];
  }
  // centered second moments (the variance corrections use these)
  Complex centered_bdag_b(int n, int k) const { return moment_bdag_b(n, k) - std::conj(mean(n)) * mean(k); }
  Complex centered_b_b(int n, int k) const { return moment_b_b(n, k) - mean(n) * mean(k); }

  double total_energy_omega1() const {  // sum n <b_n^+ b_n>, units of h-bar omega_1
    double e = 0.0;
    for (int n = 1; n <= mode_cutoff; ++n) e += n * moment_bdag_b(n, n).real();
    return e;
  }
  double total_photons() const {
    double e = 0.0;
    for (int n = 1; n <= mode_cutoff; ++n) e += moment_bdag_b(n, n).real();
    return e;
  }

  /// Hermiticity/symmetry and positivity of the centered <b^+ b> matrix.
  void validate() const {
    if (kind != Kind::gaussian) return;
    const int C = mode_cutoff;
    for (int n = 1; n <= C; ++n)
      for (int k = 1; k <= C; ++k) {
        if (std::abs(centered_bdag_b(n, k) - std::conj(centered_bdag_b(k, n))) > 1e-10)
          throw std::domain_error("InitialFieldState: <b^+ b> not Hermitian");
        if (std::abs(moment_b_b(n, k) - moment_b_b(k, n)) > 1e-10)
          throw std::domain_error("InitialFieldState: <b b> not symmetric");
      }
    // Cholesky-style positivity check of the centered <b^+ b> matrix
    std::vector<Complex> A(static_cast<std::size_t>(C) * C);
    for (int n = 0; n < C; ++n)
      for (int k = 0; k < C; ++k) A[static_cast<std::size_t>(n) * C + k] = centered_bdag_b(n + 1, k + 1);
    for (int i = 0; i < C; ++i) {
      Complex d = A[static_cast<std::size_t>(i) * C + i];
      if (d.real() < -1e-10) throw std::domain_error("InitialFieldState: <b^+ b> not positive semidefinite");
      double dr = std::max(d.real(), 0.0);
      if (dr < 1e-14) continue;
      for (int jj = i + 1; jj < C; ++jj)
        for (int k = i + 1; k <= jj; ++k)
          A[static_cast<std::size_t>(jj) * C + k] -=
              A[static_cast<std::size_t>(jj) * C + i] * std::conj(A[static_cast<std::size_t>(k) * C + i]) / dr;
    }
  }
};

// ---------------------------------------------------------------------------
// Coefficient source: numeric matrix or closed forms
// ---------------------------------------------------------------------------

class RhoSource {
 public:
  explicit RhoSource(const BogoliubovMatrix& m) : mat_(&m), p_(m.p), gamma_(m.gamma), tau_(m.tau) {}
  RhoSource(int p, double gamma, double tau) : p_(p), gamma_(gamma), tau_(tau) {}

  bool closed_form() const { return mat_ == nullptr; }
  int p() const { return p_; }
  double gamma() const { return gamma_; }
  double tau() const { return tau_; }
  int max_column() const { return mat_ ? mat_->columns : 1 << 24; }

  Complex rho(int m, int n) const { return mat_ ? mat_->at(m, n) : rho_closed(p_, gamma_, tau_, m, n); }

 private:
  const BogoliubovMatrix* mat_ = nullptr;
  int p_;
  double gamma_;
  double tau_;
};

// ---------------------------------------------------------------------------
// Quadrature moments
// ---------------------------------------------------------------------------

struct QuadratureMoments {
  int mode = 0;
  double U = 0.5, V = 0.5, Y = 0.0;  // variances and covariance at the stop instant
  double u = 0.5, v = 0.5;           // extremal variances over a fast period
  double N = 0.0;                    // mean photon number
  double mean_q = 0.0, mean_p = 0.0;
  double mandel_q = 1.0;
  double purity = 1.0;
};

inline std::pair<double, double> minmax_variances(double U, double V, double Y) {
  double s = std::sqrt((U - V) * (U - V) + 4.0 * Y * Y);
  return {0.5 * (U + V - s), 0.5 * (U + V + s)};
}

/// Mandel Q and purity chi from the moments. The exact vacuum is reported
/// with the principal-mode limit Q -> 1.
inline std::pair<double, double> mandel_and_purity(const QuadratureMoments& qm) {
  double det = qm.U * qm.V - qm.Y * qm.Y;
  if (det <= 0.0) throw std::domain_error("mandel_and_purity: unphysical moments");
  double chi = 1.0 / std::sqrt(4.0 * det);
  double nbar = 0.5 * (qm.u + qm.v - 1.0);
  double Q;
  if (std::abs(nbar) < 1e-14) {
    Q = 1.0;
  } else {
    double sn = 0.25 * (2.0 * qm.u * qm.u + 2.0 * qm.v * qm.v - 1.0);
    Q = sn / nbar - 1.0;
  }
  return {Q, chi};
}

namespace detail {

// Vacuum (co)variance rates in the slow time for mode m (j = m mod p):
//   j = 0:        dU = dV = dY = 0 (no vacuum excitation of multiples of p)
//   j = p/2:      dU/dtau = -m Re[(rho_m^{(p/2)} - rho_-m^{(p/2)})^2]
//                 dV/dtau = +m Re[(rho_m^{(p/2)} + rho_-m^{(p/2)})^2]
//                 dY/dtau =  m Im[conj(rho_m^{(p/2)})^2 + (rho_-m^{(p/2)})^2]
//   otherwise:    dU = dV = 2 sigma m Re[rho_m^{(j)} rho_-m^{(p-j)}], dY = 0.
struct VacuumRates {
  double dU = 0.0, dV = 0.0, dY = 0.0;
};

inline VacuumRates vacuum_rates(int p, double gamma, double tau, int m) {
  VacuumRates r;
  int j = m % p;
  if (j == 0) return r;
  if (p % 2 == 0 && j == p / 2) {
    Complex rp = rho_closed(p, gamma, tau, m, p / 2);
    Complex rm = rho_closed(p, gamma, tau, -m, p / 2);
    Complex dm = rp - rm, sm = rp + rm;
    r.dU = -m * (dm * dm).real();
    r.dV = m * (sm * sm).real();
    r.dY = m * (std::conj(rp) * std::conj(rp) + rm * rm).imag();
    return r;
  }
  double sigma = (p % 2 == 0) ? 1.0 : -1.0;
  Complex a = rho_closed(p, gamma, tau, m, j);
  Complex b = rho_closed(p, gamma, tau, -m, p - j);
  r.dU = r.dV = 2.0 * sigma * m * (a * b).real();
  return r;
}

}  // namespace detail

/// Quadrature moments of mode m for the given source and initial state.
/// Vacuum part: direct column sums for a matrix source, integrated rate
/// expressions for the closed-form source. State corrections follow the
/// centered-moment formulas (they vanish for coherent states); the mean
/// photon number uses the raw moments.
inline QuadratureMoments quadrature_moments(const RhoSource& src, const InitialFieldState& state, int m) {
  if (m < 1) throw std::domain_error("quadrature_moments: mode must be >= 1");
  state.validate();
  const int p = src.p();
  QuadratureMoments qm;
  qm.mode = m;
  double U = 0.0, V = 0.0, Y = 0.0, N = 0.0;
  if (!src.closed_form()) {
    const int C = src.max_column();
    for (int n = 1; n <= C; ++n) {
      Complex a = src.rho(m, n), b = src.rho(-m, n);
      if (a == Complex(0, 0) && b == Complex(0, 0)) continue;
      U += 0.5 * m / n * std::norm(a - b);
      V += 0.5 * m / n * std::norm(a + b);
      Y += static_cast<double>(m) / n * (std::conj(a) * b).imag();
      N += static_cast<double>(m) / n * std::norm(b);
    }
  } else {
    const double tau = src.tau(), gamma = src.gamma();
    int j = m % p;
    if (j == 0 || tau == 0.0) {
      U = V = 0.5;
      Y = 0.0;
      N = 0.0;
    } else {
      double tol = 1e-12 * std::max(1.0, tau);
      U = 0.5 + adaptive_simpson([&](double t) { return detail::vacuum_rates(p, gamma, t, m).dU; }, 0.0, tau, tol);
      V = 0.5 + adaptive_simpson([&](double t) { return detail::vacuum_rates(p, gamma, t, m).dV; }, 0.0, tau, tol);
      if (p % 2 == 0 && j == p / 2)
        Y = adaptive_simpson([&](double t) { return detail::vacuum_rates(p, gamma, t, m).dY; }, 0.0, tau, tol);
      N = 0.5 * (U + V - 1.0);
    }
  }

  if (state.kind != InitialFieldState::Kind::vacuum) {
    const int C = std::min(state.mode_cutoff, src.closed_form() ? state.mode_cutoff : src.max_column());
    std::vector<Complex> am(C + 1), bm(C + 1);
    for (int n = 1; n <= C; ++n) {
      am[n] = src.rho(m, n);
      bm[n] = src.rho(-m, n);
    }
    if (state.kind == InitialFieldState::Kind::diagonal) {
      for (int n = 1; n <= C; ++n) {
        double w = state.nu[n - 1] / n;
        if (w == 0.0) continue;
        U += m * w * std::norm(am[n] - bm[n]);
        V += m * w * std::norm(am[n] + bm[n]);
        Y += 2.0 * m * w * (std::conj(am[n]) * bm[n]).imag();
        N += m * w * (std::norm(am[n]) + std::norm(bm[n]));
      }
    } else {
      Complex amean = 0.0;
      for (int n = 1; n <= C; ++n)
        amean += std::sqrt(static_cast<double>(m) / n) *
                 (state.mean(n) * am[n] - std::conj(state.mean(n)) * std::conj(bm[n]));
      qm.mean_q = std::sqrt(2.0) * amean.real();
      qm.mean_p = std::sqrt(2.0) * amean.imag();
      for (int n = 1; n <= C; ++n) {
        for (int k = 1; k <= C; ++k) {
          double w = m / std::sqrt(static_cast<double>(n) * k);
          Complex nb = state.centered_bdag_b(n, k);
          Complex bb = state.centered_b_b(n, k);
          Complex dmn = am[n] - bm[n], dmk = am[k] - bm[k];
          Complex smn = am[n] + bm[n], smk = am[k] + bm[k];
          U += w * (std::conj(dmn) * dmk * nb + dmn * dmk * bb).real();
          V += w * (std::conj(smn) * smk * nb - smn * smk * bb).real();
          Y += w * ((std::conj(am[n]) * bm[k] - am[k] * std::conj(bm[n])) * nb +
                    (am[n] * am[k] - bm[n] * bm[k]) * bb)
                   .imag();
          // raw moments for the occupation
          Complex nb_raw = state.moment_bdag_b(n, k);
          Complex bb_raw = state.moment_b_b(n, k);
          N += w * ((std::conj(am[n]) * am[k] + std::conj(bm[n]) * bm[k]) * nb_raw).real();
          N += -2.0 * w * (bm[n] * am[k] * bb_raw).real();
        }
      }
    }
  }
  qm.U = U;
  qm.V = V;
  qm.Y = Y;
  qm.N = N;
  auto [u, v] = minmax_variances(U, V, Y);
  qm.u = u;
  qm.v = v;
  auto [Q, chi] = mandel_and_purity(qm);
  qm.mandel_q = Q;
  qm.purity = chi;
  return qm;
}

// ---------------------------------------------------------------------------
// p = 2 principal-mode elliptic closed forms
// ---------------------------------------------------------------------------

/// Vacuum moments of the principal modes mu = 1, 3 at p = 2 in terms of the
/// complete elliptic integrals (mu = 3 printed for gamma = 0 only).
inline QuadratureMoments principal_mode_moments_p2(double gamma, double tau, int mu) {
  if (mu != 1 && mu != 3) throw std::domain_error("principal_mode_moments_p2: mu must be 1 or 3");
  if (mu == 3 && gamma != 0.0) throw std::domain_error("principal_mode_moments_p2: mu = 3 closed form needs gamma = 0");
  KappaLambda kl = kappa_lambda(gamma, 2.0 * tau);
  double kap = std::min(kl.kappa, 1.0 - 1e-16);  // K(1) diverges only logarithmically; the clamp costs ~1e-14
  if (kap < 0.0) throw std::domain_error("principal_mode_moments_p2: closed forms need kappa >= 0");
  QuadratureMoments qm;
  qm.mode = mu;
  if (kap < 1e-5) {
    // Taylor limit; avoids the 0/0 at kappa -> 0
    double beta = std::sqrt(1.0 - gamma * gamma * kap * kap);
    if (mu == 1) {
      qm.U = 0.5 * (1.0 - beta * kap + 0.5 * kap * kap);
      qm.V = 0.5 * (1.0 + beta * kap + 0.5 * kap * kap);
      qm.Y = 0.0;
      qm.N = 0.5 * (qm.U + qm.V - 1.0);
    } else {
      qm.U = 0.5 - std::pow(0.5 * kap, 3);
      qm.V = 0.5 + std::pow(0.5 * kap, 3);
      qm.Y = 0.0;
      qm.N = 3.0 * std::pow(kap, 4) / 64.0;
    }
  } else {
    auto [K, E] = elliptic_ke(kap);
    double kt2 = 1.0 - kap * kap;
    double beta = std::sqrt(std::max(0.0, 1.0 - gamma * gamma * kap * kap));
    double pi2 = kPi * kPi;
    if (mu == 1) {
      qm.U = 2.0 / (pi2 * kap) * (kt2 * (beta - kap) * K * K - 2.0 * (beta - kap) * K * E + beta * E * E);
      qm.V = 2.0 / (pi2 * kap) * (2.0 * (beta + kap) * K * E - kt2 * (beta + kap) * K * K - beta * E * E);
      qm.Y = 2.0 * gamma / pi2 * (kt2 * K * K - 2.0 * K * E + E * E);
      qm.N = 2.0 / pi2 * K * (2.0 * E - kt2 * K) - 0.5;
    } else {
      qm.U = 2.0 / (9.0 * pi2 * kap * kap * kap) *
             (kt2 * (1.0 - kap) * (4.0 + 10.0 * kap + 9.0 * kap * kap) * K * K +
              (1.0 - kap) * (4.0 * kap * kap * kap - 14.0 * kap * kap - 20.0 * kap - 8.0) * K * E +
              (4.0 * powi(kap, 4) + 6.0 * powi(kap, 3) - kap * kap + 6.0 * kap + 4.0) * E * E);
      // V_3 follows from U_3 by kappa -> -kappa
      double km = -kap;
      qm.V = 2.0 / (9.0 * pi2 * km * km * km) *
             (kt2 * (1.0 - km) * (4.0 + 10.0 * km + 9.0 * km * km) * K * K +
              (1.0 - km) * (4.0 * km * km * km - 14.0 * km * km - 20.0 * km - 8.0) * K * E +
              (4.0 * powi(km, 4) + 6.0 * powi(km, 3) - km * km + 6.0 * km + 4.0) * E * E);
      qm.Y = 0.0;
      qm.N = 2.0 / (3.0 * pi2 * kap * kap) * ((3.0 * kap * kap - 2.0) * K * (2.0 * E - kt2 * K) +
                                              2.0 * (1.0 + kap * kap) * E * E) -
             0.5;
    }
  }
  auto [u, v] = minmax_variances(qm.U, qm.V, qm.Y);
  qm.u = u;
  qm.v = v;
  auto [Q, chi] = mandel_and_purity(qm);
  qm.mandel_q = Q;
  qm.purity = chi;
  return qm;
}

/// Purity of the p = 2 principal mode in elliptic form.
inline double purity_chi1_p2(double gamma, double tau) {
  KappaLambda kl = kappa_lambda(gamma, 2.0 * tau);
  double kap = std::min(kl.kappa, 1.0 - 1e-16);
  if (kap < 1e-6) return 1.0 - 3.0 / 32.0 * powi(kap, 4);
  auto [K, E] = elliptic_ke(kap);
  double kt2 = 1.0 - kap * kap;
  double inner = 4.0 * K * E * E * E + 4.0 * kt2 * kt2 * K * K * K * E - 6.0 * kt2 * K * K * E * E - powi(E, 4) -
                 powi(kt2, 3) * powi(K, 4);
  return kPi * kPi / 4.0 * kap / std::sqrt(inner);
}

// ---------------------------------------------------------------------------
// Rates, total photons, total energy
// ---------------------------------------------------------------------------

/// Photon generation rate from vacuum dN_mode/dtau; exactly 0 for modes that
/// are multiples of p.
inline double vacuum_rate(int p, double gamma, double tau, int mode) {
  if (p < 1 || mode < 1) throw std::domain_error("vacuum_rate: need p >= 1, mode >= 1");
  int j = mode % p;
  if (j == 0) return 0.0;
  int q = (mode - j) / p;
  KappaLambda kl = kappa_lambda(gamma, p * tau);
  if (kl.kappa == 0.0) return 0.0;
  double jp = static_cast<double>(j) / p;
  double beta = kl.lambda.real();  // signed Re(lambda); equals sqrt(1 - gamma^2 kappa^2) for gamma <= 1
  double lnC = ln_gamma(q + jp) + ln_gamma(1.0 + q + jp) + ln_gamma(2.0 - jp) - ln_gamma(jp) - ln_gamma(q + 1.0) -
               ln_gamma(q + 2.0);
  double k2 = kl.kappa * kl.kappa;
  return 2.0 * p * beta * std::sin(kPi * jp) / kPi * std::exp(lnC) * powi(kl.kappa, 2 * q + 1) *
         gauss_2f1(q + jp, -jp, 1.0 + q, k2) * gauss_2f1(q + jp, 1.0 - jp, 2.0 + q, k2);
}

/// Second slow-time derivative of the total number of photons created from
/// vacuum (closed form; finite sum over m = 1..p-1).
inline double total_vacuum_photons_dd(int p, double gamma, double tau) {
  KappaLambda kl = kappa_lambda(gamma, p * tau);
  double kap = kl.kappa, k2 = kap * kap;
  double s = 0.0;
  for (int m = 1; m < p; ++m) {
    double mp = static_cast<double>(m) / p;
    double t1 = m * (p - m) * powi(kap / p * gauss_2f1(mp, 1.0 - mp, 2.0, k2), 2);
    double t2 = (1.0 - 2.0 * gamma * gamma * k2) * gauss_2f1(mp, -mp, 1.0, k2) * gauss_2f1(mp - 1.0, 1.0 - mp, 1.0, k2);
    s += 2.0 * m * (p - m) * (t1 + t2);
  }
  return s;
}

/// Total photons created from vacuum. p = 2 uses the elliptic closed form
/// (2/pi^2) K (K - E); other p integrate the closed second derivative twice
/// with dN/dtau = 0 at tau = 0.
inline double total_vacuum_photons(int p, double gamma, double tau) {
  if (p < 1) throw std::domain_error("total_vacuum_photons: p must be >= 1");
  if (p == 1) return 0.0;
  if (p == 2) {
    KappaLambda kl = kappa_lambda(gamma, 2.0 * tau);
    double kap = std::min(std::abs(kl.kappa), 1.0 - 1e-16);
    if (kap < 1e-8) return 0.0;
    auto [K, E] = elliptic_ke(kap);
    return 2.0 / (kPi * kPi) * K * (K - E);
  }
  // y'' = f(tau), y(0) = y'(0) = 0  ->  y(tau) = int_0^tau (tau - s) f(s) ds
  return adaptive_simpson([&](double s) { return (tau - s) * total_vacuum_photons_dd(p, gamma, s); }, 0.0, tau,
                          1e-12 * std::max(1.0, tau));
}

/// Total field energy at slow time tau in units of h-bar omega_1
/// (so the vacuum case is (p^2-1)/(12 a^2) sinh^2(p a tau)):
///   E = E0 + 2 S^2(p tau) [E0 + B + (gamma sigma / 2) Im g] - (sigma/2) S(2 p tau) Re g,
///   B = (p^2-1)/24,
///   g = 2 sum_n sqrt(n(n+p)) <b_n^+ b_{n+p}> + sum_{n=1}^{p-1} sqrt(n(p-n)) <b_n b_{p-n}>.
inline double total_energy(int p, double gamma, double tau, const InitialFieldState& state) {
  if (p < 1) throw std::domain_error("total_energy: p must be >= 1");
  state.validate();
  const double sigma = (p % 2 == 0) ? 1.0 : -1.0;
  const double B = (static_cast<double>(p) * p - 1.0) / 24.0;
  double E0 = state.total_energy_omega1();
  Complex g = 0.0;
  for (int n = 1; n + p <= state.mode_cutoff; ++n)
    g += 2.0 * std::sqrt(static_cast<double>(n) * (n + p)) * state.moment_bdag_b(n, n + p);
  if (p >= 2)
    for (int n = 1; n <= p - 1 && n <= state.mode_cutoff; ++n)
      if (p - n <= state.mode_cutoff) g += std::sqrt(static_cast<double>(n) * (p - n)) * state.moment_b_b(n, p - n);
  KappaLambda k1 = kappa_lambda(gamma, p * tau);
  KappaLambda k2 = kappa_lambda(gamma, 2.0 * p * tau);
  return E0 + 2.0 * k1.S * k1.S * (E0 + B + 0.5 * gamma * sigma * g.imag()) - 0.5 * sigma * k2.S * g.real();
}

// ---------------------------------------------------------------------------
// Photon distribution of a one-mode Gaussian state
// ---------------------------------------------------------------------------

/// Photon-number distribution f(n), n = 0..n_max (n_max auto-sized so the
/// tail mass is < 1e-10 unless given). Zero-mean states use the Legendre
/// form in the extremal variances; states with displaced means use the
/// Hermite-sum form (evaluated with a scaled recurrence so the coherent
/// Delta -> 0 limit is exact).
inline std::vector<double> photon_distribution(const QuadratureMoments& qm, int n_max = -1) {
  const double U = qm.U, V = qm.V, Y = qm.Y;
  if (!(U > 0.0) || !(V > 0.0) || U * V - Y * Y < 0.25 - 1e-9)
    throw std::domain_error("photon_distribution: unphysical moments");
  auto [u, v] = minmax_variances(U, V, Y);
  if (n_max < 0) n_max = std::max(50, static_cast<int>(std::ceil(20.0 * (u + v))));
  std::vector<double> f(n_max + 1, 0.0);
  const bool zero_mean = (std::abs(qm.mean_q) < 1e-14 && std::abs(qm.mean_p) < 1e-14);
  if (zero_mean) {
    // f(n) = 2 [(2u-1)(2v-1)]^{n/2} / [(2u+1)(2v+1)]^{(n+1)/2} P_n(zarg),
    // zarg = (4uv-1)/sqrt((4u^2-1)(4v^2-1)); pure imaginary when u < 1/2.
    Complex num = Complex((2.0 * u - 1.0) * (2.0 * v - 1.0), 0.0);
    double den = (2.0 * u + 1.0) * (2.0 * v + 1.0);
    Complex w = std::sqrt(num / den);
    Complex zarg;
    Complex d2 = Complex(4.0 * u * u - 1.0, 0.0) * Complex(4.0 * v * v - 1.0, 0.0);
    if (std::abs(d2) < 1e-28) {
      zarg = 1.0;  // u = v = 1/2: vacuum; only f(0) = 1 survives below
    } else {
      zarg = (4.0 * u * v - 1.0) / std::sqrt(d2);
    }
    // run the recurrence on q_n = w^n P_n(zarg): |q_n| stays O(1) even when
    // the polynomial alone would overflow (u near 1/2 makes |zarg| huge)
    double pref = 2.0 / std::sqrt(den);
    Complex zw = zarg * w, w2c = w * w;
    Complex q0 = 1.0, q1 = zw;
    for (int n = 0; n <= n_max; ++n) {
      Complex qn;
      if (n == 0)
        qn = q0;
      else if (n == 1)
        qn = q1;
      else {
        qn = ((2.0 * n - 1.0) * zw * q1 - (n - 1.0) * w2c * q0) / static_cast<double>(n);
        q0 = q1;
        q1 = qn;
      }
      f[n] = pref * qn.real();
    }
  } else {
    const double Delta = std::sqrt((U - V) * (U - V) + 4.0 * Y * Y);
    const double Ssq = 4.0 * (U * V - Y * Y) - 1.0;
    const double D = 1.0 + 2.0 * (U + V) + 4.0 * (U * V - Y * Y);
    const double q = qm.mean_q, pp = qm.mean_p;
    const double g0 = pp * pp * (2.0 * U + 1.0) + q * q * (2.0 * V + 1.0) - 4.0 * pp * q * Y;
    const double F0 = 2.0 / std::sqrt(D) * std::exp(-g0 / D);
    // xi = A / sqrt(B), B = 2 D (V - U - 2 i Y); the recurrence is run on
    // h_m = Delta^{m/2} H_m(xi), which stays finite as Delta -> 0.
    Complex A = Complex((2.0 * V + 1.0) * q - 2.0 * Y * pp, (1.0 + 2.0 * U) * pp - 2.0 * Y * q);
    Complex B = 2.0 * D * Complex(V - U, -2.0 * Y);
    Complex sqDB = (std::abs(B) > 0.0) ? std::sqrt(Complex(Delta, 0.0) / B) : Complex(1.0 / std::sqrt(2.0 * D), 0.0);
    Complex y = A * sqDB / std::sqrt(D);  // recurrence variable for h_m / D^{m/2}
    // u_m = Delta^{m/2} H_m(xi) / D^{m/2}; rescaled on the fly with the
    // accumulated log stored per degree so that large n never overflows
    std::vector<Complex> u(n_max + 1);
    std::vector<double> lsc(n_max + 1, 0.0);
    u[0] = 1.0;
    if (n_max >= 1) u[1] = 2.0 * y;
    double running = 0.0;
    Complex um2 = u[0], um1 = (n_max >= 1) ? u[1] : Complex(0.0, 0.0);
    if (n_max >= 1) lsc[1] = 0.0;
    for (int mm = 2; mm <= n_max; ++mm) {
      Complex um = 2.0 * y * um1 - 2.0 * (mm - 1.0) * (Delta / D) * um2;
      double mag = std::abs(um);
      if (mag > 1e100) {
        um *= 1e-100;
        um1 *= 1e-100;
        running += std::log(1e100);
      }
      um2 = um1;
      um1 = um;
      u[mm] = um;
      lsc[mm] = running;
    }
    std::vector<double> lognfac(n_max + 2, 0.0);
    for (int i = 1; i <= n_max + 1; ++i) lognfac[i] = lognfac[i - 1] + std::log(static_cast<double>(i));
    double lnS = (std::abs(Ssq) > 0.0) ? std::log(std::abs(Ssq)) : -1e308;
    for (int n = 0; n <= n_max; ++n) {
      double acc = 0.0;
      for (int k = 0; k <= n; ++k) {
        // n! / ((n-k)!^2 k!) * (S/D)^k * |Delta^{(n-k)/2} H_{n-k}|^2 / D^{n-k}
        double lncoef = lognfac[n] - 2.0 * lognfac[n - k] - lognfac[k];
        double lnterm = lncoef + ((k > 0) ? k * (lnS - std::log(D)) : 0.0) +
                        2.0 * (std::log(std::abs(u[n - k]) + 1e-300) + lsc[n - k]);
        double sgn = (Ssq < 0.0 && (k % 2)) ? -1.0 : 1.0;
        acc += sgn * std::exp(lnterm);
      }
      f[n] = F0 * acc;
    }
  }
  // clip tiny negative roundoff and normalize the truncation remainder away
  for (double& x : f) x = std::max(x, 0.0);
  return f;
}

// ---------------------------------------------------------------------------
// Closed-form occupations for initial thermal states (p = 1, gamma = 0)
// ---------------------------------------------------------------------------

enum class ThermalKind { low_t, high_t };

/// Occupation of mode m at slow time tau for an initially thermal field in
/// the semi-resonance case (p = 1, gamma = 0). kind low_t uses
/// nu_n = e^{-beta n} (parameter = beta); high_t uses nu_n = Theta/n
/// (parameter = Theta), for which the closed form is
/// N_m = Theta (1 - kappa^{2m}) / m.
inline double thermal_mode_occupations(double tau, ThermalKind kind, double parameter, int m) {
  if (m < 1) throw std::domain_error("thermal_mode_occupations: mode must be >= 1");
  double rho_t = std::tanh(tau);
  double r2 = rho_t * rho_t;
  if (kind == ThermalKind::high_t) {
    return parameter * (1.0 - powi(r2, m)) / m;
  }
  double eb = std::exp(-parameter);
  Complex base((eb - r2) / (1.0 - eb * r2), 0.0);
  double xnum = eb * powi(1.0 - r2, 2) + r2 * powi(1.0 - eb, 2);
  Complex x = Complex(xnum, 0.0) / ((eb - r2) * (1.0 - eb * r2));
  Complex val = 0.5 * powi(base, m) * (legendre_p(m, x) + legendre_p(m - 1, x));
  return val.real();
}

// ---------------------------------------------------------------------------
// Long-time asymptotics with nonvacuum initial states
// ---------------------------------------------------------------------------

/// Linear growth rate of the total number of "nonvacuum" photons in the
/// asymptotic regime a p tau >> 1 (gamma < 1). Full Gaussian second moments
/// are folded with the asymptotic coefficients.
inline double asymptotic_cavity_rate(int p, double gamma, const InitialFieldState& state) {
  if (std::abs(gamma) >= 1.0) throw std::domain_error("asymptotic_cavity_rate: requires |gamma| < 1");
  state.validate();
  const double a = std::sqrt(1.0 - gamma * gamma);
  const double sigma = (p % 2 == 0) ? 1.0 : -1.0;
  const Complex aig(a, gamma);
  double total = 0.0;
  for (int m = 1; m < p; ++m) {
    double sm = std::sin(kPi * m / p);
    Complex acc = 0.0;
    for (int n = 0; m + p * n <= state.mode_cutoff; ++n) {
      for (int k = 0; m + p * k <= state.mode_cutoff; ++k) {
        double w = powi(sigma, n + k) / std::sqrt(static_cast<double>(m + p * n) * (m + p * k));
        Complex t = state.moment_bdag_b(m + p * n, m + p * k) * powi(aig, k - n);
        t -= sigma * Complex((state.moment_b_b(m + p * n, m + p * k) * powi(aig, k + n + 1)).real(), 0.0);
        acc += w * t;
      }
    }
    total += sm * sm * acc.real();
  }
  return 4.0 * a * p * p / (kPi * kPi) * total;
}

struct AsymptoticDeltaMoments {
  double dU = 0.0, dV = 0.0, dY = 0.0, dN = 0.0;
};

/// tau -> infinity corrections to the principal-mode moments for a diagonal
/// initial state (p = 2 semantics; Z = sum nu_{2k+1}/(2k+1)).
inline AsymptoticDeltaMoments asymptotic_delta_moments(double gamma, const InitialFieldState& state, int mu) {
  if (std::abs(gamma) >= 1.0) throw std::domain_error("asymptotic_delta_moments: requires |gamma| < 1");
  double Z = 0.0;
  for (int k = 0; 2 * k + 1 <= state.mode_cutoff; ++k) Z += state.moment_bdag_b(2 * k + 1, 2 * k + 1).real() / (2 * k + 1);
  double phi = std::asin(gamma);
  AsymptoticDeltaMoments r;
  double f = 8.0 * Z / (kPi * kPi * mu);
  r.dU = f * 2.0 * powi(std::sin(0.5 * mu * phi), 2);
  r.dV = f * 2.0 * powi(std::cos(0.5 * mu * phi), 2);
  r.dY = -f * std::sin(mu * phi);
  r.dN = f;
  return r;
}

/// Limit of the minimal invariant variance u_mu(tau -> infinity) for p = 2
/// principal modes; independent of any diagonal initial state. Obtained by
/// evaluating the vacuum moments at a large reference tau and removing the
/// linearly growing part F = 8 a tau / (pi^2 mu).
inline double asymptotic_u_min(double gamma, int mu, double tau_ref = 8.0) {
  if (std::abs(gamma) >= 1.0) throw std::domain_error("asymptotic_u_min: requires |gamma| < 1");
  if (mu % 2 == 0) throw std::domain_error("asymptotic_u_min: mu must be a principal (odd) mode");
  RhoSource src(2, gamma, tau_ref);
  QuadratureMoments qm = quadrature_moments(src, InitialFieldState::vacuum_state(), mu);
  double a = std::sqrt(1.0 - gamma * gamma);
  double F = 8.0 * a * tau_ref / (kPi * kPi * mu);
  double chi = mu * std::asin(gamma);
  double f = qm.U - 2.0 * F * powi(std::sin(0.5 * chi), 2);
  double g = qm.V - 2.0 * F * powi(std::cos(0.5 * chi), 2);
  double h = qm.Y + F * std::sin(chi);
  return f * powi(std::cos(0.5 * chi), 2) + g * powi(std::sin(0.5 * chi), 2) + h * std::sin(chi);
}

// ---------------------------------------------------------------------------
// Laboratory-scale estimate
// ---------------------------------------------------------------------------

/// Maximal photon generation rate in the principal mode of a 1D cavity,
///   (dN/dt)_max = (4/pi^2) (v_s / c) delta_max (omega_1 / 2 pi),
/// with the material limits v_s (sound speed in the wall) and delta_max (max
/// relative deformation). Returns photons per second for f1 = omega_1/2pi Hz.
inline double lab_photon_rate(double f1_hz, double v_sound = 5e3, double c_light = 2.99792458e8,
                              double delta_max = 1e-2) {
  return 4.0 / (kPi * kPi) * (v_sound / c_light) * delta_max * f1_hz;
}

}  // namespace dce
