#pragma once

// Numerical integration of the slow-amplitude equations for the Bogoliubov
// coefficients,
//   d rho_k / d tau = (-1)^p [ (k+p) rho_{k+p} - (k-p) rho_{k-p} ] + 2 i gamma k rho_k,
//   rho_k^{(n)}(0) = delta_{kn},   k = +-1, +-2, ..., rho_0 == 0,
// truncated at |k| <= M by zeroing out-of-range couplings (a closed finite
// chain, which conserves the first unitarity sum exactly), plus the direct
// fast-time integrator of the full coupled mode equations used to validate
// the slow reduction.
//
// Each initial mode n only populates lower indices k == n (mod p), so a
// column is integrated on its residue class alone.

#include <vector>

#include "dce/core.hpp"
#include "dce/moore.hpp"
#include "dce/ode.hpp"

namespace dce {

struct ResonanceParams {
  int p = 2;               // resonance multiplicity: wall at p * omega_1 (1 + delta)
  double epsilon = 1e-3;   // dimensionless wall amplitude
  double gamma = 0.0;      // scaled detuning delta / epsilon
  enum class MotionKind { length_only, center_of_cavity } motion_kind = MotionKind::length_only;

  double sigma() const { return (p % 2 == 0) ? 1.0 : -1.0; }
  void validate() const {
    if (p < 1) throw std::domain_error("ResonanceParams: p must be >= 1");
    if (!(epsilon > 0.0)) throw std::domain_error("ResonanceParams: epsilon must be > 0");
  }
};

struct BogoliubovMatrix {
  int p = 1;
  double gamma = 0.0;
  double tau = 0.0;
  int M = 0;        // lower-index truncation |m| <= M
  int columns = 0;  // upper indices 1..columns stored
  std::vector<Complex> rho;  // column-major, rows m = -M..-1,1..M

  static int row_index(int m, int M) { return (m < 0) ? (m + M) : (M + m - 1); }

  Complex at(int m, int n) const {
    if (m == 0 || std::abs(m) > M || n < 1 || n > columns) return 0.0;
    return rho[static_cast<std::size_t>(n - 1) * (2 * M) + row_index(m, M)];
  }
  Complex& ref(int m, int n) { return rho[static_cast<std::size_t>(n - 1) * (2 * M) + row_index(m, M)]; }
};

struct SlowIntegrateOptions {
  double rtol = 1e-11;
  double atol = 1e-11;
  int columns = 0;                 // 0: all M columns
  std::vector<int> column_list;    // non-empty: integrate exactly these columns
};

namespace detail {

// Residue class of lower indices coupled to initial mode n: all k in
// [-M..-1] U [1..M] with k == n (mod p), ordered increasingly. up/dn map to
// the k +- p neighbours (-1: outside truncation or the absorbing k = 0 slot).
struct ResidueClass {
  std::vector<int> ks;
  std::vector<int> up, dn;
  int self = -1;  // position of k = n

  ResidueClass(int p, int n, int M) {
    int j = ((n % p) + p) % p;
    int kmin = -M + ((((j - (-M)) % p) + p) % p);
    for (int k = kmin; k <= M; k += p)
      if (k != 0) ks.push_back(k);
    up.assign(ks.size(), -1);
    dn.assign(ks.size(), -1);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] == n) self = static_cast<int>(i);
      int ku = ks[i] + p, kd = ks[i] - p;
      if (ku != 0 && ku <= M) up[i] = static_cast<int>(i + 1);
      if (kd != 0 && kd >= -M) dn[i] = static_cast<int>(i - 1);
      // when the class contains k = 0 (j == 0), positions skip it but the
      // arithmetic stride still lands on the right neighbour:
      if (j == 0) {
        if (ku == 0) up[i] = -1;
        if (kd == 0) dn[i] = -1;
        if (ks[i] == p) dn[i] = -1;
        if (ks[i] == -p) up[i] = -1;
      }
    }
  }
};

}  // namespace detail

/// Integrate the slow-amplitude system to tau_end at truncation M. Columns
/// default to n = 1..M. The result conserves sum_m m |rho_m^{(n)}|^2 = n to
/// integrator accuracy by construction of the truncation.
inline BogoliubovMatrix integrate_slow(const ResonanceParams& params, double tau_end, int M,
                                       const SlowIntegrateOptions& opt = {}) {
  params.validate();
  if (M < 4 * params.p) throw std::domain_error("integrate_slow: M must be >= 4p");
  if (tau_end < 0.0) throw std::domain_error("integrate_slow: tau_end must be >= 0");
  const int p = params.p;
  const double sig = params.sigma();
  const double gamma = params.gamma;

  BogoliubovMatrix out;
  out.p = p;
  out.gamma = gamma;
  out.tau = tau_end;
  out.M = M;
  out.columns = (opt.columns > 0) ? std::min(opt.columns, M) : M;
  out.rho.assign(static_cast<std::size_t>(out.columns) * (2 * M), Complex(0.0, 0.0));

  std::vector<int> cols;
  if (!opt.column_list.empty())
    cols = opt.column_list;
  else {
    cols.resize(out.columns);
    for (int i = 0; i < out.columns; ++i) cols[i] = i + 1;
  }

  OdeOptions oopt;
  oopt.rtol = opt.rtol;
  oopt.atol = opt.atol;

  for (int n : cols) {
    if (n < 1 || n > out.columns) throw std::domain_error("integrate_slow: column index out of range");
    detail::ResidueClass rc(p, n, M);
    const std::size_t L = rc.ks.size();
    std::vector<Complex> y(L, Complex(0.0, 0.0));
    y[rc.self] = 1.0;
    if (tau_end > 0.0) {
      auto rhs = [&](double, const std::vector<Complex>& v, std::vector<Complex>& dv) {
        for (std::size_t i = 0; i < L; ++i) {
          const double k = rc.ks[i];
          Complex acc = Complex(0.0, 2.0 * gamma * k) * v[i];
          if (rc.up[i] >= 0) acc += sig * (k + p) * v[rc.up[i]];
          if (rc.dn[i] >= 0) acc -= sig * (k - p) * v[rc.dn[i]];
          dv[i] = acc;
        }
      };
      integrate_ode(rhs, y, 0.0, tau_end, oopt);
    }
    for (std::size_t i = 0; i < L; ++i) out.ref(rc.ks[i], n) = y[i];
  }
  return out;
}

struct UnitarityResiduals {
  double r1 = 0.0;  // max_{n,k} |sum_m m rho_m^{(n)*} rho_m^{(k)} / n - delta_{nk}|
  double r2 = 0.0;  // max over converged (m,j) pairs of |sum_n ... - delta_{mj}|
  double r3 = 0.0;  // max over converged (m,j) pairs of |sum_n ...|
  int r23_pairs_checked = 0;
  int r23_pairs_skipped = 0;  // pairs whose column sums had not converged within the stored columns
};

/// Residuals of the three unitarity families evaluated on the stored matrix.
/// The first family sums over the (complete, truncated) lower index and is an
/// exact invariant of the truncated flow, so it measures integrator error.
/// The second and third sum over the *upper* index, whose tail lies partly
/// outside any finite matrix; pairs are only scored once the partial sums
/// have visibly converged within the stored columns (the rest are counted in
/// r23_pairs_skipped).
inline UnitarityResiduals unitarity_residuals(const BogoliubovMatrix& rho, int index_cap = 0) {
  UnitarityResiduals res;
  const int M = rho.M, C = rho.columns, p = rho.p;
  const int cap = (index_cap > 0) ? std::min(index_cap, C) : C;
  // family 1 over column pairs (same residue class only; others are zero = zero)
  for (int n = 1; n <= cap; ++n) {
    for (int k = n; k <= cap; ++k) {
      if ((k - n) % p != 0) continue;
      Complex s = 0.0;
      for (int m = -M; m <= M; ++m) {
        if (m == 0) continue;
        Complex a = rho.at(m, n);
        if (a == Complex(0.0, 0.0)) continue;
        s += static_cast<double>(m) * std::conj(a) * rho.at(m, k);
      }
      double dev = std::abs(s - ((n == k) ? Complex(n, 0.0) : Complex(0.0, 0.0))) / n;
      res.r1 = std::max(res.r1, dev);
    }
  }
  // families 2 and 3 over the upper index with convergence detection
  for (int m = 1; m <= cap; ++m) {
    for (int jj = m; jj <= cap; ++jj) {
      if ((jj - m) % p != 0) continue;
      Complex s2 = 0.0, s3 = 0.0;
      double tail2 = 0.0, tail3 = 0.0;
      const int tail_window = std::max(4 * p, C / 8);
      for (int n = 1; n <= C; ++n) {
        Complex am = rho.at(m, n), aj = rho.at(jj, n);
        Complex bm = rho.at(-m, n), bj = rho.at(-jj, n);
        // In the slow-amplitude phase convention used by this engine the
        // second family pairs the negative-index product with the conjugate
        // swapped; on the diagonal it coincides with the textbook form.
        Complex t2 = (static_cast<double>(m) / n) * (std::conj(am) * aj - bm * std::conj(bj));
        Complex t3 = (1.0 / n) * (std::conj(am) * bj - std::conj(aj) * bm);
        s2 += t2;
        s3 += t3;
        if (n > C - tail_window) {
          tail2 = std::max(tail2, std::abs(t2));
          tail3 = std::max(tail3, std::abs(t3));
        }
      }
      // a pair counts only if the last terms are already negligible
      if (tail2 * tail_window < 1e-10 && tail3 * tail_window < 1e-10) {
        res.r2 = std::max(res.r2, std::abs(s2 - ((m == jj) ? 1.0 : 0.0)));
        res.r3 = std::max(res.r3, std::abs(s3));
        ++res.r23_pairs_checked;
      } else {
        ++res.r23_pairs_skipped;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Direct fast-time integration of the full coupled mode equations
//   Qdd_k + omega_k^2(t) Q_k = 2 sum_j g_kj Qd_j + sum_j gd_kj Q_j,
//   g_kj = (-1)^{k-j} 2 k j Ld / ((j^2 - k^2) L),   omega_k = k pi / L(t),
// (left wall at rest), second order in the wall amplitude dropped.
// ---------------------------------------------------------------------------

struct FullModeResult {
  std::vector<Complex> Q;     // Q_k^{(n)}(t_end), k = 1..K
  std::vector<Complex> Qdot;
  int n = 1;
  double t_end = 0.0;
};

inline double coupling_g(int k, int j, double L, double Ldot) {
  if (k == j) return 0.0;
  double s = ((k - j) % 2 == 0) ? 1.0 : -1.0;
  return s * 2.0 * k * j * Ldot / ((static_cast<double>(j) * j - static_cast<double>(k) * k) * L);
}

inline FullModeResult integrate_full(const BoundaryMotion& motion, int n, double t_end, int K,
                                     double rtol = 1e-10, double atol = 1e-12) {
  if (K < 1 || K > 64) throw std::domain_error("integrate_full: K must be in [1, 64]");
  if (n < 1 || n > K) throw std::domain_error("integrate_full: initial mode outside truncation");
  const double L0 = motion.L0;
  std::vector<Complex> y(2 * K, Complex(0.0, 0.0));
  y[n - 1] = 1.0;
  y[K + n - 1] = Complex(0.0, -kPi * n / L0);
  auto rhs = [&](double t, const std::vector<Complex>& v, std::vector<Complex>& dv) {
    double L = motion.L(t), Ld = motion.Ldot(t), Ldd = motion.Lddot(t);
    double lam = Ld / L;
    double lamdot = Ldd / L - lam * lam;
    for (int k = 1; k <= K; ++k) {
      double wk = kPi * k / L;
      Complex acc = -wk * wk * v[k - 1];
      for (int j = 1; j <= K; ++j) {
        if (j == k) continue;
        double base = ((k - j) % 2 == 0 ? 1.0 : -1.0) * 2.0 * k * j /
                      (static_cast<double>(j) * j - static_cast<double>(k) * k);
        acc += 2.0 * (base * lam) * v[K + j - 1] + (base * lamdot) * v[j - 1];
      }
      dv[k - 1] = v[K + k - 1];
      dv[K + k - 1] = acc;
    }
  };
  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = atol;
  integrate_ode(rhs, y, 0.0, t_end, opt);
  FullModeResult out;
  out.n = n;
  out.t_end = t_end;
  out.Q.assign(y.begin(), y.begin() + K);
  out.Qdot.assign(y.begin() + K, y.end());
  return out;
}

/// Least-squares extraction of the slow amplitudes (xi_k, eta_k) from samples
/// of Q_k(t) = xi_k e^{-i w t} + eta_k e^{+i w t}, w = omega_k (1 + delta),
/// over one fast period ending at t_end.
struct SlowAmplitudes {
  std::vector<Complex> xi, eta;
};

inline SlowAmplitudes extract_slow_amplitudes(const BoundaryMotion& motion, int n, double t_end, int K,
                                              double delta_detuning, int samples_per_period = 48,
                                              double rtol = 1e-10) {
  SlowAmplitudes out;
  out.xi.assign(K, 0.0);
  out.eta.assign(K, 0.0);
  const double L0 = motion.L0;
  // sample Q over the last fundamental period 2 L0
  const double T = 2.0 * L0;
  std::vector<double> ts(samples_per_period);
  std::vector<std::vector<Complex>> Qs(samples_per_period);
  // integrate once, storing the needed windows
  std::vector<Complex> y(2 * K, Complex(0.0, 0.0));
  y[n - 1] = 1.0;
  y[K + n - 1] = Complex(0.0, -kPi * n / L0);
  auto rhs = [&](double t, const std::vector<Complex>& v, std::vector<Complex>& dv) {
    double L = motion.L(t), Ld = motion.Ldot(t), Ldd = motion.Lddot(t);
    double lam = Ld / L, lamdot = Ldd / L - lam * lam;
    for (int k = 1; k <= K; ++k) {
      double wk = kPi * k / L;
      Complex acc = -wk * wk * v[k - 1];
      for (int j = 1; j <= K; ++j) {
        if (j == k) continue;
        double base = ((k - j) % 2 == 0 ? 1.0 : -1.0) * 2.0 * k * j /
                      (static_cast<double>(j) * j - static_cast<double>(k) * k);
        acc += 2.0 * (base * lam) * v[K + j - 1] + (base * lamdot) * v[j - 1];
      }
      dv[k - 1] = v[K + k - 1];
      dv[K + k - 1] = acc;
    }
  };
  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = 1e-12;
  double t = 0.0;
  integrate_ode(rhs, y, 0.0, t_end - T, opt);
  t = t_end - T;
  for (int s = 0; s < samples_per_period; ++s) {
    double tn = t_end - T + (s + 1) * T / samples_per_period;
    integrate_ode(rhs, y, t, tn, opt);
    t = tn;
    ts[s] = tn;
    Qs[s].assign(y.begin(), y.begin() + K);
  }
  // per-mode 2x2 least squares
  for (int k = 1; k <= K; ++k) {
    double w = kPi * k / L0 * (1.0 + delta_detuning);
    Complex a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (int s = 0; s < samples_per_period; ++s) {
      Complex em = std::exp(Complex(0.0, -w * ts[s]));
      Complex ep = std::exp(Complex(0.0, +w * ts[s]));
      a11 += std::conj(em) * em;  // = 1
      a12 += std::conj(em) * ep;
      a22 += std::conj(ep) * ep;  // = 1
      b1 += std::conj(em) * Qs[s][k - 1];
      b2 += std::conj(ep) * Qs[s][k - 1];
    }
    Complex det = a11 * a22 - a12 * std::conj(a12);
    out.xi[k - 1] = (a22 * b1 - a12 * b2) / det;
    out.eta[k - 1] = (a11 * b2 - std::conj(a12) * b1) / det;
  }
  return out;
}

}  // namespace dce
