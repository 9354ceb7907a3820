#pragma once

// Analytic Bogoliubov coefficients for the resonantly vibrating 1D cavity.
//
// The slow-amplitude equations with resonance multiplicity p and scaled
// detuning gamma admit closed-form solutions parameterized by
//   S(x) = sinh(a x)/a,  g(x) = cosh(a x) + i gamma S(x),  a = sqrt(1-gamma^2)
// (trigonometric counterparts for gamma > 1, S = x and g = 1 + ix at
// gamma = 1), with the universal modulus and unimodular phase
//   kappa = S / sqrt(1 + S^2),   lambda = g / |g|
// (equal to sqrt(1 - gamma^2 kappa^2) + i gamma kappa wherever Re g >= 0,
// which covers all gamma <= 1; past the quarter period of the gamma > 1
// branch the continuous determination takes over).
//
// The nonzero coefficients rho_m^{(n)} (m == n mod p) split into subsets
// indexed by j = n mod p; their values are hypergeometric in kappa^2 with
// Gamma-function coefficients, and Jacobi polynomials for the j = 0 subset.
// A generating function R^{(q,j)}(z, tau) on the unit circle packages every
// subset; its Laurent coefficients (recovered here by FFT) give a uniformly
// stable evaluator for large indices where the hypergeometric route loses
// digits to cancellation.

#include <vector>

#include "dce/core.hpp"
#include "dce/fft.hpp"
#include "dce/specfun.hpp"

namespace dce {

struct KappaLambda {
  double S = 0.0;
  Complex g{1.0, 0.0};
  double kappa = 0.0;
  Complex lambda{1.0, 0.0};
  double lambda_arg = 0.0;  // continuous determination, 0 at x = 0
  double a = 1.0;           // sqrt|1 - gamma^2|
  enum class Branch { hyperbolic, linear, trigonometric } branch = Branch::hyperbolic;
};

/// Branch-selected S, g, kappa, lambda at argument x (callers pass p*tau or
/// 2*tau as their resonance structure requires).
inline KappaLambda kappa_lambda(double gamma, double x) {
  if (x < 0.0) throw std::domain_error("kappa_lambda: x must be >= 0");
  KappaLambda r;
  double disc = 1.0 - gamma * gamma;
  if (std::abs(disc) < 1e-12) {
    r.branch = KappaLambda::Branch::linear;
    r.a = 0.0;
    r.S = x;
    r.g = Complex(1.0, gamma * x);
    r.lambda_arg = std::arg(r.g);
  } else if (disc > 0.0) {
    r.branch = KappaLambda::Branch::hyperbolic;
    r.a = std::sqrt(disc);
    r.S = std::sinh(r.a * x) / r.a;
    r.g = Complex(std::cosh(r.a * x), gamma * r.S);
    r.lambda_arg = std::arg(r.g);  // Re g >= 1: principal is the continuous branch
  } else {
    r.branch = KappaLambda::Branch::trigonometric;
    r.a = std::sqrt(-disc);
    r.S = std::sin(r.a * x) / r.a;
    r.g = Complex(std::cos(r.a * x), gamma * r.S);
    // g traces an ellipse winding once per period 2*pi/a; its continuous
    // argument stays within pi/2 of the (signed) ellipse parameter.
    double u = (gamma >= 0.0 ? 1.0 : -1.0) * r.a * x;
    r.lambda_arg = u + std::arg(r.g * std::exp(Complex(0.0, -u)));
  }
  r.kappa = r.S / std::sqrt(1.0 + r.S * r.S);
  r.lambda = r.g / std::abs(r.g);
  return r;
}

namespace detail {

inline Complex lambda_pow(const KappaLambda& kl, double e) {
  return std::exp(Complex(0.0, e * kl.lambda_arg));
}

// Continuous-in-tau anchor for arg(w2) at z = 1, where
// w2(z; tau) = conj(g) + sigma S z. For the hyperbolic and linear branches
// the principal argument is already the continuous branch; the trigonometric
// branch is tracked by a short march in x.
inline double anchor_arg_w2(int p, double gamma, double x, double sigma) {
  KappaLambda kl = kappa_lambda(gamma, x);
  Complex w2 = std::conj(kl.g) + sigma * kl.S;
  if (kl.branch != KappaLambda::Branch::trigonometric) return std::arg(w2);
  int steps = 64 + static_cast<int>(64.0 * kl.a * x);
  double prev = 0.0, acc = 0.0;
  for (int i = 1; i <= steps; ++i) {
    KappaLambda k2 = kappa_lambda(gamma, x * i / steps);
    double cur = std::arg(std::conj(k2.g) + sigma * k2.S);
    double d = cur - prev;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    acc += d;
    prev = cur;
  }
  return acc;
}

}  // namespace detail

/// Asymptotic (kappa -> 1, gamma < 1) Bogoliubov coefficient for raw indices
/// (m signed, n >= 1):
///   y_ms^{(ns,j)} ~ sin(pi(ms + j/p)) / (pi(ms + j/p)) * (a + i gamma)^{ms+ns+2j/p} * sigma^{ns-ms}.
inline Complex rho_asymptotic(int p, double gamma, int m, int n) {
  if (p < 1) throw std::domain_error("rho_asymptotic: p must be >= 1");
  if (std::abs(gamma) >= 1.0) throw std::domain_error("rho_asymptotic: requires |gamma| < 1");
  if (m == 0 || n < 1) return 0.0;
  if (((m - n) % p + p) % p != 0) return 0.0;
  int j = n % p;
  if (j == 0) return 0.0;  // sin(pi * ms) kills the whole j = 0 subset in this limit
  int ms = (m - j) / p;
  int ns = (n - j) / p;
  double sigma = (p % 2 == 0) ? 1.0 : -1.0;
  double a = std::sqrt(1.0 - gamma * gamma);
  double mu = ms + static_cast<double>(j) / p;
  double front = std::sin(kPi * mu) / (kPi * mu);
  Complex aig(a, gamma);
  Complex phase = powi(aig, ms + ns) * std::exp(Complex(0.0, (2.0 * j / p) * std::arg(aig)));
  return front * phase * powi(sigma, ns - ms);
}

/// Closed-form Bogoliubov coefficient rho_m^{(n)}(tau) for resonance order p
/// and detuning gamma. m is the signed lower index (m > 0: xi side, m < 0:
/// -eta side), n >= 1 the initial-mode index. Exact zero off the (m-n) mod p
/// lattice. Routed through Jacobi recurrences for the j = 0 subset and
/// hypergeometric forms otherwise; for kappa extremely close to 1 the
/// tau-independent asymptotic value is returned (relative error
/// O(ms*ns*(1-kappa^2) ln)).
inline Complex rho_closed(int p, double gamma, double tau, int m, int n) {
  if (p < 1) throw std::domain_error("rho_closed: p must be >= 1");
  if (n < 1) throw std::domain_error("rho_closed: n must be >= 1");
  if (m == 0) return 0.0;
  if (((m - n) % p + p) % p != 0) return 0.0;
  const int j = n % p;
  if (j == 0 && m < 0) return 0.0;
  const double sigma = (p % 2 == 0) ? 1.0 : -1.0;
  const KappaLambda kl = kappa_lambda(gamma, p * tau);
  const double kap = kl.kappa, k2 = kap * kap;
  const int ns = (n - j) / p;
  const bool hyper = (kl.branch == KappaLambda::Branch::hyperbolic);

  if (m > 0) {
    const int ms = (m - j) / p;
    if (tau == 0.0) return (m == n) ? 1.0 : 0.0;
    if (j == 0) {
      // Jacobi-polynomial subset (stable at any degree):
      //   ms <= ns: (sigma kappa)^{ns-ms} lambda^{ms+ns} (ns/ms)(1-k^2) P_{ms-1}^{(ns-ms,1)}(1-2k^2)
      //   ms >= ns: (-sigma kappa)^{ms-ns} lambda^{ms+ns} (1-k^2) P_{ns-1}^{(ms-ns,1)}(1-2k^2)
      Complex lam_pow = detail::lambda_pow(kl, ms + ns);
      double x = 1.0 - 2.0 * k2;
      if (ms <= ns)
        return powi(sigma * kap, ns - ms) * lam_pow * (static_cast<double>(ns) / ms) * (1.0 - k2) *
               jacobi_p(ms - 1, ns - ms, 1.0, x);
      return powi(-sigma * kap, ms - ns) * lam_pow * (1.0 - k2) * jacobi_p(ns - 1, ms - ns, 1.0, x);
    }
    if (hyper && 1.0 - k2 < 1e-12) return rho_asymptotic(p, gamma, m, n);
    const double jp = static_cast<double>(j) / p;
    Complex lam_pow = detail::lambda_pow(kl, ms + ns + 2.0 * jp);
    if (ms <= ns) {
      double lnC = ln_gamma(1.0 + ns + jp) - ln_gamma(1.0 + ms + jp) - ln_gamma(1.0 + ns - ms);
      return std::exp(lnC) * powi(sigma * kap, ns - ms) * lam_pow * gauss_2f1(ns + jp, -ms - jp, 1.0 + ns - ms, k2);
    }
    double lnC = ln_gamma(ms + jp) - ln_gamma(ns + jp) - ln_gamma(1.0 + ms - ns);
    return std::exp(lnC) * powi(-sigma * kap, ms - ns) * lam_pow * gauss_2f1(ms + jp, -ns - jp, 1.0 + ms - ns, k2);
  }

  // eta sector: m = j - p k, k >= 1; rho_m = -eta_{-m}.
  if (tau == 0.0) return 0.0;
  if (hyper && 1.0 - k2 < 1e-12) return rho_asymptotic(p, gamma, m, n);
  const int k = (j - m) / p;
  const double jp = static_cast<double>(j) / p;
  double lnC = ln_gamma(k - jp) + ln_gamma(1.0 + ns + jp) - ln_gamma(1.0 + ns + k);
  double sfac = std::sin(kPi * (k - jp)) / kPi;
  Complex lam_pow = detail::lambda_pow(kl, ns - k + 2.0 * jp);
  Complex eta = -std::exp(lnC) * sfac * powi(sigma * kap, ns + k) * lam_pow *
                gauss_2f1(ns + jp, k - jp, 1.0 + ns + k, k2);
  return -eta;
}

/// Generating function R^{(q,j)}(z, tau) on |z| = 1 with initial condition
/// z^q; its Laurent coefficient at z^ms is rho_{j+p*ms}^{(j+p*q)}.
/// Branch continuously connected to z^q at tau = 0.
inline Complex generating_function(int p, double gamma, double tau, int q, int j, Complex z) {
  if (p < 1 || j < 0 || j >= p) throw std::domain_error("generating_function: need 0 <= j < p");
  if (std::abs(std::abs(z) - 1.0) > 1e-10) throw std::domain_error("generating_function: |z| must be 1");
  const double sigma = (p % 2 == 0) ? 1.0 : -1.0;
  const KappaLambda kl = kappa_lambda(gamma, p * tau);
  const double theta = std::arg(z);
  Complex w2 = std::conj(kl.g) + sigma * kl.S * z;
  double aw;
  if (kl.branch != KappaLambda::Branch::trigonometric) {
    aw = std::arg(w2);  // |arg w2| < pi strictly: |g| > |S|, Re g >= 1
  } else {
    double a0 = detail::anchor_arg_w2(p, gamma, p * tau, sigma);
    // walk from z = 1 to z = e^{i theta} along the circle
    int steps = 32;
    double prev = std::arg(std::conj(kl.g) + sigma * kl.S);
    aw = a0;
    for (int i = 1; i <= steps; ++i) {
      double th = theta * i / steps;
      double cur = std::arg(std::conj(kl.g) + sigma * kl.S * Complex(std::cos(th), std::sin(th)));
      double d = cur - prev;
      while (d > kPi) d -= 2.0 * kPi;
      while (d < -kPi) d += 2.0 * kPi;
      aw += d;
      prev = cur;
    }
  }
  // M = w1 / w2 is unimodular on the circle with arg M = theta - 2 arg(w2);
  // R = exp(i [ q arg M + (j/p)(arg M - theta) ]).
  double phiM = theta - 2.0 * aw;
  double phase = q * phiM + (static_cast<double>(j) / p) * (phiM - theta);
  return std::exp(Complex(0.0, phase));
}

/// One full column of coefficients rho_m^{(n)} for m = -max_abs_m .. max_abs_m
/// (index i <-> m = i - max_abs_m), extracted by FFT of the generating
/// function. Stable at any |kappa| < 1; the transform size grows with the
/// occupied bandwidth ~ n (1 + S^2).
inline std::vector<Complex> rho_column_fft(int p, double gamma, double tau, int n, int max_abs_m) {
  if (n < 1) throw std::domain_error("rho_column_fft: n must be >= 1");
  const int j = n % p;
  const int q = (n - j) / p;
  const double sigma = (p % 2 == 0) ? 1.0 : -1.0;
  const KappaLambda kl = kappa_lambda(gamma, p * tau);
  const bool trig = (kl.branch == KappaLambda::Branch::trigonometric);
  double band = 64.0 + 16.0 * (q + 2.0) * (1.0 + kl.S * kl.S);
  std::size_t N = 64;
  while (N < static_cast<std::size_t>(std::min(band, 1.5e6)) ||
         N < 4u * static_cast<std::size_t>(max_abs_m / std::max(1, p) + 2))
    N <<= 1;
  if (N > (1u << 21))
    throw convergence_error("rho_column_fft: required transform size too large (kappa too close to 1)");
  const double anchor = trig ? detail::anchor_arg_w2(p, gamma, p * tau, sigma) : 0.0;
  std::vector<Complex> a;
  for (;;) {
    a.assign(N, Complex(0.0, 0.0));
    double prev = 0.0, acc = anchor;
    for (std::size_t i = 0; i < N; ++i) {
      double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(N);
      Complex z(std::cos(theta), std::sin(theta));
      Complex w2 = std::conj(kl.g) + sigma * kl.S * z;
      double aw;
      if (!trig) {
        aw = std::arg(w2);
      } else {
        double cur = std::arg(w2);
        if (i == 0) {
          prev = cur;
        } else {
          double d = cur - prev;
          while (d > kPi) d -= 2.0 * kPi;
          while (d < -kPi) d += 2.0 * kPi;
          acc += d;
          prev = cur;
        }
        aw = acc;
      }
      double phiM = theta - 2.0 * aw;
      a[i] = std::exp(Complex(0.0, q * phiM + (static_cast<double>(j) / p) * (phiM - theta)));
    }
    fft_pow2(a);
    // anti-aliasing check: the Nyquist ring must be empty before the
    // extracted window can be trusted
    double edge = 0.0;
    for (std::size_t i = N / 2 - N / 16; i <= N / 2 + N / 16; ++i) edge = std::max(edge, std::abs(a[i]));
    if (edge < 1e-11 * static_cast<double>(N)) break;
    if (N >= (1u << 21)) throw convergence_error("rho_column_fft: aliasing persists at maximum transform size");
    N <<= 1;
  }
  std::vector<Complex> col(2 * max_abs_m + 1, Complex(0.0, 0.0));
  for (int m = -max_abs_m; m <= max_abs_m; ++m) {
    if (m == 0 || ((m - n) % p + p) % p != 0) continue;
    if (j == 0 && m < 0) continue;
    long ms = (static_cast<long>(m) - j) / p;
    std::size_t idx =
        static_cast<std::size_t>(((ms % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N));
    col[m + max_abs_m] = a[idx] / static_cast<double>(N);
  }
  return col;
}

}  // namespace dce
