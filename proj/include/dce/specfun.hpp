#pragma once

// Double-precision special functions backing every closed-form expression in
// the library: the Gauss hypergeometric function 2F1 on x in [0,1), complete
// elliptic integrals K and E via the arithmetic-geometric mean, and the
// classical orthogonal-polynomial recurrences (Jacobi, Legendre, Hermite)
// with complex argument where needed.
//
// All functions here are pure; nothing is cached.

#include <cmath>
#include <cstdlib>

#include "dce/core.hpp"

namespace dce {

/// log |Gamma(x)| for real non-pole x. Poles (0, -1, -2, ...) throw.
inline double ln_gamma(double x) {
  if (x <= 0.0 && near_integer(x)) throw std::domain_error("ln_gamma: pole at non-positive integer");
  return std::lgamma(x);
}

/// Signed Gamma(x); same pole handling as ln_gamma.
inline double gamma_fn(double x) {
  if (x <= 0.0 && near_integer(x)) throw std::domain_error("gamma_fn: pole at non-positive integer");
  return std::tgamma(x);
}

/// ln|Gamma(x)| together with the sign of Gamma(x), valid for negative
/// non-integer x through the reflection formula.
inline std::pair<double, double> signed_ln_gamma(double x) {
  if (x > 0.0) return {std::lgamma(x), 1.0};
  if (near_integer(x)) throw std::domain_error("signed_ln_gamma: pole at non-positive integer");
  double s = std::sin(kPi * x);
  return {std::log(kPi / std::abs(s)) - std::lgamma(1.0 - x), (s > 0.0) ? 1.0 : -1.0};
}

/// Digamma psi(x) for non-pole real x.
inline double digamma(double x) {
  if (x <= 0.0) {
    if (near_integer(x)) throw std::domain_error("digamma: pole at non-positive integer");
    // reflection: psi(x) = psi(1-x) - pi cot(pi x)
    return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  }
  double r = 0.0;
  while (x < 8.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  double ix = 1.0 / x, ix2 = ix * ix;
  return r + std::log(x) - 0.5 * ix -
         ix2 * (1.0 / 12 - ix2 * (1.0 / 120 - ix2 * (1.0 / 252 - ix2 * (1.0 / 240 - ix2 / 132.0))));
}

struct Hyp2f1Result {
  double value = 0.0;
  double abserr = 0.0;  // estimated absolute error (roundoff + truncation)
  int terms = 0;
};

namespace detail {

// Direct power series sum of 2F1. Handles terminating series (a or b a
// non-positive integer) exactly. The cancellation estimate tracks the largest
// intermediate term: for alternating parameter ranges this is what limits the
// attainable accuracy in doubles.
inline Hyp2f1Result hyp2f1_series(double a, double b, double c, double x, long max_terms = 4000000) {
  Hyp2f1Result res;
  double sum = 1.0, term = 1.0, comp = 0.0;
  double max_mag = 1.0;
  long n_terminate = -1;
  if (a <= 0.0 && near_integer(a)) n_terminate = static_cast<long>(std::llround(-a));
  if (b <= 0.0 && near_integer(b)) {
    long nb = static_cast<long>(std::llround(-b));
    if (n_terminate < 0 || nb < n_terminate) n_terminate = nb;
  }
  long k = 0;
  while (k < max_terms) {
    if (n_terminate >= 0 && k > n_terminate) break;
    double ck = c + static_cast<double>(k);
    if (ck == 0.0) throw std::invalid_argument("gauss_2f1: c is a non-positive integer; use gauss_2f1_gamma_limit");
    term *= (a + k) * (b + k) / (ck * (k + 1.0)) * x;
    // Kahan-compensated accumulation
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    max_mag = std::max(max_mag, std::abs(term));
    ++k;
    if (n_terminate < 0 && k > 4 && std::abs(term) < 1e-17 * std::abs(sum) && std::abs(term) < 1e-300 + 1e-17 * max_mag)
      break;
  }
  if (n_terminate < 0 && k >= max_terms) throw convergence_error("gauss_2f1: series did not converge");
  res.value = sum;
  res.terms = static_cast<int>(k);
  res.abserr = max_mag * 2.3e-16 * std::sqrt(static_cast<double>(k + 1)) + std::abs(term);
  return res;
}

// Connection formula at the x -> 1 boundary for the case c = a + b + 1,
// which is the third-parameter family every Bogoliubov closed form produces.
// With w = 1 - x:
//   F(a,b;a+b+1;x) = G(a+b+1)/(G(a+1) G(b+1))
//     + G(a+b+1)/(G(a) G(b)) * w * sum_{n>=0} (a+1)_n (b+1)_n / (n! (n+1)!)
//         * w^n * [ln w - psi(n+1) - psi(n+2) + psi(a+n+1) + psi(b+n+1)].
// Converges rapidly for small w, precisely where the direct series stalls.
inline Hyp2f1Result hyp2f1_near_one_cab1(double a, double b, double x) {
  Hyp2f1Result res;
  double w = 1.0 - x;
  double lnw = std::log(w);
  auto [lg_ab1, s_ab1] = signed_ln_gamma(a + b + 1.0);
  auto [lg_a1, s_a1] = signed_ln_gamma(a + 1.0);
  auto [lg_b1, s_b1] = signed_ln_gamma(b + 1.0);
  auto [lg_a, s_a] = signed_ln_gamma(a);
  auto [lg_b, s_b] = signed_ln_gamma(b);
  double term0 = s_ab1 * s_a1 * s_b1 * std::exp(lg_ab1 - lg_a1 - lg_b1);
  double pref = s_ab1 * s_a * s_b * std::exp(lg_ab1 - lg_a - lg_b) * w;
  double poch = 1.0;  // (a+1)_n (b+1)_n / (n! (n+1)!)
  double sum = 0.0, max_mag = std::abs(term0);
  int n = 0;
  for (; n < 200000; ++n) {
    double bracket = lnw - digamma(n + 1.0) - digamma(n + 2.0) + digamma(a + n + 1.0) + digamma(b + n + 1.0);
    double t = poch * bracket;
    sum += t;
    max_mag = std::max(max_mag, std::abs(pref * t));
    if (n > 2 && std::abs(pref * t) < 1e-17 * (std::abs(term0 + pref * sum) + 1e-300)) break;
    poch *= (a + 1.0 + n) * (b + 1.0 + n) / ((n + 1.0) * (n + 2.0)) * w;
  }
  res.value = term0 + pref * sum;
  res.terms = n;
  res.abserr = max_mag * 2.3e-16 * 4.0;
  return res;
}

}  // namespace detail

/// Gauss hypergeometric function F(a,b;c;x) for x in [0,1).
///
/// Evaluation: direct series for x <= 0.5 or when it terminates; for
/// x in (0.5, 1) the Euler transformation F = (1-x)^{c-a-b} F(c-a,c-b;c;x)
/// is applied first when it shortens the series (it replaces a,b by c-a,c-b,
/// which terminates or damps the tail for the parameter families produced by
/// the Bogoliubov closed forms). Accuracy near x -> 1 degrades; the _ex
/// variant reports the estimate.
inline Hyp2f1Result gauss_2f1_ex(double a, double b, double c, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("gauss_2f1: x must lie in [0,1)");
  if (c <= 0.0 && near_integer(c)) {
    // Permitted only if the series terminates before the pole in c is hit.
    long nc = static_cast<long>(std::llround(-c));
    long na = (a <= 0.0 && near_integer(a)) ? static_cast<long>(std::llround(-a)) : -1;
    long nb = (b <= 0.0 && near_integer(b)) ? static_cast<long>(std::llround(-b)) : -1;
    long nt = -1;
    if (na >= 0) nt = na;
    if (nb >= 0 && (nt < 0 || nb < nt)) nt = nb;
    if (nt < 0 || nt >= nc)
      throw std::invalid_argument("gauss_2f1: c is a non-positive integer; use gauss_2f1_gamma_limit");
  }
  if (x == 0.0) return {1.0, 0.0, 0};
  bool terminating = (a <= 0.0 && near_integer(a)) || (b <= 0.0 && near_integer(b));
  if (x <= 0.5 || terminating) return detail::hyp2f1_series(a, b, c, x);
  if (x > 0.999 && std::abs(c - a - b - 1.0) < 1e-12) return detail::hyp2f1_near_one_cab1(a, b, x);
  // Euler transformation; fall back to the direct series when it does not help.
  double ea = c - a, eb = c - b;
  bool euler_terminates = (ea <= 0.0 && near_integer(ea)) || (eb <= 0.0 && near_integer(eb));
  if (euler_terminates) {
    Hyp2f1Result r = detail::hyp2f1_series(ea, eb, c, x);
    double f = std::pow(1.0 - x, c - a - b);
    r.value *= f;
    r.abserr *= std::abs(f);
    return r;
  }
  return detail::hyp2f1_series(a, b, c, x);
}

inline double gauss_2f1(double a, double b, double c, double x, double* abserr = nullptr) {
  Hyp2f1Result r = gauss_2f1_ex(a, b, c, x);
  if (abserr) *abserr = r.abserr;
  return r.value;
}

/// lim_{c -> -n} F(a,b;c;x) / Gamma(c), n = 0,1,2,...
/// This is the finite limiting form that replaces the (divergent) F when the
/// third parameter degenerates to a non-positive integer:
///   (a)_{n+1} (b)_{n+1} x^{n+1} / (n+1)! * F(a+n+1, b+n+1; n+2; x).
inline double gauss_2f1_gamma_limit(double a, double b, int n, double x) {
  if (n < 0) throw std::domain_error("gauss_2f1_gamma_limit: n must be >= 0");
  double poch = 1.0;
  for (int k = 0; k <= n; ++k) poch *= (a + k) * (b + k) / (k + 1.0);
  return poch * std::pow(x, n + 1) * gauss_2f1(a + n + 1, b + n + 1, n + 2.0, x);
}

struct EllipticKE {
  double K;
  double E;
};

/// Complete elliptic integrals K(kappa), E(kappa) in the modulus convention
///   K = int_0^{pi/2} (1 - kappa^2 sin^2 t)^{-1/2} dt,  E likewise with +1/2.
/// AGM iteration; converges quadratically (machine precision in < 10 sweeps).
/// kappa = 1 returns K = +inf, E = 1.
inline EllipticKE elliptic_ke(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::domain_error("elliptic_ke: kappa must lie in [0,1]");
  if (kappa == 1.0) return {kInf, 1.0};
  double a = 1.0, b = std::sqrt(1.0 - kappa * kappa);
  double c = kappa;
  double csum = 0.5 * c * c;  // sum 2^{n-1} c_n^2 starting at n = 0
  double pw = 0.5;
  for (int it = 0; it < 64 && std::abs(c) > 1e-17 * a; ++it) {
    c = 0.5 * (a - b);
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pw *= 2.0;
    csum += pw * c * c;
  }
  double K = kPi / (2.0 * a);
  return {K, K * (1.0 - csum)};
}

/// Jacobi polynomial P_n^{(alpha,beta)}(x) by the standard three-term
/// recurrence. beta = -1 is degenerate for the recurrence and is routed
/// through the reduction
///   P_n^{(alpha,-1)}(x) = ((n+alpha)/n) * ((1+x)/2) * P_{n-1}^{(alpha,1)}(x),
/// which is the stable hypergeometric-representation route.
inline double jacobi_p(int n, double alpha, double beta, double x) {
  if (n < 0) throw std::domain_error("jacobi_p: degree must be >= 0");
  if (n == 0) return 1.0;
  if (near_integer(beta + 1.0) && std::abs(beta + 1.0) < 1e-13) {
    return (n + alpha) / static_cast<double>(n) * 0.5 * (1.0 + x) * jacobi_p(n - 1, alpha, 1.0, x);
  }
  double p0 = 1.0;
  double p1 = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x;
  for (int k = 1; k < n; ++k) {
    double a1 = 2.0 * (k + 1.0) * (k + alpha + beta + 1.0) * (2.0 * k + alpha + beta);
    double a2 = (2.0 * k + alpha + beta + 1.0) * (alpha * alpha - beta * beta);
    double a3 = (2.0 * k + alpha + beta) * (2.0 * k + alpha + beta + 1.0) * (2.0 * k + alpha + beta + 2.0);
    double a4 = 2.0 * (k + alpha) * (k + beta) * (2.0 * k + alpha + beta + 2.0);
    double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Legendre polynomial P_n(z), complex argument (Bonnet recurrence).
/// The argument is frequently outside [-1,1] or pure imaginary here.
inline Complex legendre_p(int n, Complex z) {
  if (n < 0) throw std::domain_error("legendre_p: degree must be >= 0");
  Complex p0 = 1.0;
  if (n == 0) return p0;
  Complex p1 = z;
  for (int k = 1; k < n; ++k) {
    Complex p2 = ((2.0 * k + 1.0) * z * p1 - static_cast<double>(k) * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Physicists' Hermite polynomial H_n(z), complex argument.
inline Complex hermite_h(int n, Complex z) {
  if (n < 0) throw std::domain_error("hermite_h: degree must be >= 0");
  Complex h0 = 1.0;
  if (n == 0) return h0;
  Complex h1 = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    Complex h2 = 2.0 * z * h1 - 2.0 * static_cast<double>(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

}  // namespace dce
