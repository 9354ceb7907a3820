#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dce/cavity3d.hpp"

using namespace dce;
using Catch::Approx;

TEST_CASE("geometry: eigenfrequencies and nondegeneracy scan") {
  CavityGeometry g{1.0, 1.1, 0.05};
  CHECK(g.eigenfrequency(1, 1, 0) == Approx(kPi * std::sqrt(1.0 + 1.0 / 1.21)).epsilon(1e-14));
  CHECK(g.degenerate_pairs(5).empty());
  // a square cross-section is degenerate: (m,n) and (n,m) coincide
  CavityGeometry sq{1.0, 1.0, 0.05};
  CHECK(!sq.degenerate_pairs(3).empty());
  CHECK(!g.equidistant_subsets(4).empty());
}

TEST_CASE("static mode solution is exact") {
  ModeSolution s = classical_mode_solution(0.0, 1.0, 5.0, true);
  Complex expect = std::exp(Complex(0.0, 5.0));
  CHECK(std::abs(s.u - expect) < 1e-9);
  CHECK(s.n_mean == Approx(0.0).margin(1e-10));
  CHECK(s.wronskian_drift < 1e-10);
}

TEST_CASE("parametric growth matches sinh^2 and conserves the Wronskian") {
  double eps = 1e-3, w0 = 1.0;
  for (double mu : {1.0, 2.0}) {
    double t = mu / (w0 * eps);
    ModeSolution direct = classical_mode_solution(eps, w0, t, true, 1e-12);
    CHECK(direct.wronskian_drift < 1e-9);
    CHECK(direct.n_mean == Approx(std::pow(std::sinh(mu), 2)).epsilon(2e-2));
    ModeSolution slow = classical_mode_solution(eps, w0, t, false);
    CHECK(slow.n_mean == Approx(std::pow(std::sinh(mu), 2)).epsilon(1e-12));
  }
}

TEST_CASE("squeezed vacuum statistics") {
  SqueezedVacuumStats s0 = squeezed_vacuum_stats(0.0);
  CHECK(s0.N == 0.0);
  CHECK(s0.P[0] == 1.0);
  CHECK(s0.U == 0.5);
  CHECK(s0.V == 0.5);

  double mu = 1.5;
  SqueezedVacuumStats s = squeezed_vacuum_stats(mu);
  double sum = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < s.P.size(); ++n) {
    sum += s.P[n];
    mean += n * s.P[n];
    if (n % 2 == 1) CHECK(s.P[n] == 0.0);
  }
  CHECK(sum == Approx(1.0).margin(1e-12));
  CHECK(mean == Approx(s.N).margin(1e-9));
  
  CHECK(squeezed_vacuum_stats(0.8).sigma_n == Approx(0.5 * std::pow(std::sinh(1.6), 2)).epsilon(1e-12));
  // ideal squeezed vacuum: U V = 1/4 exactly
  CHECK(s.U * s.V == Approx(0.25).epsilon(1e-14));
}

TEST_CASE("probe-detector covariance invariants") {
  double mu = 3.0, phi = 0.7;
  DetectorCovariance d = detector_covariance(mu, phi);
  double ch2 = std::pow(std::cosh(mu), 2);
  CHECK(d.T == Approx(ch2).epsilon(1e-13));
  CHECK(4.0 * d.d == Approx(ch2).epsilon(1e-13));
  CHECK(d.s == Approx(0.5 * (1.0 + std::exp(-2.0 * mu))).epsilon(1e-12));
  CHECK(d.N == Approx(0.5 * std::pow(std::sinh(mu), 2)).epsilon(1e-13));
  // half the photons of the empty cavity at the same squeezing parameter
  CHECK(d.N == Approx(0.5 * squeezed_vacuum_stats(mu).N).epsilon(1e-13));
  // sigma_n: the invariant form (2T^2 - 4d - 1)/4; the mu >> 1 shorthand
  // sinh^2(mu) cosh(2mu)/4 agrees asymptotically
  CHECK(d.sigma_n == Approx(0.25 * (2.0 * ch2 * ch2 - ch2 - 1.0)).epsilon(1e-13));
  double mu2 = 5.0;
  DetectorCovariance d2 = detector_covariance(mu2, 0.3);
  CHECK(d2.sigma_n == Approx(0.25 * std::pow(std::sinh(mu2), 2) * std::cosh(2.0 * mu2)).epsilon(2e-2));
  CHECK(detector_covariance(1.0, 0.0).long_time_valid == false);
  // s -> 1/2 from above as mu grows
  CHECK(detector_covariance(8.0, 0.0).s == Approx(0.5).margin(1e-6));
}

TEST_CASE("probe-detector photon distribution") {
  double mu = 3.0;
  DetectorCovariance d = detector_covariance(mu, 0.0);
  double z2 = std::pow(std::sinh(mu), 2) / (1.0 + 3.0 * std::pow(std::cosh(mu), 2));
  // recurrence n P_n = z^2 [(2n-1) P_{n-1} + (n-1) P_{n-2}]
  for (std::size_t n = 2; n < std::min<std::size_t>(d.P.size(), 40); ++n) {
    double rhs = z2 * ((2.0 * n - 1.0) * d.P[n - 1] + (n - 1.0) * d.P[n - 2]) / n;
    CHECK(d.P[n] == Approx(rhs).margin(1e-12));
  }
  double sum = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < d.P.size(); ++n) {
    sum += d.P[n];
    mean += n * d.P[n];
  }
  CHECK(sum == Approx(1.0).margin(1e-9));
  CHECK(mean == Approx(d.N).epsilon(1e-8));
  // no parity oscillations (argument of the Legendre polynomial is imaginary)
  for (std::size_t n = 1; n + 1 < std::min<std::size_t>(d.P.size(), 30); ++n)
    CHECK(d.P[n] > 0.5 * std::sqrt(d.P[n - 1] * d.P[n + 1]));
}

TEST_CASE("two-level detector under resonant drive") {
  // Omega = 1: theta = pi/4 and P1 = P2 = P+ = sin^2(eps t / 4) / 2
  double eps = 1e-3;
  JcDetectorResult r = jc_detector(1.0, 1e-2, eps, 700.0);
  CHECK(r.theta1 == Approx(kPi / 4).epsilon(1e-10));
  double expect = 0.5 * std::pow(std::sin(eps * 700.0 / 4.0), 2);
  CHECK(r.P1 == Approx(expect).epsilon(1e-9));
  CHECK(r.P2 == Approx(expect).epsilon(1e-9));
  CHECK(r.Pplus == Approx(expect).epsilon(1e-9));
  // t = 0: nothing excited
  JcDetectorResult r0 = jc_detector(1.1, 1e-2, eps, 0.0);
  CHECK(r0.P1 == 0.0);
  CHECK(r0.P2 == 0.0);
  // detector excitation stays below 1/2 at and above level resonance
  for (double Om : {1.0, 1.1}) {
    double pmax = 0.0;
    for (double t = 0.0; t < 4.0 / (eps * 0.1); t += 50.0)
      pmax = std::max(pmax, jc_detector(Om, 1e-3, eps * 1e-2, t).Pplus);
    CHECK(pmax <= 0.5 + 1e-12);
  }
  CHECK(jc_detector(1.0, 1e-3, 1e-3, 1.0).validity_warning);  // eps not << kappa_c
  CHECK(!jc_detector(1.0, 1e-1, 1e-3, 1.0).validity_warning);
}

TEST_CASE("damped oscillator: relaxation without drive") {
  DampedOscParams par{0.0, 0.0, 1e-3, 0.5};
  DampedOscState s = damped_moments_evolve(par, {2.0, 0.0, 2.0}, 3000.0, false);
  double expect = 0.5 + (2.0 - 0.5) * std::exp(-2.0 * 1e-3 * 3000.0);
  CHECK(s.E == Approx(expect).epsilon(1e-12));
  DampedOscState sd = damped_moments_evolve(par, {2.0, 0.0, 2.0}, 3000.0, true);
  CHECK(sd.E == Approx(expect).epsilon(1e-7));
}

TEST_CASE("damped oscillator: slow closed form vs direct integration") {
  // kappa, delta, gamma ~ 1e-3: the two descriptions agree to O(eps) overall
  DampedOscParams par{1e-3, 0.5e-3, 0.4e-3, 0.5};
  std::array<double, 3> s0{0.5, 0.0, 0.5};
  for (double T : {1000.0, 3000.0}) {
    DampedOscState a = damped_moments_evolve(par, s0, T, false);
    DampedOscState b = damped_moments_evolve(par, s0, T, true);
    CHECK(a.E == Approx(b.E).epsilon(4e-3));
    CHECK(a.u == Approx(b.u).margin(4e-3 * std::abs(b.E)));
    CHECK(a.d >= 0.25 - 1e-9);
    CHECK(b.d >= 0.25 - 1e-9);
  }
}

TEST_CASE("damped oscillator: thermal d(t) closed form") {
  DampedOscParams par{1e-3, 0.0, 2e-4, 0.5};
  double T = 3000.0;
  DampedOscState direct = damped_moments_evolve(par, {0.5, 0.0, 0.5}, T, true, 1e-12);
  CHECK(direct.d == Approx(damped_d_thermal(par, T)).epsilon(1e-6));
  // above threshold the energy grows like a+ kappa e^{2 (nu - gamma) t}
  double nu = 1e-3;
  double ap = par.kappa * par.E_star / (2.0 * nu * (nu - par.gamma));
  DampedOscState slow = damped_moments_evolve(par, {0.5, 0.0, 0.5}, 6000.0, false);
  CHECK(slow.E == Approx(ap * par.kappa * std::exp(2.0 * (nu - par.gamma) * 6000.0)).epsilon(2e-2));
}

TEST_CASE("stability classification and asymptotics") {
  // stable iff gamma^2 + delta^2 > kappa^2
  CHECK(stability_classify({1e-3, 0.8e-3, 0.7e-3, 0.5}).stable);
  CHECK(!stability_classify({1e-3, 0.2e-3, 0.3e-3, 0.5}).stable);
  // stable asymptote from the closed solution at large t
  DampedOscParams par{1e-3, 0.8e-3, 0.7e-3, 0.5};
  StabilityResult r = stability_classify(par);
  DampedOscState s = damped_moments_evolve(par, {1.7, 0.1, 0.9}, 4.0e4, false);
  CHECK(s.E == Approx(r.E_inf).epsilon(1e-8));
  CHECK(s.u == Approx(r.u_inf).epsilon(1e-6));
  CHECK(s.d == Approx(r.d_inf).epsilon(1e-6));
  // final state forgets the initial conditions
  DampedOscState s2 = damped_moments_evolve(par, {0.5, 0.0, 0.5}, 4.0e4, false);
  CHECK(s2.E == Approx(s.E).epsilon(1e-8));
  // at threshold and T = 0 the minimal variance tends to 1/4
  double k = 1e-3, gg = 0.6e-3, dl = std::sqrt(k * k - gg * gg) * (1.0 + 1e-6);
  StabilityResult rt = stability_classify({k, dl, gg, 0.5});
  CHECK(rt.u_inf == Approx(0.25).epsilon(1e-4));
  // unstable: growth rate and u_infinity (thermal start)
  DampedOscParams up{1e-3, 0.0, 2e-4, 0.5};
  StabilityResult ru = stability_classify(up);
  CHECK(!ru.stable);
  CHECK(ru.growth_rate == Approx(2.0 * (1e-3 - 2e-4)).epsilon(1e-12));
  DampedOscState su = damped_moments_evolve(up, {0.5, 0.0, 0.5}, 8000.0, false);
  CHECK(su.u == Approx(ru.u_inf_unstable).epsilon(1e-3));
  // gamma = 0: d stays at E_eq^2 and u decays like E (nu/kappa)^2 e^{-2 nu t}
  DampedOscParams g0{1e-3, 0.0, 0.0, 0.5};
  DampedOscState sg = damped_moments_evolve(g0, {0.5, 0.0, 0.5}, 2500.0, false);
  CHECK(sg.d == Approx(0.25).epsilon(1e-9));
  CHECK(sg.u == Approx(0.5 * std::exp(-2.0 * 1e-3 * 2500.0)).epsilon(2e-2));
}

TEST_CASE("degenerate nu = gamma branch is continuous") {
  double k = 1e-3, dl = 0.6e-3;
  double nu = std::sqrt(k * k - dl * dl);
  DampedOscParams at{k, dl, nu, 0.5};
  DampedOscParams near{k, dl, nu * (1.0 + 1e-5), 0.5};
  DampedOscState a = damped_moments_evolve(at, {0.9, 0.1, 0.7}, 2000.0, false);
  DampedOscState b = damped_moments_evolve(near, {0.9, 0.1, 0.7}, 2000.0, false);
  CHECK(a.E == Approx(b.E).epsilon(1e-3));
  DampedOscState d = damped_moments_evolve(at, {0.9, 0.1, 0.7}, 2000.0, true);
  CHECK(a.E == Approx(d.E).epsilon(5e-3));
}
