#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dce/energy_density.hpp"

using namespace dce;
using Catch::Approx;

TEST_CASE("casimir point splitting and Richardson limit") {
  // analytic limit -pi/24, leading correction (pi^3/480) eta^2
  double eta = 0.1;
  double w = casimir_point_split(eta);
  CHECK((w + kPi / 24.0) / (eta * eta) == Approx(kPi * kPi * kPi / 480.0).epsilon(1e-2));
  CasimirResult r = casimir_regularized({0.2, 0.1, 0.05, 0.025});
  CHECK(r.value == Approx(-kPi / 24.0).margin(1e-8));
  CHECK(r.raw.size() == 4);
  CHECK_THROWS_AS(casimir_regularized({0.1, 0.2, 0.05, 0.025}), std::invalid_argument);
  CHECK_THROWS_AS(casimir_regularized({0.2, 0.1}), std::invalid_argument);
}

TEST_CASE("density vanishes before the wall moves and for p = 1 vacuum") {
  std::vector<double> xs;
  for (int i = 0; i <= 64; ++i) xs.push_back(i / 64.0);
  EnergyProfile p0 = density_profile(2, 0.0, 0.0, InitialFieldState::vacuum_state(), 0.3, xs);
  for (double w : p0.W) CHECK(std::abs(w) < 1e-14);
  EnergyProfile p1 = density_profile(1, 0.0, 1.2, InitialFieldState::vacuum_state(), 0.3, xs);
  for (double w : p1.W) CHECK(std::abs(w) < 1e-14);
  CHECK(p0.casimir_constant == Approx(-kPi / 24.0));
}

TEST_CASE("diagonal states scale the light-cone function") {
  // F_diag = -B + f (B + N0): the profile difference from vacuum is
  // proportional to the vacuum f-profile
  int p = 2;
  double gamma = 0.3, tau = 0.7, t = 0.13;
  InitialFieldState th = InitialFieldState::thermal(1.0, 20);
  double N0 = th.total_energy_omega1();
  for (double x : {0.12, 0.4, 0.77}) {
    double wv = density_at(p, gamma, tau, InitialFieldState::vacuum_state(), t, x);
    double wt = density_at(p, gamma, tau, th, t, x);
    // W_t - W_v = (pi/2) N0 [f(u) + f(v)] = N0 * (W_v / B + pi) since
    // W_v = (pi/2) B [f(u) + f(v) - 2]
    double B = (p * p - 1.0) / 24.0;
    CHECK(wt - wv == Approx(N0 * (wv / B + kPi)).epsilon(1e-10));
  }
}

TEST_CASE("energy closure: integral of W equals pi times the total energy") {
  struct Pt {
    int p;
    double gamma, tau;
  };
  for (Pt pt : {Pt{2, 0.0, 0.5}, Pt{2, 0.5, 1.0}, Pt{3, 0.0, 0.5}, Pt{3, 0.5, 1.0}}) {
    // uniform grid over a full period: trapezoid is spectrally accurate
    int N = 16384;
    double t = 0.31;
    detail::LightconeEval ev(pt.p, pt.gamma, pt.tau);
    InitialFieldState vac = InitialFieldState::vacuum_state();
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += density_at(pt.p, pt.gamma, pt.tau, vac, t, (i + 0.5) / N);
    double integral = acc / N;
    double expect = kPi * total_energy(pt.p, pt.gamma, pt.tau, vac);
    INFO("p=" << pt.p << " gamma=" << pt.gamma << " tau=" << pt.tau);
    CHECK(integral == Approx(expect).epsilon(1e-6));
  }
  // thermal state closure
  InitialFieldState th = InitialFieldState::high_temperature(3.0, 24);
  int N = 16384;
  double acc = 0.0;
  for (int i = 0; i < N; ++i) acc += density_at(2, 0.0, 1.0, th, 0.31, (i + 0.5) / N);
  CHECK(acc / N == Approx(kPi * total_energy(2, 0.0, 1.0, th)).epsilon(1e-6));
}

TEST_CASE("peak structure at p = 2") {
  int p = 2;
  double tau = 1.0, t = 0.25;
  InitialFieldState vac = InitialFieldState::vacuum_state();
  std::vector<double> xs = refined_density_grid(p, 0.0, tau, t);
  EnergyProfile prof = density_profile(p, 0.0, tau, vac, t, xs);
  PeakAnalysis pa = peak_analysis(prof, vac);
  REQUIRE(pa.maxima.size() == 2);  // p peaks per unit interval
  double B = (p * p - 1.0) / 24.0;
  double predicted = kPi / 2.0 * B * (std::exp(4.0 * p * tau) - 1.0);
  for (const Peak& pk : pa.maxima) {
    // measured height against the two-light-cone prediction (tight) and the
    // one-term textbook value (the second cone contributes ~ e^{-4 p tau})
    CHECK(pk.height == Approx(pa.predicted_height_exact).epsilon(1e-6));
    CHECK(pk.height == Approx(predicted).epsilon(1e-3));
    CHECK(pk.width_quarter == Approx(pa.predicted_width_quarter).epsilon(5e-2));
  }
  // off-peak density is below the static vacuum level
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    bool near = false;
    for (const Peak& pk : pa.maxima)
      if (std::abs(prof.x[i] - pk.x) < 8.0 * pa.predicted_width_quarter) near = true;
    if (!near) CHECK(prof.W[i] < 0.0);
  }
  // minima approach pi B (e^{-4 p tau} - 1)
  REQUIRE(!pa.minima.empty());
  double wmin = 1e300;
  for (const Peak& pk : pa.minima) wmin = std::min(wmin, pk.height);
  CHECK(wmin >= kPi * B * (std::exp(-4.0 * p * tau) - 1.0) - 1e-9);
  CHECK(wmin == Approx(kPi * B * (std::exp(-4.0 * p * tau) - 1.0)).epsilon(2e-3));
  // asymptotic floor plus the Casimir constant: -pi p^2 / 24
  double floor_total = kPi * B * (0.0 - 1.0) + prof.casimir_constant;  // kappa -> 1 limit of the minima
  CHECK(floor_total == Approx(-kPi * p * p / 24.0).margin(1e-12));
}

TEST_CASE("merged peaks double the height") {
  // at t = 0.5 the two light-cone peaks coincide at the boundaries x = 0, 1
  int p = 2;
  double tau = 0.8;
  InitialFieldState vac = InitialFieldState::vacuum_state();
  double B = (p * p - 1.0) / 24.0;
  double single = kPi / 2.0 * B * (std::exp(4.0 * p * tau) - 1.0);
  double merged = density_at(p, 0.0, tau, vac, 0.5, 0.0);
  CHECK(merged == Approx(2.0 * single).epsilon(1e-9));
  // scanning t confirms the doubled height appears only near merge instants
  double t_generic = 0.25;
  std::vector<double> xs = refined_density_grid(p, 0.0, tau, t_generic);
  double wmax = -1e300;
  for (double x : xs) wmax = std::max(wmax, density_at(p, 0.0, tau, vac, t_generic, x));
  CHECK(wmax < 1.2 * single);
}

TEST_CASE("profile periodicity in the fast time") {
  InitialFieldState vac = InitialFieldState::vacuum_state();
  // even p: period 1; odd p: period 2
  for (double x : {0.21, 0.63}) {
    CHECK(density_at(2, 0.4, 0.6, vac, 0.17, x) == Approx(density_at(2, 0.4, 0.6, vac, 1.17, x)).margin(1e-10));
    double a = density_at(3, 0.4, 0.6, vac, 0.17, x);
    CHECK(a == Approx(density_at(3, 0.4, 0.6, vac, 2.17, x)).margin(1e-10));
  }
  // x -> 1 - x with t -> t + 1 maps the two light cones into each other
  CHECK(density_at(3, 0.0, 0.6, vac, 0.17, 0.3) ==
        Approx(density_at(3, 0.0, 0.6, vac, 1.17, 0.7)).margin(1e-10));
}

TEST_CASE("coherent fine structure") {
  double tau = 0.6;
  double kap = std::tanh(2.0 * tau);
  double amp = 2.0;
  // psi = pi/2: single maximum pi |alpha|^2 (1+k)^2 / (1-k)^2 at z = 0
  Complex a_pi2 = amp * std::exp(Complex(0.0, kPi / 2.0));
  CHECK(fine_structure_coherent(a_pi2, tau, 0.0) ==
        Approx(kPi * amp * amp * powi((1.0 + kap) / (1.0 - kap), 2)).epsilon(1e-12));
  // psi = 0: zero at z = 0, two humps at sin z = +-(1-k)/sqrt(8k) with height
  // ratio (1+k)^2 / (27 k) relative to the psi = pi/2 maximum
  Complex a_0(amp, 0.0);
  CHECK(fine_structure_coherent(a_0, tau, 0.0) == Approx(0.0).margin(1e-12));
  double zh = std::asin((1.0 - kap) / std::sqrt(8.0 * kap));
  double hump = fine_structure_coherent(a_0, tau, zh);
  double ratio = powi(1.0 + kap, 2) / (27.0 * kap);
  CHECK(hump == Approx(ratio * kPi * amp * amp * powi((1.0 + kap) / (1.0 - kap), 2)).epsilon(1e-10));
  // the formula reproduces the single light-cone function difference exactly
  InitialFieldState coh = InitialFieldState::coherent(1, a_0);
  InitialFieldState vac = InitialFieldState::vacuum_state();
  detail::LightconeEval ev(2, 0.0, tau);
  double ustar = 0.5;  // vacuum peak of the u cone at gamma = 0, p = 2
  for (double z : {-0.2, 0.05, 0.3}) {
    double u = ustar + z / kPi;
    double dF = kPi / 2.0 * (ev.F(u, coh) - ev.F(u, vac));
    CHECK(dF == Approx(fine_structure_coherent(a_0, tau, z)).margin(1e-10 * (1.0 + std::abs(dF))));
  }
  // on the full density the other cone contributes only a smooth background:
  // at the psi = pi/2 peak it is a sub-percent correction
  InitialFieldState cpi2 = InitialFieldState::coherent(1, a_pi2);
  double t = 0.1;
  double dw_peak = density_at(2, 0.0, tau, cpi2, t, ustar - t) - density_at(2, 0.0, tau, vac, t, ustar - t);
  CHECK(dw_peak == Approx(fine_structure_coherent(a_pi2, tau, 0.0)).epsilon(2e-2));
  // energy share: integrating the coherent-minus-vacuum density over the full
  // cavity returns the coherent part of the total energy
  Complex a_pi4 = amp * std::exp(Complex(0.0, kPi / 4.0));
  InitialFieldState c4 = InitialFieldState::coherent(1, a_pi4);
  int N = 32768;
  double acc = 0.0;
  for (int i = 0; i < N; ++i)
    acc += density_at(2, 0.0, tau, c4, t, (i + 0.5) / N) - density_at(2, 0.0, tau, vac, t, (i + 0.5) / N);
  double share = acc / N / kPi;
  double expect = total_energy(2, 0.0, tau, c4) - total_energy(2, 0.0, tau, vac);
  CHECK(share == Approx(expect).epsilon(1e-4));
}

TEST_CASE("resolution guard") {
  InitialFieldState vac = InitialFieldState::vacuum_state();
  std::vector<double> coarse;
  for (int i = 0; i <= 64; ++i) coarse.push_back(i / 64.0);
  EnergyProfile prof = density_profile(2, 0.0, 1.5, vac, 0.25, coarse);
  CHECK_THROWS_AS(peak_analysis(prof, vac), std::invalid_argument);
}
