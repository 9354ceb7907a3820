// dce: command-line driver for the vibrating-cavity photon-generation
// library. Subcommands: evolve, stats, density, moore, cavity3d, damped,
// sweep, estimate. Output goes to CSV or JSON tables with a reproducible
// metadata header. Exit codes: 0 success, 1 numerical-convergence failure,
// 2 usage or validation error.

#include <atomic>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dce/cavity3d.hpp"
#include "dce/closedform.hpp"
#include "dce/core.hpp"
#include "dce/energy_density.hpp"
#include "dce/evolution.hpp"
#include "dce/io.hpp"
#include "dce/moore.hpp"
#include "dce/specfun.hpp"
#include "dce/statistics.hpp"

namespace {

std::string g_echo;  // canonical re-run line written into every file header

std::vector<double> parse_grid(const std::string& spec) {
  // "lo:step:hi" inclusive, or a comma list "a,b,c"
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double lo, step, hi;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || step <= 0.0)
      throw CLI::ValidationError("grid", "expected lo:step:hi with step > 0: " + spec);
    for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi)); v += step) out.push_back(v);
  } else {
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty()) out.push_back(std::strtod(cell.c_str(), nullptr));
    }
  }
  if (out.empty()) throw CLI::ValidationError("grid", "empty grid: " + spec);
  return out;
}

dce::InitialFieldState parse_state(const std::string& spec) {
  // vacuum | thermal:beta:cutoff | lowt:beta:cutoff | hightemp:theta:cutoff
  // | mode:n:occupation | coherent:n:re:im
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string cell;
  while (std::getline(ss, cell, ':')) parts.push_back(cell);
  auto num = [&](std::size_t i) { return std::strtod(parts.at(i).c_str(), nullptr); };
  if (parts.empty() || parts[0] == "vacuum") return dce::InitialFieldState::vacuum_state();
  if (parts[0] == "thermal") return dce::InitialFieldState::thermal(num(1), static_cast<int>(num(2)));
  if (parts[0] == "lowt") return dce::InitialFieldState::thermal_low_t(num(1), static_cast<int>(num(2)));
  if (parts[0] == "hightemp") return dce::InitialFieldState::high_temperature(num(1), static_cast<int>(num(2)));
  if (parts[0] == "mode") return dce::InitialFieldState::single_mode(static_cast<int>(num(1)), num(2));
  if (parts[0] == "coherent")
    return dce::InitialFieldState::coherent(static_cast<int>(num(1)), dce::Complex(num(2), num(3)));
  throw CLI::ValidationError("state", "unknown state spec: " + spec);
}

void stamp(dce::Table& t, const std::string& command) {
  t.add_meta("tool", "dce");
  t.add_meta("version", dce::kToolVersion);
  t.add_meta("command", command);
  t.add_meta("echo", g_echo);
}

void emit(const dce::Table& t, const std::string& path, const std::string& fmt) {
  if (fmt == "json")
    dce::write_json(path, t);
  else
    dce::write_csv(path, t);
}

struct CommonOut {
  std::string output = "out.csv";
  std::string format = "csv";
  void attach(CLI::App* app) {
    app->add_option("--output,-o", output, "output file path");
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }
};

// ---------------------------------------------------------------------- evolve
struct EvolveArgs {
  int p = 2;
  double gamma = 0.0, tau = 1.0, tol = 1e-11;
  int modes = 128, columns = 0;
  CommonOut out;
};

int cmd_evolve(const EvolveArgs& a) {
  dce::ResonanceParams rp;
  rp.p = a.p;
  rp.gamma = a.gamma;
  rp.epsilon = 1e-3;  // epsilon only rescales laboratory time; tau is the input here
  dce::SlowIntegrateOptions opt;
  opt.rtol = opt.atol = a.tol;
  opt.columns = a.columns;
  dce::BogoliubovMatrix m = dce::integrate_slow(rp, a.tau, a.modes, opt);
  dce::UnitarityResiduals r = dce::unitarity_residuals(m);
  dce::Table t;
  stamp(t, "evolve");
  t.add_meta("p", static_cast<double>(a.p));
  t.add_meta("gamma", a.gamma);
  t.add_meta("tau", a.tau);
  t.add_meta("modes", static_cast<double>(a.modes));
  t.add_meta("tolerance", a.tol);
  t.add_meta("unitarity_r1", r.r1);
  t.add_meta("unitarity_r2", r.r2);
  t.add_meta("unitarity_r3", r.r3);
  t.add_meta("r23_pairs_checked", static_cast<double>(r.r23_pairs_checked));
  t.add_meta("r23_pairs_skipped", static_cast<double>(r.r23_pairs_skipped));
  if (a.p == 1) t.add_meta("photon_conservation_max_dev", r.r1);  // p = 1: total photon number conserved
  t.columns = {"m", "n", "re", "im"};
  for (int n = 1; n <= m.columns; ++n)
    for (int mm = -m.M; mm <= m.M; ++mm) {
      if (mm == 0) continue;
      dce::Complex v = m.at(mm, n);
      if (v == dce::Complex(0.0, 0.0)) continue;
      t.rows.push_back({static_cast<double>(mm), static_cast<double>(n), v.real(), v.imag()});
    }
  emit(t, a.out.output, a.out.format);
  std::cout << "evolve: " << t.rows.size() << " coefficients, r1=" << dce::format_g17(r.r1) << "\n";
  return 0;
}

// ----------------------------------------------------------------------- stats
struct StatsArgs {
  int p = 2;
  double gamma = 0.0;
  std::string tau_grid = "0:0.1:1";
  int mode = 1;
  std::string state = "vacuum";
  std::string method = "closed";  // closed | ode
  int modes = 128;
  bool estimate_lab_rate = false;
  double freq_ghz = 10.0;
  CommonOut out;
};

int cmd_stats(const StatsArgs& a) {
  dce::Table t;
  stamp(t, "stats");
  if (a.estimate_lab_rate) {
    double f1 = a.freq_ghz * 1e9;
    double rate = dce::lab_photon_rate(f1);
    t.add_meta("freq_ghz", a.freq_ghz);
    t.columns = {"freq_hz", "photons_per_second"};
    t.rows.push_back({f1, rate});
    emit(t, a.out.output, a.out.format);
    std::cout << "estimated max photon rate: " << rate << " photons/s at " << a.freq_ghz << " GHz\n";
    return 0;
  }
  dce::InitialFieldState st = parse_state(a.state);
  std::vector<double> taus = parse_grid(a.tau_grid);
  t.add_meta("p", static_cast<double>(a.p));
  t.add_meta("gamma", a.gamma);
  t.add_meta("mode", static_cast<double>(a.mode));
  t.add_meta("state", a.state);
  t.add_meta("method", a.method);
  t.columns = {"tau", "N", "U", "V", "Y", "u", "v", "Q", "purity"};
  for (double tau : taus) {
    dce::QuadratureMoments qm;
    if (a.method == "ode") {
      dce::ResonanceParams rp;
      rp.p = a.p;
      rp.gamma = a.gamma;
      rp.epsilon = 1e-3;
      dce::BogoliubovMatrix m = dce::integrate_slow(rp, tau, a.modes);
      qm = dce::quadrature_moments(dce::RhoSource(m), st, a.mode);
    } else {
      qm = dce::quadrature_moments(dce::RhoSource(a.p, a.gamma, tau), st, a.mode);
    }
    t.rows.push_back({tau, qm.N, qm.U, qm.V, qm.Y, qm.u, qm.v, qm.mandel_q, qm.purity});
  }
  emit(t, a.out.output, a.out.format);
  std::cout << "stats: " << t.rows.size() << " rows -> " << a.out.output << "\n";
  return 0;
}

// --------------------------------------------------------------------- density
struct DensityArgs {
  int p = 2;
  double gamma = 0.0, tau = 1.0, t = 0.25;
  int grid = 4096;
  bool refine = true;
  std::string state = "vacuum";
  CommonOut out;
};

int cmd_density(const DensityArgs& a) {
  dce::InitialFieldState st = parse_state(a.state);
  std::vector<double> xs;
  if (a.refine) {
    xs = dce::refined_density_grid(a.p, a.gamma, a.tau, a.t, a.grid);
  } else {
    for (int i = 0; i <= a.grid; ++i) xs.push_back(static_cast<double>(i) / a.grid);
  }
  dce::EnergyProfile prof = dce::density_profile(a.p, a.gamma, a.tau, st, a.t, xs);
  dce::Table t;
  stamp(t, "density");
  t.add_meta("p", static_cast<double>(a.p));
  t.add_meta("gamma", a.gamma);
  t.add_meta("tau", a.tau);
  t.add_meta("t", a.t);
  t.add_meta("state", a.state);
  t.add_meta("casimir_constant", prof.casimir_constant);
  try {
    dce::PeakAnalysis pa = dce::peak_analysis(prof, st);
    t.add_meta("peaks_found", static_cast<double>(pa.maxima.size()));
    t.add_meta("predicted_peak_height", pa.predicted_height);
    for (std::size_t i = 0; i < pa.maxima.size(); ++i) {
      t.add_meta("peak_" + std::to_string(i) + "_x", pa.maxima[i].x);
      t.add_meta("peak_" + std::to_string(i) + "_height", pa.maxima[i].height);
      t.add_meta("peak_" + std::to_string(i) + "_width_quarter", pa.maxima[i].width_quarter);
    }
  } catch (const std::invalid_argument& e) {
    t.add_meta("peak_analysis_error", e.what());
  }
  t.columns = {"x", "W"};
  for (std::size_t i = 0; i < prof.x.size(); ++i) t.rows.push_back({prof.x[i], prof.W[i]});
  emit(t, a.out.output, a.out.format);
  std::cout << "density: " << t.rows.size() << " points -> " << a.out.output << "\n";
  return 0;
}

// ----------------------------------------------------------------------- moore
struct MooreArgs {
  std::string law = "resonant:0.01:2";  // uniform:alpha | reciprocal:alpha | resonant:eps:q
  std::string representation = "resonant";  // uniform | perturbative:order | resonant
  double L0 = 1.0;
  std::string t_grid = "0:0.1:10";
  CommonOut out;
};

int cmd_moore(const MooreArgs& a) {
  std::vector<std::string> lp;
  {
    std::stringstream ss(a.law);
    std::string cell;
    while (std::getline(ss, cell, ':')) lp.push_back(cell);
  }
  dce::BoundaryMotion motion;
  if (lp.at(0) == "uniform")
    motion = dce::BoundaryMotion::uniform(a.L0, std::strtod(lp.at(1).c_str(), nullptr));
  else if (lp.at(0) == "reciprocal")
    motion = dce::BoundaryMotion::reciprocal(a.L0, std::strtod(lp.at(1).c_str(), nullptr));
  else if (lp.at(0) == "resonant")
    motion = dce::BoundaryMotion::resonant(a.L0, std::strtod(lp.at(1).c_str(), nullptr),
                                           static_cast<int>(std::strtol(lp.at(2).c_str(), nullptr, 10)));
  else
    throw CLI::ValidationError("law", "unknown law: " + a.law);

  dce::RFunction r;
  if (a.representation == "uniform")
    r = dce::make_r_uniform(motion.alpha, a.L0);
  else if (a.representation.rfind("perturbative", 0) == 0) {
    int order = 3;
    auto pos = a.representation.find(':');
    if (pos != std::string::npos) order = static_cast<int>(std::strtol(a.representation.c_str() + pos + 1, nullptr, 10));
    r = dce::make_r_perturbative(motion, order);
  } else if (a.representation == "resonant")
    r = dce::make_r_resonant_asymptotic(motion.epsilon, motion.q, a.L0);
  else
    throw CLI::ValidationError("representation", "unknown representation: " + a.representation);

  std::vector<double> ts = parse_grid(a.t_grid);
  dce::Table t;
  stamp(t, "moore");
  t.add_meta("law", a.law);
  t.add_meta("representation", a.representation);
  t.add_meta("L0", a.L0);
  t.columns = {"t", "L", "residual"};
  double worst = 0.0;
  for (double tt : ts) {
    double L = motion.L(tt);
    double res = std::abs(r(tt + L) - r(tt - L) - 2.0);
    worst = std::max(worst, res);
    t.rows.push_back({tt, L, res});
  }
  t.add_meta("max_residual", worst);
  emit(t, a.out.output, a.out.format);
  std::cout << "moore: max residual " << worst << " -> " << a.out.output << "\n";
  return 0;
}

// -------------------------------------------------------------------- cavity3d
struct Cavity3dArgs {
  std::string what = "mode";  // mode | squeezed | detector | jc
  double eps = 1e-3, omega0 = 1.0, mu = 1.0, phi = 0.0;
  double Omega = 1.0, kappa_c = 1e-3;
  std::string t_grid = "0:100:3000";
  std::string method = "direct";
  CommonOut out;
};

int cmd_cavity3d(const Cavity3dArgs& a) {
  dce::Table t;
  stamp(t, "cavity3d");
  t.add_meta("what", a.what);
  if (a.what == "mode") {
    t.add_meta("eps", a.eps);
    t.add_meta("omega0", a.omega0);
    t.add_meta("method", a.method);
    t.columns = {"t", "n_mean", "sinh2_mu", "wronskian_drift"};
    for (double tt : parse_grid(a.t_grid)) {
      dce::ModeSolution s = dce::classical_mode_solution(a.eps, a.omega0, tt, a.method == "direct");
      double mu = a.omega0 * a.eps * tt;
      t.rows.push_back({tt, s.n_mean, std::sinh(mu) * std::sinh(mu), s.wronskian_drift});
    }
  } else if (a.what == "squeezed") {
    dce::SqueezedVacuumStats s = dce::squeezed_vacuum_stats(a.mu);
    t.add_meta("mu", a.mu);
    t.add_meta("N", s.N);
    t.add_meta("U", s.U);
    t.add_meta("V", s.V);
    t.add_meta("sigma_n", s.sigma_n);
    t.columns = {"n", "P"};
    for (std::size_t n = 0; n < s.P.size(); ++n) t.rows.push_back({static_cast<double>(n), s.P[n]});
  } else if (a.what == "detector") {
    dce::DetectorCovariance d = dce::detector_covariance(a.mu, a.phi);
    t.add_meta("mu", a.mu);
    t.add_meta("phi", a.phi);
    t.add_meta("T", d.T);
    t.add_meta("d", d.d);
    t.add_meta("s_min", d.s);
    t.add_meta("N", d.N);
    t.add_meta("sigma_n", d.sigma_n);
    t.add_meta("long_time_valid", d.long_time_valid ? 1.0 : 0.0);
    t.columns = {"n", "P"};
    for (std::size_t n = 0; n < d.P.size(); ++n) t.rows.push_back({static_cast<double>(n), d.P[n]});
  } else if (a.what == "jc") {
    t.add_meta("Omega", a.Omega);
    t.add_meta("kappa_c", a.kappa_c);
    t.add_meta("eps", a.eps);
    t.columns = {"t", "P1", "P2", "Pplus"};
    for (double tt : parse_grid(a.t_grid)) {
      dce::JcDetectorResult r = dce::jc_detector(a.Omega, a.kappa_c, a.eps, tt);
      t.rows.push_back({tt, r.P1, r.P2, r.Pplus});
    }
  } else {
    throw CLI::ValidationError("what", "unknown cavity3d target: " + a.what);
  }
  emit(t, a.out.output, a.out.format);
  std::cout << "cavity3d " << a.what << " -> " << a.out.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------- damped
struct DampedArgs {
  double kappa = 1e-3, delta = 0.0, gamma = 2e-4, estar = 0.5;
  std::string sigma0 = "0.5,0,0.5";
  std::string t_grid = "0:200:4000";
  std::string method = "slow";
  bool map = false;
  std::string delta_grid = "0:0.25e-3:2e-3", gamma_grid = "0:0.25e-3:2e-3";
  CommonOut out;
};

int cmd_damped(const DampedArgs& a) {
  dce::Table t;
  stamp(t, "damped");
  if (a.map) {
    t.add_meta("kappa", a.kappa);
    t.add_meta("estar", a.estar);
    t.columns = {"delta", "gamma", "stable", "E_inf_or_rate", "u_inf"};
    for (double dl : parse_grid(a.delta_grid))
      for (double g : parse_grid(a.gamma_grid)) {
        dce::DampedOscParams par{a.kappa, dl, g, a.estar};
        dce::StabilityResult r = dce::stability_classify(par);
        t.rows.push_back({dl, g, r.stable ? 1.0 : 0.0, r.stable ? r.E_inf : r.growth_rate,
                          r.stable ? r.u_inf : r.u_inf_unstable});
      }
  } else {
    std::vector<double> s0 = parse_grid(a.sigma0);
    if (s0.size() != 3) throw CLI::ValidationError("sigma0", "need sigma_qq,sigma_pq,sigma_pp");
    dce::DampedOscParams par{a.kappa, a.delta, a.gamma, a.estar};
    t.add_meta("kappa", a.kappa);
    t.add_meta("delta", a.delta);
    t.add_meta("gamma", a.gamma);
    t.add_meta("estar", a.estar);
    t.add_meta("method", a.method);
    t.columns = {"t", "sigma_qq", "sigma_pq", "sigma_pp", "E", "d", "u"};
    for (double tt : parse_grid(a.t_grid)) {
      dce::DampedOscState s = dce::damped_moments_evolve(par, {s0[0], s0[1], s0[2]}, tt, a.method == "direct");
      t.rows.push_back({tt, s.sigma_qq, s.sigma_pq, s.sigma_pp, s.E, s.d, s.u});
    }
  }
  emit(t, a.out.output, a.out.format);
  std::cout << "damped -> " << a.out.output << "\n";
  return 0;
}

// -------------------------------------------------------------------- estimate
struct EstimateArgs {
  double freq_ghz = 10.0, vs = 5e3, deltamax = 1e-2;
  CommonOut out;
};

int cmd_estimate(const EstimateArgs& a) {
  double f1 = a.freq_ghz * 1e9;
  double rate = dce::lab_photon_rate(f1, a.vs, 2.99792458e8, a.deltamax);
  dce::Table t;
  stamp(t, "estimate");
  t.add_meta("freq_ghz", a.freq_ghz);
  t.add_meta("v_sound", a.vs);
  t.add_meta("delta_max", a.deltamax);
  t.columns = {"freq_hz", "photons_per_second"};
  t.rows.push_back({f1, rate});
  emit(t, a.out.output, a.out.format);
  std::cout << "estimated max photon rate: " << rate << " photons/s\n";
  return 0;
}

// ----------------------------------------------------------------------- sweep
struct SweepArgs {
  std::string command = "stats";
  std::vector<std::string> grids;  // e.g. "gamma=0:0.25:1"
  std::vector<std::string> fixed;  // passthrough flags, e.g. "--p=2"
  int jobs = 1;
  std::string output_dir = "sweep_out";
  std::string format = "csv";
};

int run_subcommand(const std::string& name, const std::vector<std::string>& argv_tail);

int cmd_sweep(const SweepArgs& a) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  for (const auto& gspec : a.grids) {
    auto eq = gspec.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("grid", "expected name=lo:step:hi: " + gspec);
    names.push_back(gspec.substr(0, eq));
    values.push_back(parse_grid(gspec.substr(eq + 1)));
  }
  if (names.empty()) throw CLI::ValidationError("grid", "sweep needs at least one --grid");
  std::filesystem::create_directories(a.output_dir);
  std::vector<std::size_t> idx(names.size(), 0);
  std::vector<std::vector<std::string>> pointargs;
  std::vector<std::string> pointfiles;
  bool done = false;
  while (!done) {
    std::vector<std::string> args;
    for (const auto& kv : a.fixed) args.push_back("--" + kv);
    std::string tag;
    for (std::size_t i = 0; i < names.size(); ++i) {
      args.push_back("--" + names[i] + "=" + dce::format_g17(values[i][idx[i]]));
      tag += (i ? "_" : "") + names[i] + std::to_string(idx[i]);
    }
    std::string file = a.output_dir + "/" + a.command + "_" + tag + "." + a.format;
    args.push_back("--output=" + file);
    args.push_back("--format=" + a.format);
    pointargs.push_back(args);
    pointfiles.push_back(file);
    for (std::size_t i = 0;; ++i) {
      if (i == names.size()) {
        done = true;
        break;
      }
      if (++idx[i] < values[i].size()) break;
      idx[i] = 0;
    }
  }
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= pointargs.size()) return;
      try {
        if (run_subcommand(a.command, pointargs[i]) != 0) ++failures;
      } catch (...) {
        ++failures;
      }
    }
  };
  int jobs = std::max(1, a.jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  // manifest
  dce::Table man;
  stamp(man, "sweep");
  man.add_meta("command", a.command);
  man.add_meta("points", static_cast<double>(pointfiles.size()));
  for (std::size_t i = 0; i < pointfiles.size(); ++i) man.add_meta("file_" + std::to_string(i), pointfiles[i]);
  man.columns = {"index"};
  for (std::size_t i = 0; i < pointfiles.size(); ++i) man.rows.push_back({static_cast<double>(i)});
  dce::write_json(a.output_dir + "/manifest.json", man);
  std::cout << "sweep: " << pointfiles.size() << " points, " << failures.load() << " failures\n";
  return failures.load() ? 1 : 0;
}

// ------------------------------------------------------------------ dispatcher

void attach_args(CLI::App& app, EvolveArgs& a);
void attach_args(CLI::App& app, StatsArgs& a);
void attach_args(CLI::App& app, DensityArgs& a);
void attach_args(CLI::App& app, MooreArgs& a);
void attach_args(CLI::App& app, Cavity3dArgs& a);
void attach_args(CLI::App& app, DampedArgs& a);
void attach_args(CLI::App& app, EstimateArgs& a);

// Flat key-value config with [command] sections. Explicit flags win; config
// values are appended only for options not already present on the line.
std::vector<std::string> merge_config(const std::string& name, std::vector<std::string> tail) {
  std::string cfg;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (tail[i] == "--config" && i + 1 < tail.size()) {
      cfg = tail[i + 1];
      tail.erase(tail.begin() + i, tail.begin() + i + 2);
      break;
    }
    if (tail[i].rfind("--config=", 0) == 0) {
      cfg = tail[i].substr(9);
      tail.erase(tail.begin() + i);
      break;
    }
  }
  if (cfg.empty()) return tail;
  std::ifstream f(cfg);
  if (!f) throw CLI::ValidationError("config", "cannot open config file: " + cfg);
  std::string line, section;
  std::vector<std::string> extra;
  while (std::getline(f, line)) {
    auto l = line.find_first_not_of(" \t");
    if (l == std::string::npos || line[l] == '#' || line[l] == ';') continue;
    line = line.substr(l);
    if (line.front() == '[') {
      auto r = line.find(']');
      section = line.substr(1, r == std::string::npos ? std::string::npos : r - 1);
      continue;
    }
    if (section != name) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
    };
    trim(key);
    trim(val);
    bool present = false;
    for (const auto& t : tail)
      if (t == "--" + key || t.rfind("--" + key + "=", 0) == 0) present = true;
    if (!present) extra.push_back("--" + key + "=" + val);
  }
  tail.insert(tail.end(), extra.begin(), extra.end());
  return tail;
}

template <class Args, class Fn>
int parse_and_run(const std::string& name, const std::vector<std::string>& tail_in, Fn&& fn) {
  CLI::App app{name};
  Args a;
  attach_args(app, a);
  std::vector<std::string> tail = merge_config(name, tail_in);
  std::vector<std::string> rev(tail.rbegin(), tail.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return 2;
  }
  return fn(a);
}

void attach_args(CLI::App& app, EvolveArgs& a) {
  app.add_option("--p", a.p);
  app.add_option("--gamma", a.gamma);
  app.add_option("--tau", a.tau);
  app.add_option("--modes", a.modes);
  app.add_option("--columns", a.columns);
  app.add_option("--tol", a.tol);
  a.out.attach(&app);
}
void attach_args(CLI::App& app, StatsArgs& a) {
  app.add_option("--p", a.p);
  app.add_option("--gamma", a.gamma);
  app.add_option("--tau-grid", a.tau_grid);
  app.add_option("--mode", a.mode);
  app.add_option("--state", a.state);
  app.add_option("--method", a.method)->check(CLI::IsMember({"closed", "ode"}));
  app.add_option("--modes", a.modes);
  app.add_flag("--estimate-lab-rate", a.estimate_lab_rate);
  app.add_option("--freq-ghz", a.freq_ghz);
  a.out.attach(&app);
}
void attach_args(CLI::App& app, DensityArgs& a) {
  app.add_option("--p", a.p);
  app.add_option("--gamma", a.gamma);
  app.add_option("--tau", a.tau);
  app.add_option("--t", a.t);
  app.add_option("--grid", a.grid);
  app.add_flag("--refine,!--no-refine", a.refine, "peak-refined grid (default on)");
  app.add_option("--state", a.state);
  a.out.attach(&app);
}
void attach_args(CLI::App& app, MooreArgs& a) {
  app.add_option("--law", a.law);
  app.add_option("--representation", a.representation);
  app.add_option("--L0", a.L0);
  app.add_option("--t-grid", a.t_grid);
  a.out.attach(&app);
}
void attach_args(CLI::App& app, Cavity3dArgs& a) {
  app.add_option("--what", a.what);
  app.add_option("--eps", a.eps);
  app.add_option("--omega0", a.omega0);
  app.add_option("--mu", a.mu);
  app.add_option("--phi", a.phi);
  app.add_option("--Omega", a.Omega);
  app.add_option("--kappa-c", a.kappa_c);
  app.add_option("--t-grid", a.t_grid);
  app.add_option("--method", a.method);
  a.out.attach(&app);
}
void attach_args(CLI::App& app, DampedArgs& a) {
  app.add_option("--kappa", a.kappa);
  app.add_option("--delta", a.delta);
  app.add_option("--gamma", a.gamma);
  app.add_option("--estar", a.estar);
  app.add_option("--sigma0", a.sigma0);
  app.add_option("--t-grid", a.t_grid);
  app.add_option("--method", a.method);
  app.add_flag("--map", a.map);
  app.add_option("--delta-grid", a.delta_grid);
  app.add_option("--gamma-grid", a.gamma_grid);
  a.out.attach(&app);
}
void attach_args(CLI::App& app, EstimateArgs& a) {
  app.add_option("--freq-ghz", a.freq_ghz);
  app.add_option("--vs", a.vs);
  app.add_option("--deltamax", a.deltamax);
  a.out.attach(&app);
}

int run_subcommand(const std::string& name, const std::vector<std::string>& tail) {
  if (name == "evolve") return parse_and_run<EvolveArgs>(name, tail, cmd_evolve);
  if (name == "stats") return parse_and_run<StatsArgs>(name, tail, cmd_stats);
  if (name == "density") return parse_and_run<DensityArgs>(name, tail, cmd_density);
  if (name == "moore") return parse_and_run<MooreArgs>(name, tail, cmd_moore);
  if (name == "cavity3d") return parse_and_run<Cavity3dArgs>(name, tail, cmd_cavity3d);
  if (name == "damped") return parse_and_run<DampedArgs>(name, tail, cmd_damped);
  if (name == "estimate") return parse_and_run<EstimateArgs>(name, tail, cmd_estimate);
  std::cerr << "unknown command: " << name << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream echo;
  for (int i = 0; i < argc; ++i) echo << (i ? " " : "") << argv[i];
  g_echo = echo.str();

  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << "usage: dce <evolve|stats|density|moore|cavity3d|damped|sweep|estimate> [options]\n";
    return 2;
  }
  std::string cmd = args.front();
  std::vector<std::string> tail(args.begin() + 1, args.end());

  try {
    if (cmd == "sweep") {
      CLI::App sub{"sweep"};
      SweepArgs a;
      sub.add_option("--command", a.command);
      sub.add_option("--grid", a.grids)->take_all();
      sub.add_option("--fixed", a.fixed, "fixed key=value passed to every point")->take_all();
      sub.add_option("--jobs", a.jobs);
      sub.add_option("--output-dir", a.output_dir);
      sub.add_option("--format", a.format);
      std::vector<std::string> rev(tail.rbegin(), tail.rend());
      try {
        sub.parse(rev);
      } catch (const CLI::ParseError& e) {
        std::cerr << "sweep: " << e.what() << "\n";
        return 2;
      }
      return cmd_sweep(a);
    }
    return run_subcommand(cmd, tail);
  } catch (const dce::convergence_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
