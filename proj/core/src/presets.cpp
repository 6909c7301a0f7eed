#include "corevac/presets.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace corevac {

namespace {

Assertion check(const std::string& name, double measured, double threshold,
                const std::string& cmp) {
  bool pass = false;
  if (cmp == "<=")
    pass = measured <= threshold;
  else if (cmp == ">=")
    pass = measured >= threshold;
  else if (cmp == ">")
    pass = measured > threshold;
  else if (cmp == "<")
    pass = measured < threshold;
  return Assertion{name, measured, threshold, cmp, pass};
}

SnapshotRow make_row(const SimState& state, const EnergyReport& rep) {
  SnapshotRow row{};
  row.t = state.time;
  row.e0 = rep.e_j[0];
  row.e1 = rep.e_j[1];
  row.e2 = rep.e_j[2];
  row.e01 = rep.e01();
  row.e_total = rep.total;
  row.d0 = rep.d_j[0];
  double mz = 0.0, mu = 0.0;
  for (int i = 0; i < state.n_nodes(); ++i) {
    mz = std::max(mz, std::abs(state.zeta[i]));
    mu = std::max(mu, std::abs(state.grid->nodes[i] * state.zeta_t[i]));
  }
  row.max_zeta = mz;
  row.max_u = mu;
  const EulerianFields fields = eulerian_reconstruct(state);
  row.r_t = fields.boundary_radius;
  row.mass = eulerian_total_mass(fields);
  row.vacuum_slope = vacuum_slope(state);
  return row;
}

SimState initial_state(const ScenarioConfig& cfg,
                       const std::shared_ptr<const EquilibriumProfile>& profile) {
  auto grid = std::make_shared<const Grid>(
      build_grid(*profile, cfg.n_cells, cfg.grading_power));
  SimState state =
      make_equilibrium_state(profile, grid, cfg.gas.self_gravity_const > 0.0);
  if (cfg.perturbation.amplitude != 0.0)
    state = apply_perturbation(state, cfg.perturbation);
  return state;
}

void run_stationarity(const ScenarioConfig& cfg, RunReport& report) {
  auto profile = std::make_shared<const EquilibriumProfile>(cfg.make_profile());
  ScenarioConfig quiet = cfg;
  quiet.perturbation.amplitude = 0.0;
  const SimState state = initial_state(quiet, profile);
  const Trajectory traj = evolve(state, cfg.t_end, cfg.snapshot_every, cfg.cfl);
  report.rows = snapshot_rows(traj);
  double worst_zeta = 0.0, worst_e = 0.0;
  for (const SnapshotRow& row : report.rows) {
    worst_zeta = std::max(worst_zeta, row.max_zeta);
    worst_e = std::max(worst_e, row.e_total);
  }
  report.assertions.push_back(check("max_zeta", worst_zeta, 1e-10, "<="));
  report.assertions.push_back(check("max_total_energy", worst_e, 1e-18, "<="));
}

void run_decay(const ScenarioConfig& cfg, RunReport& report) {
  auto profile = std::make_shared<const EquilibriumProfile>(cfg.make_profile());
  const SimState state = initial_state(cfg, profile);
  const Trajectory traj = evolve(state, cfg.t_end, cfg.snapshot_every, cfg.cfl);
  report.rows = snapshot_rows(traj);

  std::vector<double> ts, es;
  for (const SnapshotRow& row : report.rows) {
    ts.push_back(row.t);
    es.push_back(row.e_total);
  }
  const DecayFit fit = fit_decay_rate(ts, es, cfg.fit_t_lo, cfg.fit_t_hi);
  report.energy_fit = fit;
  report.assertions.push_back(check("delta_hat", fit.delta_hat, 0.0, ">"));
  report.assertions.push_back(check("fit_r_squared", fit.r_squared, 0.99, ">="));

  // Endpoint consistency: E(t_hi)/E(t_lo) against e^{-delta (t_hi - t_lo)}.
  auto energy_at = [&](double t_want) {
    size_t best = 0;
    for (size_t i = 0; i < ts.size(); ++i)
      if (std::abs(ts[i] - t_want) < std::abs(ts[best] - t_want)) best = i;
    return es[best];
  };
  const double ratio = energy_at(cfg.fit_t_hi) / energy_at(cfg.fit_t_lo);
  const double expected = std::exp(-fit.delta_hat * (cfg.fit_t_hi - cfg.fit_t_lo));
  report.assertions.push_back(check("endpoint_ratio_lo", ratio / expected, 0.8, ">="));
  report.assertions.push_back(check("endpoint_ratio_hi", ratio / expected, 1.2, "<="));

  // Mass conservation along the run.
  const double mass0 = report.rows.front().mass;
  double drift = 0.0;
  for (const SnapshotRow& row : report.rows)
    drift = std::max(drift, std::abs(row.mass - mass0) / mass0);
  report.assertions.push_back(check("mass_drift", drift, 1e-6, "<="));

  // Physical vacuum persistence.
  const double slope_scale =
      profile->sigma_coeff() / (profile->outer_radius * profile->outer_radius);
  double slope_lo = 0.0, slope_hi = -1e300;
  for (const SnapshotRow& row : report.rows) {
    slope_lo = std::min(slope_lo, row.vacuum_slope);
    slope_hi = std::max(slope_hi, row.vacuum_slope);
  }
  report.assertions.push_back(check("vacuum_slope_min", slope_lo, -10.0 * slope_scale, ">="));
  report.assertions.push_back(check("vacuum_slope_max", slope_hi, -0.1 * slope_scale, "<="));

  const PointwiseDecay pw = pointwise_decay_check(traj, cfg.fit_t_lo, cfg.fit_t_hi);
  report.velocity_fit = pw.velocity_fit;
  report.boundary_fit = pw.boundary_fit;
  if (!pw.velocity_fit.zero_series) {
    report.assertions.push_back(
        check("velocity_delta", pw.velocity_fit.delta_hat, 0.0, ">"));
    report.assertions.push_back(
        check("velocity_r_squared", pw.velocity_fit.r_squared, 0.95, ">="));
    report.assertions.push_back(
        check("boundary_delta", pw.boundary_fit.delta_hat, 0.0, ">"));
    report.assertions.push_back(
        check("boundary_r_squared", pw.boundary_fit.r_squared, 0.95, ">="));
    const double rel =
        std::abs(pw.boundary_fit.delta_hat - 0.5 * fit.delta_hat) / (0.5 * fit.delta_hat);
    report.assertions.push_back(check("boundary_rate_vs_half_delta", rel, 0.30, "<="));
  }
}

void run_spectrum(const ScenarioConfig& cfg, RunReport& report) {
  const EquilibriumProfile profile = cfg.make_profile();
  const SpectrumResult result =
      compute_spectrum(profile, cfg.n_cells, cfg.grading_power, 10);
  report.spectrum = result;
  double mu_min = 1e300;
  for (const Mode& mode : result.modes) mu_min = std::min(mu_min, mode.mu);
  report.assertions.push_back(check("mu_min", mu_min, 0.0, ">"));
}

void run_window_sweep(const ScenarioConfig& cfg, RunReport& report, int jobs) {
  struct Case {
    double gamma, radius;
    double mu_min = 0.0;
  };
  std::vector<Case> cases;
  const double r0 = cfg.gas.core_radius;
  for (double gamma : {1.4, 5.0 / 3.0, 2.0}) {
    const double alpha = 1.0 / (gamma - 1.0);
    const double upper = 4.0 * r0 / (3.0 - alpha);
    for (double f : {0.4, 0.7, 1.0})
      cases.push_back({gamma, r0 + f * (upper - r0)});
  }

  auto run_case = [&](Case& c) {
    GasParameters gas = cfg.gas;
    gas.gamma = c.gamma;
    const EquilibriumProfile profile = EquilibriumProfile::from_radius(gas, c.radius);
    const SpectrumResult result =
        compute_spectrum(profile, cfg.n_cells, cfg.grading_power, 5);
    c.mu_min = 1e300;
    for (const Mode& mode : result.modes) c.mu_min = std::min(c.mu_min, mode.mu);
  };

  if (jobs <= 1) {
    for (Case& c : cases) run_case(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (size_t i = next++; i < cases.size(); i = next++) run_case(cases[i]);
      });
    for (std::thread& th : pool) th.join();
  }

  for (const Case& c : cases) {
    char name[64];
    std::snprintf(name, sizeof(name), "mu_min_gamma_%.4g_R_%.6g", c.gamma, c.radius);
    report.assertions.push_back(check(name, c.mu_min, 0.0, ">"));
  }
}

void run_poisson(const ScenarioConfig& cfg, RunReport& report) {
  const EquilibriumProfile closed = cfg.make_profile();
  double rho_c = cfg.poisson_central_density;
  if (rho_c == 0.0) rho_c = closed.density(cfg.gas.core_radius);
  const PoissonEquilibriumProfile poisson =
      solve_poisson_equilibrium(cfg.gas, rho_c, cfg.poisson_radius_cap);
  report.assertions.push_back(check("ode_residual", poisson.max_residual, 1e-8, "<="));
  const double g = cfg.gas.gamma;
  const double qc = std::pow(rho_c, g - 1.0);
  const double sig = closed.sigma_coeff();
  const double inv_r = 1.0 / cfg.gas.core_radius - qc / sig;
  if (cfg.gas.self_gravity_const <= 1e-4 && inv_r > 0.0) {
    const double r_closed = 1.0 / inv_r;
    const double rel = std::abs(poisson.first_zero_radius - r_closed) / r_closed;
    report.assertions.push_back(check("radius_vs_closed_form", rel, 1e-4, "<="));
  }
}

void run_hardy(const ScenarioConfig& cfg, RunReport& report) {
  const EquilibriumProfile profile = cfg.make_profile();
  const Grid grid = build_grid(profile, cfg.n_cells, cfg.grading_power);
  const Grid fine = build_grid(profile, 2 * cfg.n_cells, cfg.grading_power);
  const double R = profile.outer_radius;
  const double sig = profile.sigma_coeff();

  struct Family {
    const char* name;
    std::function<double(double)> f, fy;
  };
  const Family families[] = {
      {"one", [](double) { return 1.0; }, [](double) { return 0.0; }},
      {"sigma", [&, sig](double y) { return profile.sigma(y); },
       [sig](double y) { return -sig / (y * y); }},
      {"dist_sq", [R](double y) { return (R - y) * (R - y); },
       [R](double y) { return -2.0 * (R - y); }},
  };
  for (double k : {1.5, 2.0, 3.0}) {
    for (const Family& fam : families) {
      const HardyResult coarse = hardy_check(profile, grid, k, fam.f, fam.fy);
      const HardyResult refined = hardy_check(profile, fine, k, fam.f, fam.fy);
      char name[64];
      std::snprintf(name, sizeof(name), "hardy_k_%.2g_%s", k, fam.name);
      const double change =
          coarse.ratio > 0.0 ? std::abs(refined.ratio - coarse.ratio) / coarse.ratio : 0.0;
      report.assertions.push_back(
          check(std::string(name) + "_finite", std::isfinite(coarse.ratio) ? 0.0 : 1.0,
                0.5, "<="));
      report.assertions.push_back(check(std::string(name) + "_mesh_change", change, 0.05, "<="));
    }
  }
}

}  // namespace

bool RunReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.pass; });
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["config"] = serialize_config(config);
  j["passed"] = passed();
  j["wall_seconds"] = wall_seconds;
  j["assertions"] = nlohmann::json::array();
  for (const Assertion& a : assertions) {
    j["assertions"].push_back({{"name", a.name},
                               {"measured", a.measured},
                               {"threshold", a.threshold},
                               {"cmp", a.cmp},
                               {"pass", a.pass}});
  }
  auto fit_json = [](const DecayFit& f) {
    return nlohmann::json{{"delta_hat", f.delta_hat},
                          {"intercept", f.intercept},
                          {"r_squared", f.r_squared},
                          {"t_lo", f.t_lo},
                          {"t_hi", f.t_hi},
                          {"zero_series", f.zero_series}};
  };
  if (energy_fit) j["energy_fit"] = fit_json(*energy_fit);
  if (velocity_fit) j["velocity_fit"] = fit_json(*velocity_fit);
  if (boundary_fit) j["boundary_fit"] = fit_json(*boundary_fit);
  if (spectrum) {
    nlohmann::json s;
    s["predicted_delta"] = spectrum->predicted_delta;
    s["n_modes"] = spectrum->n_modes;
    s["modes"] = nlohmann::json::array();
    for (const Mode& mode : spectrum->modes) {
      s["modes"].push_back({{"mu", mode.mu},
                            {"lambda_plus_re", mode.lambda_plus.real()},
                            {"lambda_plus_im", mode.lambda_plus.imag()},
                            {"lambda_minus_re", mode.lambda_minus.real()},
                            {"lambda_minus_im", mode.lambda_minus.imag()},
                            {"residual", mode.residual}});
    }
    j["spectrum"] = s;
  }
  j["n_snapshots"] = rows.size();
  return j;
}

std::vector<std::string> preset_names() {
  return {"stationarity", "decay", "spectrum", "window-sweep", "poisson-equilibrium",
          "hardy"};
}

std::vector<SnapshotRow> snapshot_rows(const Trajectory& trajectory) {
  std::vector<SnapshotRow> rows;
  rows.reserve(trajectory.states.size());
  for (size_t i = 0; i < trajectory.states.size(); ++i)
    rows.push_back(make_row(trajectory.states[i], trajectory.reports[i]));
  return rows;
}

RunReport run_preset(const ScenarioConfig& cfg, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg;
  if (cfg.preset == "stationarity")
    run_stationarity(cfg, report);
  else if (cfg.preset == "decay")
    run_decay(cfg, report);
  else if (cfg.preset == "spectrum")
    run_spectrum(cfg, report);
  else if (cfg.preset == "window-sweep")
    run_window_sweep(cfg, report, jobs);
  else if (cfg.preset == "poisson-equilibrium")
    run_poisson(cfg, report);
  else if (cfg.preset == "hardy")
    run_hardy(cfg, report);
  else
    throw UnknownPreset("unknown preset '" + cfg.preset + "'");
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

void emit_csv(const RunReport& report, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw IoError("cannot open " + path.string());
  std::fputs("t,E0,E1,E2,E01,E_total,D0,max_zeta,max_u,R_t,mass,vacuum_slope\n", f);
  for (const SnapshotRow& r : report.rows) {
    std::fprintf(f,
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g\n",
                 r.t, r.e0, r.e1, r.e2, r.e01, r.e_total, r.d0, r.max_zeta, r.max_u,
                 r.r_t, r.mass, r.vacuum_slope);
  }
  std::fclose(f);
}

void emit_json(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << report.to_json().dump(2) << "\n";
}

}  // namespace corevac
