#include "corevac/solver.hpp"

#include <cmath>
#include <numbers>

#include "corevac/diagnostics.hpp"

namespace corevac {

namespace {

constexpr double kJacobianFloor = 0.1;
constexpr double kCellRatioCap = 1.3;

}  // namespace

void enforce_closure(const SpatialScheme& scheme, std::span<double> field) {
  for (size_t k = 0; k < scheme.closure.size(); ++k) {
    double v = 0.0;
    for (int a = 0; a < 5; ++a)
      v += scheme.closure[k][a] * field[scheme.closure_src + a];
    field[scheme.last_evolved + 1 + k] = v;
  }
}

std::shared_ptr<const SpatialScheme> make_spatial_scheme(
    const EquilibriumProfile& profile, const Grid& grid,
    const std::vector<double>* enclosed_mass) {
  const auto& nodes = grid.nodes;
  const int n = static_cast<int>(nodes.size());
  auto scheme = std::make_shared<SpatialScheme>();
  const double a_const = profile.params.pressure_const;
  const double g0 = profile.params.core_gravity;
  const double four_pi_g = 4.0 * std::numbers::pi * profile.params.self_gravity_const;

  scheme->press_coef.resize(n);
  scheme->grav_coef.resize(n);
  for (int i = 0; i < n; ++i) {
    const double yi = nodes[i];
    double geff = g0;
    if (enclosed_mass) geff += four_pi_g * (*enclosed_mass)[i];
    scheme->press_coef[i] = a_const * profile.sigma(yi) / yi;
    scheme->grav_coef[i] = geff / (yi * yi * yi);
  }

  scheme->d2.resize(n);
  for (int i = 0; i < n; ++i) {
    scheme->d2[i].w.fill(0.0);
    const bool centered = i >= 2 && i <= n - 3;
    const int npts = centered ? 5 : 6;
    const int first = centered ? i - 2 : std::max(0, std::min(i - 2, n - 6));
    // The stored window is always 6 wide and in range; a centered 5-point
    // stencil sits inside it at the appropriate offset.
    const int start = std::min(first, n - 6);
    const auto w = fornberg_weights(
        nodes[i], std::span<const double>(nodes.data() + first, npts), 2);
    scheme->d2[i].start = start;
    for (int a = 0; a < npts; ++a) scheme->d2[i].w[first - start + a] = w[a];
  }

  // One-sided wide stencils are unstable where consecutive cell sizes change
  // too fast (strong grading toward the vacuum end). Walk inward from the
  // boundary until the adjacent-cell ratio drops under the cap and close
  // everything beyond that node by degree-4 extrapolation.
  int k = 1;
  while (k < (n - 1) / 4) {
    const double inner = nodes[n - 1 - k] - nodes[n - 2 - k];
    const double outer = nodes[n - k] - nodes[n - 1 - k];
    if (inner <= kCellRatioCap * outer) break;
    ++k;
  }
  scheme->last_evolved = n - 1 - k;
  scheme->closure_src = std::max(0, scheme->last_evolved - 4);
  scheme->closure.resize(k);
  for (int c = 0; c < k; ++c) {
    const auto w = fornberg_weights(
        nodes[scheme->last_evolved + 1 + c],
        std::span<const double>(nodes.data() + scheme->closure_src, 5), 0);
    for (int a = 0; a < 5; ++a) scheme->closure[c][a] = w[a];
  }
  return scheme;
}

SimState make_equilibrium_state(std::shared_ptr<const EquilibriumProfile> profile,
                                std::shared_ptr<const Grid> grid,
                                bool gravity_enabled) {
  SimState s;
  s.profile = std::move(profile);
  s.grid = std::move(grid);
  s.diff = std::make_shared<DiffOp>(s.grid->nodes);
  s.zeta.assign(s.grid->nodes.size(), 0.0);
  s.zeta_t.assign(s.grid->nodes.size(), 0.0);
  s.gravity_enabled = gravity_enabled;
  if (gravity_enabled) {
    std::vector<double> integrand(s.grid->nodes.size());
    for (size_t i = 0; i < integrand.size(); ++i) {
      const double y = s.grid->nodes[i];
      integrand[i] = s.profile->density(y) * y * y;
    }
    s.enclosed_mass = std::make_shared<std::vector<double>>(
        cumulative_integral(s.grid->nodes, integrand));
  }

  s.scheme = make_spatial_scheme(
      *s.profile, *s.grid,
      gravity_enabled && s.enclosed_mass ? s.enclosed_mass.get() : nullptr);
  return s;
}

SimState apply_perturbation(const SimState& state, const PerturbationFamily& family) {
  if (std::abs(family.amplitude) > 0.05)
    throw AmplitudeTooLarge("perturbation amplitude above 0.05");
  SimState out = state;
  const double r0 = state.profile->params.core_radius;
  const double R = state.profile->outer_radius;
  auto& target =
      family.kind == PerturbationFamily::Kind::displacement ? out.zeta : out.zeta_t;
  for (size_t k = 0; k < state.grid->nodes.size(); ++k) {
    const double y = state.grid->nodes[k];
    target[k] += family.amplitude *
                 std::sin(family.mode * std::numbers::pi * (y - r0) / (2.0 * (R - r0)));
  }
  out.zeta[0] = 0.0;
  out.zeta_t[0] = 0.0;
  enforce_closure(*out.scheme, out.zeta);
  enforce_closure(*out.scheme, out.zeta_t);
  return out;
}

std::vector<double> spatial_rhs(const SimState& state, std::span<const double> zeta) {
  const auto& y = state.grid->nodes;
  const int n = static_cast<int>(y.size());
  const SpatialScheme& sc = *state.scheme;
  const double gamma = state.profile->params.gamma;

  const std::vector<double> zy = state.diff->apply(zeta);
  std::vector<double> rhs(n, 0.0);
  for (int i = 1; i <= sc.last_evolved; ++i) {
    const double q = 1.0 + zeta[i];
    const double jac = q + y[i] * zy[i];
    if (!(q > kJacobianFloor) || !(jac > kJacobianFloor))
      throw JacobianDegenerate("flow map Jacobian at or below floor");
    double zyy = 0.0;
    const SpatialScheme::D2Row& r2 = sc.d2[i];
    for (int a = 0; a < 6; ++a) zyy += r2.w[a] * zeta[r2.start + a];

    // G_y by the chain rule, so only nodal zeta_y and zeta_yy enter.
    const double qm2g = std::pow(q, -2.0 * gamma);
    const double jmg = std::pow(jac, -gamma);
    const double gy = -2.0 * gamma * qm2g / q * jmg * zy[i] -
                      gamma * qm2g * jmg / jac * (2.0 * zy[i] + y[i] * zyy);
    const double bracket = qm2g * q * q * jmg - 1.0 / (q * q);
    rhs[i] = -sc.press_coef[i] * q * q * gy + sc.grav_coef[i] * bracket;
  }
  enforce_closure(sc, rhs);
  return rhs;
}

std::vector<double> acceleration(const SimState& state) {
  std::vector<double> a = spatial_rhs(state, state.zeta);
  for (size_t i = 1; i < a.size(); ++i) a[i] -= state.zeta_t[i];
  a[0] = 0.0;
  return a;
}

double stable_dt(const SimState& state, double cfl) {
  const auto& y = state.grid->nodes;
  const int n = static_cast<int>(y.size());
  const double gamma = state.profile->params.gamma;
  const double a_const = state.profile->params.pressure_const;
  const double k_sigma = state.profile->sigma_coeff();
  const double R = state.profile->outer_radius;
  const double c_floor =
      1e-8 * std::sqrt(gamma * a_const * state.profile->sigma(y[0]));

  std::vector<double> zy = state.diff->apply(state.zeta);
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    const double sigma = k_sigma * std::max(0.0, 1.0 / y[i] - 1.0 / R);
    const double q = 1.0 + state.zeta[i];
    const double jac = q + y[i] * zy[i];
    const double vol = std::max(q * q * jac, 1e-12);
    c[i] = std::sqrt(gamma * a_const * sigma) * std::pow(vol, -(gamma - 1.0) / 2.0);
  }
  double dt = 0.1;  // cap: a tenth of a damping time
  for (int i = 0; i < state.scheme->last_evolved; ++i) {
    const double speed = std::max({c[i], c[i + 1], c_floor});
    dt = std::min(dt, cfl * (y[i + 1] - y[i]) / speed);
  }
  return dt;
}

namespace {

SimState step_impl(const SimState& state, double dt, const SpatialRhs& rhs) {
  const int n = state.n_nodes();
  const double eh = std::exp(-0.5 * dt);   // e^{-dt/2}
  const double ehi = 1.0 / eh;             // e^{+dt/2}
  const double ef = eh * eh;               // e^{-dt}
  const double efi = 1.0 / ef;

  const std::vector<double>& z0 = state.zeta;
  const std::vector<double>& w0 = state.zeta_t;  // w = e^{s} v, s = 0 at step start

  auto axpy = [n](const std::vector<double>& a, double c, const std::vector<double>& b) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = a[i] + c * b[i];
    return r;
  };

  // Stage 1 (s = 0)
  const std::vector<double>& dz1 = w0;
  std::vector<double> dw1 = rhs(state, z0);

  // Stage 2 (s = dt/2)
  std::vector<double> za = axpy(z0, 0.5 * dt, dz1);
  enforce_closure(*state.scheme, za);
  std::vector<double> wa = axpy(w0, 0.5 * dt, dw1);
  std::vector<double> dz2(n), dw2(n);
  {
    std::vector<double> f = rhs(state, za);
    for (int i = 0; i < n; ++i) {
      dz2[i] = eh * wa[i];
      dw2[i] = ehi * f[i];
    }
  }

  // Stage 3 (s = dt/2)
  std::vector<double> zb = axpy(z0, 0.5 * dt, dz2);
  enforce_closure(*state.scheme, zb);
  std::vector<double> wb = axpy(w0, 0.5 * dt, dw2);
  std::vector<double> dz3(n), dw3(n);
  {
    std::vector<double> f = rhs(state, zb);
    for (int i = 0; i < n; ++i) {
      dz3[i] = eh * wb[i];
      dw3[i] = ehi * f[i];
    }
  }

  // Stage 4 (s = dt)
  std::vector<double> zc = axpy(z0, dt, dz3);
  enforce_closure(*state.scheme, zc);
  std::vector<double> wc = axpy(w0, dt, dw3);
  std::vector<double> dz4(n), dw4(n);
  {
    std::vector<double> f = rhs(state, zc);
    for (int i = 0; i < n; ++i) {
      dz4[i] = ef * wc[i];
      dw4[i] = efi * f[i];
    }
  }

  SimState out = state;
  const double c = dt / 6.0;
  for (int i = 0; i < n; ++i) {
    out.zeta[i] = z0[i] + c * (dz1[i] + 2.0 * dz2[i] + 2.0 * dz3[i] + dz4[i]);
    const double w1 = w0[i] + c * (dw1[i] + 2.0 * dw2[i] + 2.0 * dw3[i] + dw4[i]);
    out.zeta_t[i] = ef * w1;
  }
  out.zeta[0] = 0.0;
  out.zeta_t[0] = 0.0;
  enforce_closure(*state.scheme, out.zeta);
  enforce_closure(*state.scheme, out.zeta_t);
  out.time = state.time + dt;
  return out;
}

}  // namespace

SimState step(const SimState& state, double dt) {
  if (dt > stable_dt(state, 1.0) * (1.0 + 1e-9))
    throw CflViolation("dt exceeds the stability bound");
  return step_impl(state, dt, [](const SimState& s, std::span<const double> z) {
    return spatial_rhs(s, z);
  });
}

SimState step_with_rhs(const SimState& state, double dt, const SpatialRhs& rhs) {
  return step_impl(state, dt, rhs);
}

Trajectory evolve(const SimState& state, double t_end, double snapshot_every,
                  double cfl) {
  if (!(t_end > state.time)) throw ValidationError("t_end must exceed current time");
  Trajectory traj;
  SimState cur = state;
  auto record = [&traj](const SimState& s) {
    traj.snapshot_times.push_back(s.time);
    traj.states.push_back(s);
    traj.reports.push_back(energy_report(s));
  };
  record(cur);

  const double t0 = state.time;
  long next_snap = 1;
  while (cur.time < t_end - 1e-12) {
    const double t_snap = t0 + next_snap * snapshot_every;
    const double t_target = std::min(t_snap, t_end);
    double dt = std::min(stable_dt(cur, cfl), t_target - cur.time);
    try {
      cur = step(cur, dt);
    } catch (const JacobianDegenerate& e) {
      throw JacobianDegenerate(std::string(e.what()) + " at t = " +
                               std::to_string(cur.time));
    }
    if (cur.time >= t_snap - 1e-9) {
      record(cur);
      ++next_snap;
    }
  }
  return traj;
}

}  // namespace corevac
