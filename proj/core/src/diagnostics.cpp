#include "corevac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace corevac {

namespace {

std::vector<double> sigma_at_nodes(const SimState& state) {
  const auto& y = state.grid->nodes;
  const double k = state.profile->sigma_coeff();
  const double R = state.profile->outer_radius;
  std::vector<double> s(y.size());
  for (size_t i = 0; i < y.size(); ++i)
    s[i] = k * std::max(0.0, 1.0 / y[i] - 1.0 / R);
  return s;
}

using Ladder = std::array<std::vector<double>, 4>;

double energy_j_impl(const SimState& state, const Ladder& ladder,
                     std::span<const double> sigma, int j) {
  const auto& y = state.grid->nodes;
  const double alpha = state.profile->alpha;
  const std::vector<double>& f = ladder[j];
  const std::vector<double>& fp = ladder[j + 1];
  std::vector<double> fy = state.diff->apply(f);
  std::vector<double> integrand(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    const double y2 = y[i] * y[i];
    const double sa = std::pow(sigma[i], alpha);
    const double yfy = y[i] * fy[i];
    integrand[i] = y2 * y2 * sa * (f[i] * f[i] + fp[i] * fp[i]) +
                   y2 * sa * sigma[i] * (f[i] * f[i] + yfy * yfy);
  }
  return state.grid->quad(integrand);
}

double energy_ji_impl(const SimState& state, const Ladder& ladder,
                      std::span<const double> sigma, int j, int i) {
  const auto& y = state.grid->nodes;
  const double alpha = state.profile->alpha;
  std::vector<double> di = ladder[j];
  for (int k = 0; k < i; ++k) di = state.diff->apply(di);
  std::vector<double> dip1 = state.diff->apply(di);
  std::vector<double> integrand(y.size());
  for (size_t m = 0; m < y.size(); ++m) {
    const double y2 = y[m] * y[m];
    integrand[m] = y2 * std::pow(sigma[m], alpha + i - 1.0) * di[m] * di[m] +
                   y2 * y2 * std::pow(sigma[m], alpha + i + 1.0) * dip1[m] * dip1[m];
  }
  return state.grid->quad(integrand);
}

double dissipation_j_impl(const SimState& state, const Ladder& ladder,
                          std::span<const double> sigma, int j) {
  const auto& y = state.grid->nodes;
  const double alpha = state.profile->alpha;
  const std::vector<double>& f = ladder[j];
  const std::vector<double>& fp = ladder[j + 1];
  std::vector<double> fy = state.diff->apply(f);
  std::vector<double> integrand(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    const double y2 = y[i] * y[i];
    const double sa = std::pow(sigma[i], alpha);
    const double yfy = y[i] * fy[i];
    integrand[i] = y2 * y2 * sa * fp[i] * fp[i] +
                   y2 * sa * sigma[i] * (f[i] * f[i] + yfy * yfy);
  }
  return state.grid->quad(integrand);
}

}  // namespace

std::array<std::vector<double>, 4> time_derivative_ladder(const SimState& state) {
  Ladder ladder;
  ladder[0] = state.zeta;
  ladder[1] = state.zeta_t;
  ladder[2] = acceleration(state);
  const int n = state.n_nodes();
  double s = 0.0;
  for (double v : state.zeta_t) s = std::max(s, std::abs(v));
  ladder[3].assign(n, 0.0);
  if (s > 1e-300) {
    // zeta_ttt = -zeta_tt + dF/dzeta[zeta_t], by central differencing of the
    // spatial operator along the velocity direction.
    const double h = 1e-6 / s;
    std::vector<double> zp(n), zm(n);
    for (int i = 0; i < n; ++i) {
      zp[i] = state.zeta[i] + h * state.zeta_t[i];
      zm[i] = state.zeta[i] - h * state.zeta_t[i];
    }
    const std::vector<double> fp = spatial_rhs(state, zp);
    const std::vector<double> fm = spatial_rhs(state, zm);
    for (int i = 0; i < n; ++i)
      ladder[3][i] = -ladder[2][i] + (fp[i] - fm[i]) / (2.0 * h);
  } else {
    for (int i = 0; i < n; ++i) ladder[3][i] = -ladder[2][i];
  }
  return ladder;
}

double energy_j(const SimState& state, int j) {
  if (j < 0 || j > 2) throw OrderUnavailable("energy_j supports j <= 2");
  const Ladder ladder = time_derivative_ladder(state);
  return energy_j_impl(state, ladder, sigma_at_nodes(state), j);
}

double energy_ji(const SimState& state, int j, int i, int order_cap) {
  if (j < 0 || i < 1 || j > 2 || j + i > order_cap)
    throw OrderUnavailable("energy_ji order beyond cap");
  const Ladder ladder = time_derivative_ladder(state);
  return energy_ji_impl(state, ladder, sigma_at_nodes(state), j, i);
}

double dissipation_j(const SimState& state, int j) {
  if (j < 0 || j > 2) throw OrderUnavailable("dissipation_j supports j <= 2");
  const Ladder ladder = time_derivative_ladder(state);
  return dissipation_j_impl(state, ladder, sigma_at_nodes(state), j);
}

EnergyReport energy_report(const SimState& state, int order_cap) {
  EnergyReport rep;
  rep.time = state.time;
  rep.j_max = 2;
  rep.n_ladder = 4 + static_cast<int>(std::floor(state.profile->alpha));
  const Ladder ladder = time_derivative_ladder(state);
  const std::vector<double> sigma = sigma_at_nodes(state);
  double total = 0.0;
  for (int j = 0; j <= 2; ++j) {
    rep.e_j[j] = energy_j_impl(state, ladder, sigma, j);
    rep.d_j[j] = dissipation_j_impl(state, ladder, sigma, j);
    total += rep.e_j[j];
  }
  for (int j = 0; j <= 2; ++j) {
    for (int i = 1; j + i <= order_cap; ++i) {
      const double v = energy_ji_impl(state, ladder, sigma, j, i);
      rep.e_ji[{j, i}] = v;
      // Mixed terms with higher y-derivatives are dominated by the temporal
      // ladder (norm equivalence); only the first enters the reported total
      // so its decay is not swamped by grid-scale derivative amplification.
      if (j == 0 && i == 1) total += v;
    }
  }
  rep.total = total;
  return rep;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> e,
                        double t_lo, double t_hi) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo - 1e-12 || t[i] > t_hi + 1e-12) continue;
    if (!(e[i] > 0.0)) throw NonpositiveEnergy("nonpositive energy sample in fit window");
    xs.push_back(t[i]);
    ys.push_back(std::log(e[i]));
  }
  if (xs.size() < 10) throw InsufficientSamples("fewer than 10 samples in fit window");

  const size_t n = xs.size();
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  DecayFit fit;
  fit.delta_hat = -slope;
  fit.intercept = my - slope * mx;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  if (syy > 1e-300) {
    double ssres = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (fit.intercept + slope * xs[i]);
      ssres += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ssres / syy, 0.0, 1.0);
  } else {
    fit.r_squared = 0.0;  // constant series convention
  }
  return fit;
}

EllipticRatio elliptic_ratio(const Trajectory& trajectory) {
  EllipticRatio out;
  for (const EnergyReport& rep : trajectory.reports) {
    const double denom = rep.e_j[0] + rep.e_j[1];
    if (denom <= 1e-300) continue;
    out.max_ratio = std::max(out.max_ratio, rep.e01() / denom);
    ++out.n_samples;
  }
  return out;
}

HardyResult hardy_check(const EquilibriumProfile& profile, const Grid& grid, double k,
                        const std::function<double(double)>& f,
                        const std::function<double(double)>& f_y) {
  const double r0 = profile.params.core_radius;
  const double R = profile.outer_radius;
  const double y_mid = 0.5 * (R + r0);

  std::vector<double> nodes{y_mid};
  for (double y : grid.nodes)
    if (y > y_mid + 1e-12) nodes.push_back(y);
  const std::vector<double> w = composite_weights(nodes);

  HardyResult out;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double s = profile.sigma(nodes[i]);
    const double fv = f(nodes[i]);
    const double fyv = f_y(nodes[i]);
    if (s > 0.0 || k >= 2.0)
      out.lhs += w[i] * std::pow(s, k - 2.0) * fv * fv;
    out.rhs += w[i] * std::pow(s, k) * (fv * fv + fyv * fyv);
  }
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

EulerianFields eulerian_reconstruct(const SimState& state) {
  const auto& y = state.grid->nodes;
  const int n = state.n_nodes();
  std::vector<double> zy = state.diff->apply(state.zeta);
  EulerianFields out;
  out.radii.resize(n);
  out.density.resize(n);
  out.velocity.resize(n);
  for (int i = 0; i < n; ++i) {
    const double q = 1.0 + state.zeta[i];
    const double jac = q + y[i] * zy[i];
    if (!(q > 0.0) || !(jac > 0.0))
      throw JacobianDegenerate("reconstruction requires a positive Jacobian");
    out.radii[i] = y[i] * q;
    out.density[i] = state.profile->density(y[i]) / (q * q * jac);
    out.velocity[i] = y[i] * state.zeta_t[i];
  }
  out.boundary_radius = state.profile->outer_radius * (1.0 + state.zeta[n - 1]);
  return out;
}

double eulerian_total_mass(const EulerianFields& fields) {
  const std::vector<double> w = composite_weights(fields.radii);
  double acc = 0.0;
  for (size_t i = 0; i < w.size(); ++i)
    acc += w[i] * fields.density[i] * fields.radii[i] * fields.radii[i];
  return 4.0 * std::numbers::pi * acc;
}

double vacuum_slope(const SimState& state) {
  const EulerianFields fields = eulerian_reconstruct(state);
  const double gm1 = state.profile->params.gamma - 1.0;
  const int n = static_cast<int>(fields.radii.size());
  const int s = n - 5;
  std::vector<double> r(fields.radii.begin() + s, fields.radii.end());
  const std::vector<double> w = fornberg_weights(fields.boundary_radius, r, 1);
  double slope = 0.0;
  for (int i = 0; i < 5; ++i)
    slope += w[i] * std::pow(fields.density[s + i], gm1);
  return slope;
}

PointwiseDecay pointwise_decay_check(const Trajectory& trajectory, double t_lo,
                                     double t_hi) {
  const size_t n = trajectory.states.size();
  std::vector<double> t(n), max_u(n), bdry(n);
  for (size_t k = 0; k < n; ++k) {
    const SimState& s = trajectory.states[k];
    t[k] = s.time;
    double u = 0.0;
    for (int i = 0; i < s.n_nodes(); ++i)
      u = std::max(u, std::abs(s.grid->nodes[i] * s.zeta_t[i]));
    max_u[k] = u;
    bdry[k] = s.profile->outer_radius * std::abs(s.zeta.back());
  }

  auto fit_series = [&](std::span<const double> v) {
    DecayFit fit;
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, x);
    if (peak <= 1e-300) {
      fit.zero_series = true;
      return fit;
    }
    std::vector<double> ts, vs;
    for (size_t k = 0; k < v.size(); ++k) {
      if (t[k] < t_lo - 1e-12 || t[k] > t_hi + 1e-12) continue;
      if (v[k] > 0.0) {
        ts.push_back(t[k]);
        vs.push_back(v[k]);
      }
    }
    return fit_decay_rate(ts, vs, t_lo, t_hi);
  };

  PointwiseDecay out;
  out.velocity_fit = fit_series(max_u);
  out.boundary_fit = fit_series(bdry);
  return out;
}

}  // namespace corevac
