#include "corevac/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "corevac/fd.hpp"

namespace corevac {

namespace {
constexpr double kPi = std::numbers::pi;
}

void GasParameters::validate() const {
  if (!(gamma > 1.0)) throw ValidationError("gas.gamma must be > 1");
  if (!(pressure_const > 0.0)) throw ValidationError("gas.pressure_const must be > 0");
  if (!(core_gravity > 0.0)) throw ValidationError("gas.core_gravity must be > 0");
  if (!(core_radius > 0.0)) throw ValidationError("gas.core_radius must be > 0");
  if (!(self_gravity_const >= 0.0)) throw ValidationError("gas.self_gravity_const must be >= 0");
}

double compute_abar(const GasParameters& params) {
  params.validate();
  const double g = params.gamma;
  return std::pow((g - 1.0) * params.core_gravity / (g * params.pressure_const),
                  1.0 / (g - 1.0));
}

double mass_star(const GasParameters& params) {
  params.validate();
  const double g = params.gamma;
  if (g >= 4.0 / 3.0) return std::numeric_limits<double>::infinity();
  const double abar = compute_abar(params);
  const double e = (4.0 - 3.0 * g) / (g - 1.0);
  return 4.0 * kPi * abar * (g - 1.0) / (4.0 - 3.0 * g) * std::pow(params.core_radius, -e);
}

double total_mass_for_radius(const GasParameters& params, double outer_radius) {
  params.validate();
  const double r0 = params.core_radius;
  if (outer_radius < r0) throw DomainError("outer radius below core radius");
  if (outer_radius == r0) return 0.0;
  const double abar = compute_abar(params);
  const double alpha = params.alpha();
  const double R = outer_radius;
  auto f = [&](double r) { return std::pow(1.0 / r - 1.0 / R, alpha) * r * r; };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, r0, R, 15, 1e-11, &err);
  return 4.0 * kPi * abar * integral;
}

EquilibriumProfile EquilibriumProfile::from_radius(const GasParameters& params,
                                                  double outer_radius) {
  params.validate();
  if (!(outer_radius > params.core_radius))
    throw ValidationError("outer radius must exceed core radius");
  EquilibriumProfile p;
  p.params = params;
  p.outer_radius = outer_radius;
  p.abar = compute_abar(params);
  p.alpha = params.alpha();
  p.total_mass = total_mass_for_radius(params, outer_radius);
  p.mass_star = corevac::mass_star(params);
  return p;
}

double EquilibriumProfile::sigma_coeff() const {
  return std::pow(abar, params.gamma - 1.0);
}

double EquilibriumProfile::density(double r) const {
  if (r < params.core_radius) throw DomainError("density: r below core radius");
  if (r >= outer_radius) return 0.0;
  return abar * std::pow(1.0 / r - 1.0 / outer_radius, alpha);
}

std::pair<double, double> EquilibriumProfile::sigma_and_slope(double y) const {
  if (y < params.core_radius || y > outer_radius * (1.0 + 1e-12))
    throw DomainError("sigma: y outside [r0, R]");
  const double k = sigma_coeff();
  const double s = std::max(0.0, k * (1.0 / y - 1.0 / outer_radius));
  return {s, -k / (y * y)};
}

EquilibriumProfile radius_from_mass(const GasParameters& params, double target_mass) {
  params.validate();
  if (!(target_mass > 0.0)) throw ValidationError("target mass must be > 0");
  const double mstar = mass_star(params);
  if (target_mass >= mstar)
    throw MassExceedsThreshold("target mass at or above M* for gamma < 4/3");

  const double r0 = params.core_radius;
  double lo = r0 * (1.0 + 1e-9);
  double hi = r0 * 2.0;
  int doublings = 0;
  while (total_mass_for_radius(params, hi) < target_mass) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) throw NonConvergence("radius_from_mass: bracketing failed");
  }

  // Hybrid bisection/secant on f(R) = M(R) - target (strictly increasing).
  double fa = total_mass_for_radius(params, lo) - target_mass;
  double fb = total_mass_for_radius(params, hi) - target_mass;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double cand = hi - fb * (hi - lo) / (fb - fa);
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    const double fc = total_mass_for_radius(params, cand) - target_mass;
    mid = cand;
    if (std::abs(fc) <= 1e-10 * target_mass) break;
    if (fc < 0.0) {
      lo = cand;
      fa = fc;
    } else {
      hi = cand;
      fb = fc;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return EquilibriumProfile::from_radius(params, mid);
}

WindowCheck check_radius_window(const EquilibriumProfile& profile) {
  WindowCheck w{};
  const double alpha = profile.alpha;
  const double r0 = profile.params.core_radius;
  const double R = profile.outer_radius;
  if (alpha >= 3.0) {  // gamma <= 4/3: window vacuous
    w.vacuous = true;
    w.pass = R > r0;
    w.margin = std::numeric_limits<double>::infinity();
    return w;
  }
  const double upper = 4.0 * r0 / (3.0 - alpha);
  w.vacuous = false;
  w.margin = upper - R;
  w.pass = (R > r0) && (R <= upper);
  return w;
}

double equilibrium_residual(const EquilibriumProfile& profile, std::span<const double> mesh) {
  const double A = profile.params.pressure_const;
  const double g0 = profile.params.core_gravity;
  const double ap1 = profile.alpha + 1.0;
  const double k = profile.sigma_coeff();
  double worst = 0.0;
  for (double y : mesh) {
    const double sy = -k / (y * y);
    // |A (rho^gamma)_y + g0 rho / y^2| / (g0 rho / y^2), the sigma^alpha factor cancels
    const double rel = std::abs(A * ap1 * sy + g0 / (y * y)) * y * y / g0;
    worst = std::max(worst, rel);
  }
  return worst;
}

namespace {

struct OdeState {
  double q;  // rho^{gamma-1}
  double m;  // enclosed integral of rho tau^2
};

// Cash-Karp embedded RK45 step for the hydrostatic system.
struct RkResult {
  OdeState y;
  double err;
};

template <typename Rhs>
RkResult ck45_step(const Rhs& rhs, double r, const OdeState& y, double h) {
  auto add = [](const OdeState& a, double c, const OdeState& b) {
    return OdeState{a.q + c * b.q, a.m + c * b.m};
  };
  const OdeState k1 = rhs(r, y);
  const OdeState k2 = rhs(r + h / 5.0, add(y, h / 5.0, k1));
  OdeState t = y;
  t.q += h * (3.0 / 40.0 * k1.q + 9.0 / 40.0 * k2.q);
  t.m += h * (3.0 / 40.0 * k1.m + 9.0 / 40.0 * k2.m);
  const OdeState k3 = rhs(r + 3.0 * h / 10.0, t);
  t = y;
  t.q += h * (3.0 / 10.0 * k1.q - 9.0 / 10.0 * k2.q + 6.0 / 5.0 * k3.q);
  t.m += h * (3.0 / 10.0 * k1.m - 9.0 / 10.0 * k2.m + 6.0 / 5.0 * k3.m);
  const OdeState k4 = rhs(r + 3.0 * h / 5.0, t);
  t = y;
  t.q += h * (-11.0 / 54.0 * k1.q + 5.0 / 2.0 * k2.q - 70.0 / 27.0 * k3.q + 35.0 / 27.0 * k4.q);
  t.m += h * (-11.0 / 54.0 * k1.m + 5.0 / 2.0 * k2.m - 70.0 / 27.0 * k3.m + 35.0 / 27.0 * k4.m);
  const OdeState k5 = rhs(r + h, t);
  t = y;
  t.q += h * (1631.0 / 55296.0 * k1.q + 175.0 / 512.0 * k2.q + 575.0 / 13824.0 * k3.q +
              44275.0 / 110592.0 * k4.q + 253.0 / 4096.0 * k5.q);
  t.m += h * (1631.0 / 55296.0 * k1.m + 175.0 / 512.0 * k2.m + 575.0 / 13824.0 * k3.m +
              44275.0 / 110592.0 * k4.m + 253.0 / 4096.0 * k5.m);
  const OdeState k6 = rhs(r + 7.0 * h / 8.0, t);

  auto comb5 = [&](auto sel) {
    return h * (37.0 / 378.0 * sel(k1) + 250.0 / 621.0 * sel(k3) + 125.0 / 594.0 * sel(k4) +
                512.0 / 1771.0 * sel(k6));
  };
  auto comb4 = [&](auto sel) {
    return h * (2825.0 / 27648.0 * sel(k1) + 18575.0 / 48384.0 * sel(k3) +
                13525.0 / 55296.0 * sel(k4) + 277.0 / 14336.0 * sel(k5) + 1.0 / 4.0 * sel(k6));
  };
  auto qsel = [](const OdeState& s) { return s.q; };
  auto msel = [](const OdeState& s) { return s.m; };
  RkResult out;
  out.y = OdeState{y.q + comb5(qsel), y.m + comb5(msel)};
  const OdeState y4{y.q + comb4(qsel), y.m + comb4(msel)};
  out.err = std::max(std::abs(out.y.q - y4.q), std::abs(out.y.m - y4.m));
  return out;
}

}  // namespace

PoissonEquilibriumProfile solve_poisson_equilibrium(const GasParameters& params,
                                                    double central_density,
                                                    double radius_cap_factor) {
  params.validate();
  if (params.gamma < 4.0 / 3.0)
    throw ValidationError("Poisson equilibrium requires gamma >= 4/3");
  if (!(central_density > 0.0)) throw ValidationError("central density must be > 0");

  const double g = params.gamma;
  const double alpha = params.alpha();
  const double K = (g - 1.0) / (g * params.pressure_const);
  const double G = params.self_gravity_const;
  const double g0 = params.core_gravity;
  const double r0 = params.core_radius;
  const double r_cap = radius_cap_factor * r0;

  auto rhs = [&](double r, const OdeState& s) {
    const double q = std::max(s.q, 0.0);
    return OdeState{-K * (g0 + 4.0 * kPi * G * s.m) / (r * r), std::pow(q, alpha) * r * r};
  };

  const double q0 = std::pow(central_density, g - 1.0);
  const double h_max = r0 / 400.0;
  const double h_min = 1e-12 * r0;
  const double tol = 1e-12 * std::max(q0, 1.0);

  std::vector<double> rs{r0};
  std::vector<double> qs{q0};
  std::vector<double> ms{0.0};

  double r = r0;
  OdeState y{q0, 0.0};
  double h = h_max;
  while (true) {
    if (r >= r_cap)
      throw NoZeroFound("density did not reach zero before the radius cap");
    h = std::min(h, h_max);
    RkResult st = ck45_step(rhs, r, y, h);
    if (st.err > tol && h > h_min) {
      h = std::max(h_min, 0.9 * h * std::pow(tol / st.err, 0.2));
      continue;
    }
    if (st.y.q <= 0.0) {
      // Event: bisect the step length to land on the first zero of q.
      double a = 0.0, b = h;
      for (int it = 0; it < 200; ++it) {
        const double hm = 0.5 * (a + b);
        RkResult sm = ck45_step(rhs, r, y, hm);
        if (sm.y.q > 1e-13 * q0)
          a = hm;
        else if (sm.y.q <= 0.0)
          b = hm;
        else {
          a = b = hm;
          st = sm;
          break;
        }
        st = sm;
        if (b - a < 1e-15 * h) break;
      }
      const double h_ev = 0.5 * (a + b);
      st = ck45_step(rhs, r, y, h_ev);
      r += h_ev;
      y = st.y;
      y.q = std::max(y.q, 0.0);
      rs.push_back(r);
      qs.push_back(y.q);
      ms.push_back(y.m);
      break;
    }
    r += h;
    y = st.y;
    rs.push_back(r);
    qs.push_back(y.q);
    ms.push_back(y.m);
    if (st.err > 0.0) h = std::min(h_max, 0.9 * h * std::pow(tol / st.err, 0.2));
  }

  PoissonEquilibriumProfile out;
  out.params = params;
  out.first_zero_radius = r;
  out.radii = rs;
  out.enclosed_mass = ms;
  out.density_samples.resize(qs.size());
  for (size_t i = 0; i < qs.size(); ++i)
    out.density_samples[i] = std::pow(qs[i], alpha);
  out.total_mass = 4.0 * kPi * ms.back();

  // A-posteriori residual: finite-difference q' against the RHS at every node.
  const DiffOp d(rs);
  std::vector<double> dq = d.apply(qs);
  const double scale = K * g0 / (r0 * r0);
  double worst = 0.0;
  for (size_t i = 0; i < rs.size(); ++i) {
    const double lhs = dq[i];
    const double target = -K * (g0 + 4.0 * kPi * G * ms[i]) / (rs[i] * rs[i]);
    worst = std::max(worst, std::abs(lhs - target) / scale);
  }
  out.max_residual = worst;
  return out;
}

}  // namespace corevac
