#ifndef COREVAC_EQUILIBRIUM_HPP
#define COREVAC_EQUILIBRIUM_HPP

#include <span>
#include <utility>
#include <vector>

#include "corevac/errors.hpp"

namespace corevac {

/// Physical constants of the gas and the solid core.
struct GasParameters {
  double gamma;               ///< adiabatic exponent, > 1
  double pressure_const;      ///< A in p = A rho^gamma
  double core_gravity;        ///< g0 = G0 M0
  double core_radius;         ///< r0
  double self_gravity_const = 0.0;  ///< G for the Euler-Poisson variant, 0 disables

  double alpha() const { return 1.0 / (gamma - 1.0); }
  void validate() const;
};

/// abar = ((gamma-1) g0 / (gamma A))^{1/(gamma-1)}
double compute_abar(const GasParameters& params);

/// Mass threshold M*; finite only for gamma < 4/3, +inf otherwise.
double mass_star(const GasParameters& params);

/// Total mass of the closed-form equilibrium with outer radius R
/// (adaptive quadrature, relative tolerance 1e-10).
double total_mass_for_radius(const GasParameters& params, double outer_radius);

/// Closed-form background state on [r0, R].
struct EquilibriumProfile {
  GasParameters params;
  double outer_radius;  ///< R
  double abar;
  double alpha;
  double total_mass;
  double mass_star;  ///< +inf for gamma >= 4/3

  static EquilibriumProfile from_radius(const GasParameters& params, double outer_radius);

  /// abar^{gamma-1}; the coefficient in sigma(y) = abar^{gamma-1}(1/y - 1/R).
  double sigma_coeff() const;

  /// rhobar(r): abar (1/r - 1/R)^{1/(gamma-1)} for r < R, 0 for r >= R.
  double density(double r) const;

  /// (sigma(y), sigma_y(y)) for y in [r0, R].
  std::pair<double, double> sigma_and_slope(double y) const;
  double sigma(double y) const { return sigma_and_slope(y).first; }
};

EquilibriumProfile radius_from_mass(const GasParameters& params, double target_mass);

struct WindowCheck {
  bool pass;
  bool vacuous;   ///< true when gamma <= 4/3 (no window to check)
  double margin;  ///< 4 r0/(3-alpha) - R, meaningful when !vacuous
};

/// Stability window r0 < R <= 4 r0/(3-alpha).
WindowCheck check_radius_window(const EquilibriumProfile& profile);

/// Max of |A (rhobar^gamma)_r + g0 rhobar / r^2| over the mesh, relative to
/// the g0 rhobar / r^2 scale. Zero up to roundoff for a valid profile.
double equilibrium_residual(const EquilibriumProfile& profile, std::span<const double> mesh);

/// Tabulated Euler-Poisson equilibrium (self-gravitating atmosphere).
struct PoissonEquilibriumProfile {
  GasParameters params;
  double first_zero_radius;  ///< R_G
  std::vector<double> radii;
  std::vector<double> density_samples;
  std::vector<double> enclosed_mass;  ///< int_{r0}^r rho tau^2 dtau (no 4 pi)
  double total_mass;                  ///< 4 pi * enclosed_mass at R_G
  double max_residual;                ///< a-posteriori ODE residual over nodes
};

PoissonEquilibriumProfile solve_poisson_equilibrium(const GasParameters& params,
                                                    double central_density,
                                                    double radius_cap_factor = 1000.0);

}  // namespace corevac

#endif
