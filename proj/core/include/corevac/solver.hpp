#ifndef COREVAC_SOLVER_HPP
#define COREVAC_SOLVER_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "corevac/energy_report.hpp"
#include "corevac/equilibrium.hpp"
#include "corevac/fd.hpp"
#include "corevac/grid.hpp"

namespace corevac {

/// Precomputed pieces of the spatial operator in the nondegenerate form
/// (the momentum equation divided by rhobar):
///   zeta_tt + zeta_t = -(A sigma / y)(1+zeta)^2 G_y
///                      + (g/y^3)[(1+zeta)^{2-2gamma} J^{-gamma} - (1+zeta)^{-2}],
/// with G = (1+zeta)^{-2gamma} J^{-gamma}, J = 1 + zeta + y zeta_y. All
/// coefficients are smooth and bounded; G == 1 at equilibrium, so zeta == 0
/// is stationary to roundoff. The boundary-most nodes of a graded mesh
/// (where adjacent cell sizes change too fast for stable one-sided stencils)
/// are not evolved; they follow the interior by polynomial extrapolation.
struct SpatialScheme {
  /// Second-derivative stencil row: 5-point centered in the interior,
  /// 6-point one-sided near the ends (fourth order everywhere).
  struct D2Row {
    int start;
    std::array<double, 6> w;
  };

  std::vector<double> press_coef;  ///< A sigma(y) / y per node
  std::vector<double> grav_coef;   ///< g_eff(y) / y^3 per node
  std::vector<D2Row> d2;           ///< second-derivative stencils
  int last_evolved = 0;            ///< highest dynamically updated index
  int closure_src = 0;             ///< first node of the closure stencil
  std::vector<std::array<double, 5>> closure;  ///< weights per closed node
};

std::shared_ptr<const SpatialScheme> make_spatial_scheme(
    const EquilibriumProfile& profile, const Grid& grid,
    const std::vector<double>* enclosed_mass = nullptr);

/// Lagrangian perturbation fields on a grid at one time. Plain value,
/// cheap to copy; the profile/grid/stencils are shared immutable state.
struct SimState {
  std::shared_ptr<const EquilibriumProfile> profile;
  std::shared_ptr<const Grid> grid;
  std::shared_ptr<const DiffOp> diff;
  std::shared_ptr<const SpatialScheme> scheme;
  std::vector<double> zeta;
  std::vector<double> zeta_t;
  double time = 0.0;
  bool gravity_enabled = false;
  /// int_{r0}^{y} rhobar tau^2 dtau per node; fixed in Lagrangian labels.
  std::shared_ptr<const std::vector<double>> enclosed_mass;

  int n_nodes() const { return grid->n_nodes(); }
};

SimState make_equilibrium_state(std::shared_ptr<const EquilibriumProfile> profile,
                                std::shared_ptr<const Grid> grid,
                                bool gravity_enabled = false);

struct PerturbationFamily {
  enum class Kind { displacement, velocity };
  int mode = 1;
  double amplitude = 0.0;
  Kind kind = Kind::displacement;
};

/// Adds eps * sin(m pi (y - r0) / (2 (R - r0))) to zeta or zeta_t.
/// The core pin zeta(r0) = zeta_t(r0) = 0 is re-asserted exactly.
SimState apply_perturbation(const SimState& state, const PerturbationFamily& family);

/// Spatial part of the acceleration (damping excluded): F with
/// zeta_tt = -zeta_t + F(zeta). Throws JacobianDegenerate when 1 + zeta or
/// 1 + zeta + y zeta_y falls below the floor (0.1). The core node is
/// pinned; the closed vacuum-end nodes carry the polynomial extrapolation
/// of the interior values.
std::vector<double> spatial_rhs(const SimState& state, std::span<const double> zeta);

/// Replaces the closed vacuum-end entries by their extrapolated values.
/// Applied to stage vectors during stepping and to perturbed initial data.
void enforce_closure(const SpatialScheme& scheme, std::span<double> field);

/// zeta_tt from the rhobar-divided momentum equation; node y = r0 is pinned.
std::vector<double> acceleration(const SimState& state);

/// CFL bound: C_cfl * min_k(dy_k / max(c_k, c_floor)), capped at 0.1.
double stable_dt(const SimState& state, double cfl = 0.4);

using SpatialRhs =
    std::function<std::vector<double>(const SimState&, std::span<const double>)>;

/// One step of RK4 with the damping term absorbed exactly by an
/// integrating factor on the velocity variable.
SimState step(const SimState& state, double dt);

/// Test hook: same scheme with a caller-supplied spatial operator.
SimState step_with_rhs(const SimState& state, double dt, const SpatialRhs& rhs);

struct Trajectory {
  std::vector<double> snapshot_times;
  std::vector<SimState> states;
  std::vector<EnergyReport> reports;
};

/// Steps with dt = min(stable_dt, time to next snapshot) and records
/// snapshots plus energy reports at the requested cadence. Deterministic.
Trajectory evolve(const SimState& state, double t_end, double snapshot_every,
                  double cfl = 0.4);

}  // namespace corevac

#endif
