#ifndef COREVAC_CONFIG_HPP
#define COREVAC_CONFIG_HPP

#include <optional>
#include <string>

#include "corevac/equilibrium.hpp"
#include "corevac/solver.hpp"

namespace corevac {

/// Fully deterministic scenario description, parsed from flat
/// `key = value` text with dotted sections.
struct ScenarioConfig {
  GasParameters gas{5.0 / 3.0, 1.0, 1.0, 1.0, 0.0};
  std::optional<double> radius_r;     ///< explicit R
  std::optional<double> target_mass;  ///< or total mass M (mutually exclusive)
  int n_cells = 256;
  double grading_power = 2.0;
  double cfl = 0.4;
  PerturbationFamily perturbation{1, 0.0, PerturbationFamily::Kind::displacement};
  double t_end = 40.0;
  double snapshot_every = 0.5;
  double fit_t_lo = 5.0;
  double fit_t_hi = 40.0;
  double poisson_central_density = 0.0;  ///< 0: derive from the closed form
  double poisson_radius_cap = 1000.0;    ///< in units of r0
  std::string preset;

  /// Resolves radius_r / target_mass into a profile.
  EquilibriumProfile make_profile() const;
};

ScenarioConfig parse_config(const std::string& text);
std::string serialize_config(const ScenarioConfig& config);

}  // namespace corevac

#endif
