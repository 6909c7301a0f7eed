#ifndef COREVAC_DIAGNOSTICS_HPP
#define COREVAC_DIAGNOSTICS_HPP

#include <functional>
#include <span>
#include <vector>

#include "corevac/energy_report.hpp"
#include "corevac/solver.hpp"

namespace corevac {

/// Fields [0] = zeta, [1] = zeta_t, [2] = zeta_tt, [3] = zeta_ttt.
/// zeta_tt comes from the momentum equation; zeta_ttt from the directional
/// derivative of the spatial operator along zeta_t.
std::array<std::vector<double>, 4> time_derivative_ladder(const SimState& state);

double energy_j(const SimState& state, int j);
double energy_ji(const SimState& state, int j, int i, int order_cap = 3);
double dissipation_j(const SimState& state, int j);

EnergyReport energy_report(const SimState& state, int order_cap = 3);

struct DecayFit {
  double delta_hat = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  bool zero_series = false;  ///< series identically zero, fit skipped
};

/// Least-squares line on (t, ln E) restricted to [t_lo, t_hi].
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> e,
                        double t_lo, double t_hi);

struct EllipticRatio {
  double max_ratio = 0.0;
  size_t n_samples = 0;
};

/// Running maximum over the trajectory of E_{0,1} / (E_0 + E_1).
EllipticRatio elliptic_ratio(const Trajectory& trajectory);

struct HardyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Empirical Hardy-inequality witness on the boundary half
/// I_b = [(R + r0)/2, R): lhs = int sigma^{k-2} F^2, rhs = int sigma^k (F^2 + F_y^2).
HardyResult hardy_check(const EquilibriumProfile& profile, const Grid& grid, double k,
                        const std::function<double(double)>& f,
                        const std::function<double(double)>& f_y);

struct EulerianFields {
  std::vector<double> radii;
  std::vector<double> density;
  std::vector<double> velocity;
  double boundary_radius = 0.0;
};

EulerianFields eulerian_reconstruct(const SimState& state);

/// 4 pi int rho r^2 dr over the reconstructed fields.
double eulerian_total_mass(const EulerianFields& fields);

/// One-sided slope of (reconstructed rho)^{gamma-1} in r at the moving boundary.
double vacuum_slope(const SimState& state);

struct PointwiseDecay {
  DecayFit velocity_fit;
  DecayFit boundary_fit;
};

/// Exponential fits of max|u| and |R(t) - R| over the trajectory.
PointwiseDecay pointwise_decay_check(const Trajectory& trajectory, double t_lo,
                                     double t_hi);

}  // namespace corevac

#endif
