#ifndef COREVAC_SPECTRUM_HPP
#define COREVAC_SPECTRUM_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "corevac/equilibrium.hpp"
#include "corevac/grid.hpp"

namespace corevac {

/// Discretization of the linearized spatial operator in the nondegenerate
/// (rhobar-divided) form,
///   -accel = -(A sigma gamma / y)(4 zeta_y + y zeta_yy)
///            - (g0/y^3)[(4-3gamma) zeta - gamma y zeta_y],
/// reduced to the evolved unknowns: the pinned core node and the closed
/// vacuum-end nodes are folded in, so L v = mu W v is a standard
/// eigenproblem with the trivial weight W = 1.
struct LinearizedSystem {
  Eigen::MatrixXd L;       ///< reduced operator on nodes 1..last_evolved
  Eigen::VectorXd W;       ///< diagonal weight (all ones)
  std::vector<double> nodes;
  int last_evolved = 0;
};

LinearizedSystem assemble_linearized(const EquilibriumProfile& profile, const Grid& grid);

/// Linearized acceleration of the evolution scheme on the full grid, for
/// consistency checks against the nonlinear operator at small amplitude.
std::vector<double> apply_linearized(const EquilibriumProfile& profile, const Grid& grid,
                                     std::span<const double> v);

struct Mode {
  double mu;                         ///< generalized eigenvalue
  std::complex<double> lambda_plus;  ///< roots of lambda^2 + lambda + mu = 0
  std::complex<double> lambda_minus;
  double residual;  ///< ||L v - mu W v|| / ||v|| on the retained nodes
};

struct SpectrumResult {
  std::vector<Mode> modes;  ///< sorted by mu ascending
  double predicted_delta = 0.0;
  int n_modes = 0;
};

/// Solves L v = mu W v and keeps the n_keep smallest modes. Eigenvalues
/// with a non-negligible imaginary part (discretization artifacts; the
/// continuous operator is self-adjoint) are rejected.
SpectrumResult eigen_modes(const LinearizedSystem& system, int n_keep,
                           double weight_floor = 1e-10);

/// Convenience wrapper: grid assembly plus eigen_modes.
SpectrumResult compute_spectrum(const EquilibriumProfile& profile, int n_cells,
                                double grading_power, int n_keep);

/// 2 * min over modes of (-max Re lambda) over the stable roots; equals
/// 1 - sqrt(1 - 4 mu_min) for mu_min <= 1/4 and 1 beyond (damping-limited).
double predicted_delta(const SpectrumResult& result);

}  // namespace corevac

#endif
