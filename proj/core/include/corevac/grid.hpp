#ifndef COREVAC_GRID_HPP
#define COREVAC_GRID_HPP

#include <span>
#include <vector>

#include "corevac/equilibrium.hpp"

namespace corevac {

/// Node weights for composite quadrature on an arbitrary increasing mesh.
/// Each cell integrates the cubic through its four nearest nodes (fourth
/// order); the weights form a partition of unity.
std::vector<double> composite_weights(std::span<const double> nodes);

/// Running integral of sampled f from nodes.front() to each node, using the
/// same piecewise-cubic cell rule as composite_weights.
std::vector<double> cumulative_integral(std::span<const double> nodes,
                                        std::span<const double> f);

/// Boundary-graded mesh on [r0, R] with quadrature weights.
struct Grid {
  std::vector<double> nodes;         ///< y0 = r0 < ... < yN = R
  std::vector<double> quad_weights;  ///< per-node composite weights
  double grading_power;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  double quad(std::span<const double> f) const;
};

/// y_k = r0 + (R - r0)(1 - (1 - k/N)^p), clustering toward the vacuum end.
Grid build_grid(const EquilibriumProfile& profile, int n_cells, double grading_power);

}  // namespace corevac

#endif
