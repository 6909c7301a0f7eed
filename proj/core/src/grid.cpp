#include "corevac/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace corevac {

namespace {

// 3-point Gauss-Legendre on [-1, 1]; exact through degree 5.
constexpr std::array<double, 3> kGlX{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGlW{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// Integrals over cell [nodes[k], nodes[k+1]] of the Lagrange basis on the
// 4-node stencil starting at s = clamp(k-1, 0, n-4).
struct CellRule {
  int start;
  std::array<double, 4> c;
};

CellRule cell_rule(std::span<const double> nodes, int k) {
  const int n = static_cast<int>(nodes.size());
  CellRule rule{};
  rule.start = std::clamp(k - 1, 0, n - 4);
  rule.c.fill(0.0);
  const double a = nodes[k], b = nodes[k + 1];
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int g = 0; g < 3; ++g) {
    const double x = mid + half * kGlX[g];
    for (int j = 0; j < 4; ++j) {
      double l = 1.0;
      for (int i = 0; i < 4; ++i) {
        if (i == j) continue;
        l *= (x - nodes[rule.start + i]) / (nodes[rule.start + j] - nodes[rule.start + i]);
      }
      rule.c[j] += half * kGlW[g] * l;
    }
  }
  return rule;
}

}  // namespace

std::vector<double> composite_weights(std::span<const double> nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> w(n, 0.0);
  for (int k = 0; k + 1 < n; ++k) {
    const CellRule rule = cell_rule(nodes, k);
    for (int j = 0; j < 4; ++j) w[rule.start + j] += rule.c[j];
  }
  return w;
}

std::vector<double> cumulative_integral(std::span<const double> nodes,
                                        std::span<const double> f) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> out(n, 0.0);
  double acc = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const CellRule rule = cell_rule(nodes, k);
    for (int j = 0; j < 4; ++j) acc += rule.c[j] * f[rule.start + j];
    out[k + 1] = acc;
  }
  return out;
}

double Grid::quad(std::span<const double> f) const {
  double acc = 0.0;
  for (size_t i = 0; i < quad_weights.size(); ++i) acc += quad_weights[i] * f[i];
  return acc;
}

Grid build_grid(const EquilibriumProfile& profile, int n_cells, double grading_power) {
  if (grading_power < 1.0) throw InvalidGrading("grading power must be >= 1");
  if (n_cells < 4) throw ValidationError("need at least 4 cells");
  const double r0 = profile.params.core_radius;
  const double R = profile.outer_radius;
  Grid g;
  g.grading_power = grading_power;
  g.nodes.resize(n_cells + 1);
  for (int k = 0; k <= n_cells; ++k) {
    const double x = static_cast<double>(k) / n_cells;
    g.nodes[k] = r0 + (R - r0) * (1.0 - std::pow(1.0 - x, grading_power));
  }
  g.nodes.front() = r0;
  g.nodes.back() = R;
  g.quad_weights = composite_weights(g.nodes);
  return g;
}

}  // namespace corevac
