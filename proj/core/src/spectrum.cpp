#include "corevac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corevac/solver.hpp"

namespace corevac {

namespace {

/// Full-grid matrix of the linearized acceleration (before reduction):
/// accel = (A sigma gamma / y)(4 zeta_y + y zeta_yy)
///         + (g0/y^3)[(4-3gamma) zeta - gamma y zeta_y].
Eigen::MatrixXd accel_matrix(const EquilibriumProfile& profile, const Grid& grid,
                             const SpatialScheme& scheme) {
  const int n = grid.n_nodes();
  const double gamma = profile.params.gamma;
  const DiffOp d(grid.nodes);

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double yi = grid.nodes[i];
    const double cp = scheme.press_coef[i] * gamma;
    const double cg = scheme.grav_coef[i];
    const DiffOp::Row& r1 = d.row(i);
    for (int a = 0; a < 5; ++a)
      M(i, r1.start + a) += (4.0 * cp - cg * gamma * yi) * r1.w[a];
    const SpatialScheme::D2Row& r2 = scheme.d2[i];
    for (int a = 0; a < 6; ++a) M(i, r2.start + a) += cp * yi * r2.w[a];
    M(i, i) += cg * (4.0 - 3.0 * gamma);
  }
  return M;
}

}  // namespace

LinearizedSystem assemble_linearized(const EquilibriumProfile& profile, const Grid& grid) {
  const auto scheme = make_spatial_scheme(profile, grid);
  const int n = grid.n_nodes();
  const Eigen::MatrixXd M = accel_matrix(profile, grid, *scheme);

  // Fold the pinned core node and the extrapolated vacuum-end nodes into
  // the evolved unknowns 1..last_evolved.
  const int m = scheme->last_evolved;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, m);
  for (int a = 0; a < m; ++a) E(a + 1, a) = 1.0;
  for (size_t c = 0; c < scheme->closure.size(); ++c) {
    const int row = scheme->last_evolved + 1 + static_cast<int>(c);
    for (int a = 0; a < 5; ++a) {
      const int src = scheme->closure_src + a;
      if (src >= 1) E(row, src - 1) += scheme->closure[c][a];
    }
  }

  LinearizedSystem sys;
  sys.L.resize(m, m);
  for (int a = 0; a < m; ++a) sys.L.row(a) = -(M.row(a + 1) * E);
  sys.W = Eigen::VectorXd::Ones(m);
  sys.nodes = grid.nodes;
  sys.last_evolved = scheme->last_evolved;
  return sys;
}

std::vector<double> apply_linearized(const EquilibriumProfile& profile, const Grid& grid,
                                     std::span<const double> v) {
  const auto scheme = make_spatial_scheme(profile, grid);
  const int n = grid.n_nodes();
  const double gamma = profile.params.gamma;
  const DiffOp d(grid.nodes);
  const std::vector<double> vy = d.apply(v);

  std::vector<double> out(n, 0.0);
  for (int i = 1; i <= scheme->last_evolved; ++i) {
    const double yi = grid.nodes[i];
    double vyy = 0.0;
    const SpatialScheme::D2Row& r2 = scheme->d2[i];
    for (int a = 0; a < 6; ++a) vyy += r2.w[a] * v[r2.start + a];
    out[i] = scheme->press_coef[i] * gamma * (4.0 * vy[i] + yi * vyy) +
             scheme->grav_coef[i] * ((4.0 - 3.0 * gamma) * v[i] - gamma * yi * vy[i]);
  }
  enforce_closure(*scheme, out);
  return out;
}

SpectrumResult eigen_modes(const LinearizedSystem& system, int n_keep,
                           double weight_floor) {
  (void)weight_floor;  // trivial weight; kept for interface stability
  const int m = static_cast<int>(system.L.rows());
  if (m < 4) throw EigensolverFailure("too few retained nodes");

  Eigen::EigenSolver<Eigen::MatrixXd> es(system.L);
  if (es.info() != Eigen::Success)
    throw EigensolverFailure("dense eigensolver did not converge");

  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return es.eigenvalues()[a].real() < es.eigenvalues()[b].real();
  });

  SpectrumResult result;
  for (int k = 0; k < m && static_cast<int>(result.modes.size()) < n_keep; ++k) {
    const int idx = order[k];
    const std::complex<double> mu_c = es.eigenvalues()[idx];
    if (std::abs(mu_c.imag()) > 1e-8 * (1.0 + std::abs(mu_c.real()))) continue;
    const Eigen::VectorXcd v = es.eigenvectors().col(idx);
    Mode mode{};
    mode.mu = mu_c.real();
    const double vnorm = v.norm();
    mode.residual =
        (system.L * v - mu_c * v).norm() / (vnorm > 0.0 ? vnorm : 1.0);
    const double disc = 1.0 - 4.0 * mode.mu;
    if (disc >= 0.0) {
      mode.lambda_plus = {(-1.0 + std::sqrt(disc)) / 2.0, 0.0};
      mode.lambda_minus = {(-1.0 - std::sqrt(disc)) / 2.0, 0.0};
    } else {
      mode.lambda_plus = {-0.5, std::sqrt(-disc) / 2.0};
      mode.lambda_minus = {-0.5, -std::sqrt(-disc) / 2.0};
    }
    result.modes.push_back(mode);
  }
  result.n_modes = static_cast<int>(result.modes.size());
  const bool stable =
      !result.modes.empty() &&
      std::all_of(result.modes.begin(), result.modes.end(),
                  [](const Mode& mode) { return mode.mu > 0.0; });
  result.predicted_delta =
      stable ? predicted_delta(result) : std::numeric_limits<double>::quiet_NaN();
  return result;
}

SpectrumResult compute_spectrum(const EquilibriumProfile& profile, int n_cells,
                                double grading_power, int n_keep) {
  const Grid grid = build_grid(profile, n_cells, grading_power);
  return eigen_modes(assemble_linearized(profile, grid), n_keep);
}

double predicted_delta(const SpectrumResult& result) {
  if (result.modes.empty()) throw EigensolverFailure("no modes available");
  double delta = std::numeric_limits<double>::infinity();
  for (const Mode& mode : result.modes) {
    if (!(mode.mu > 0.0))
      throw UnstableMode("nonpositive eigenvalue mu = " + std::to_string(mode.mu));
    const double contribution =
        mode.mu <= 0.25 ? 1.0 - std::sqrt(1.0 - 4.0 * mode.mu) : 1.0;
    delta = std::min(delta, contribution);
  }
  return delta;
}

}  // namespace corevac
