#include <cmath>
#include <memory>
#include <vector>

#include <doctest.h>

#include "corevac/solver.hpp"

using namespace corevac;

namespace {

SimState reference_state(int n_cells = 256, double grading = 2.0) {
  GasParameters gas{5.0 / 3.0, 1.0, 1.0, 1.0, 0.0};
  auto profile = std::make_shared<const EquilibriumProfile>(
      EquilibriumProfile::from_radius(gas, 2.5));
  auto grid = std::make_shared<const Grid>(build_grid(*profile, n_cells, grading));
  return make_equilibrium_state(profile, grid);
}

}  // namespace

TEST_CASE("the equilibrium is a fixed point of the discrete operator") {
  const SimState s = reference_state();
  const std::vector<double> a = acceleration(s);
  for (double v : a) CHECK(std::abs(v) <= 1e-14);

  const Trajectory traj = evolve(s, 1.0, 0.25);
  for (const SimState& st : traj.states)
    for (double z : st.zeta) CHECK(std::abs(z) <= 1e-14);
}

TEST_CASE("perturbation pins the core node and rejects large amplitudes") {
  const SimState s = reference_state(64);
  const SimState p =
      apply_perturbation(s, {1, 1e-3, PerturbationFamily::Kind::displacement});
  CHECK(p.zeta[0] == 0.0);
  CHECK(p.zeta_t[0] == 0.0);
  CHECK(p.zeta[10] != 0.0);
  CHECK_THROWS_AS(
      apply_perturbation(s, {1, 0.06, PerturbationFamily::Kind::displacement}),
      AmplitudeTooLarge);
}

TEST_CASE("uniform dilation reduces to the radial closed form") {
  const SimState s = reference_state();
  const double gamma = s.profile->params.gamma;
  const double g0 = s.profile->params.core_gravity;
  const double c = 0.01;
  std::vector<double> z(s.n_nodes(), c);
  const std::vector<double> rhs = spatial_rhs(s, z);
  // pressure drops out (G is constant); gravity leaves
  // (g0/y^3) [(1+c)^{2-3 gamma} - (1+c)^{-2}]
  const double bracket =
      std::pow(1.0 + c, 2.0 - 3.0 * gamma) - std::pow(1.0 + c, -2.0);
  for (int i = 1; i <= s.n_nodes() / 2; ++i) {
    const double y = s.grid->nodes[i];
    CHECK(rhs[i] == doctest::Approx(g0 / (y * y * y) * bracket).epsilon(1e-9));
  }
}

TEST_CASE("damping is integrated exactly when the spatial force vanishes") {
  SimState s = reference_state(64);
  s = apply_perturbation(s, {1, 1e-3, PerturbationFamily::Kind::velocity});
  const double dt = 0.01;
  const SimState out = step_with_rhs(
      s, dt, [](const SimState& st, std::span<const double>) {
        return std::vector<double>(st.n_nodes(), 0.0);
      });
  const double ef = std::exp(-dt);
  for (int i = 0; i < s.n_nodes(); ++i) {
    CHECK(out.zeta_t[i] == doctest::Approx(ef * s.zeta_t[i]).epsilon(1e-13));
    // zeta integrates (1 - e^{-dt}) v0 to fourth order
    const double exact = s.zeta[i] + (1.0 - ef) * s.zeta_t[i];
    CHECK(std::abs(out.zeta[i] - exact) <= 1e-12);
  }
}

TEST_CASE("time step guards") {
  const SimState s = reference_state(64);
  const double dt = stable_dt(s);
  CHECK(dt > 0.0);
  CHECK(dt <= 0.1);
  CHECK_THROWS_AS(step(s, 1.0), CflViolation);
  CHECK_THROWS_AS(evolve(s, -1.0, 0.5), ValidationError);
}

TEST_CASE("degenerate flow map is detected") {
  const SimState s = reference_state(64);
  std::vector<double> z(s.n_nodes(), -0.95);
  CHECK_THROWS_AS(spatial_rhs(s, z), JacobianDegenerate);
}

TEST_CASE("evolution is bitwise deterministic") {
  SimState s = reference_state(64);
  s = apply_perturbation(s, {1, 1e-3, PerturbationFamily::Kind::displacement});
  const Trajectory a = evolve(s, 2.0, 0.5);
  const Trajectory b = evolve(s, 2.0, 0.5);
  REQUIRE(a.states.size() == b.states.size());
  for (size_t k = 0; k < a.states.size(); ++k)
    for (int i = 0; i < s.n_nodes(); ++i) {
      CHECK(a.states[k].zeta[i] == b.states[k].zeta[i]);
      CHECK(a.states[k].zeta_t[i] == b.states[k].zeta_t[i]);
    }
}

TEST_CASE("perturbation energy decays") {
  SimState s = reference_state(128);
  s = apply_perturbation(s, {1, 1e-3, PerturbationFamily::Kind::displacement});
  const Trajectory traj = evolve(s, 6.0, 1.0);
  REQUIRE(traj.reports.size() >= 2);
  CHECK(traj.reports.front().total > 0.0);
  CHECK(traj.reports.back().total < traj.reports.front().total);
}

TEST_CASE("closure extrapolation reproduces smooth fields") {
  const SimState s = reference_state(128);
  const SpatialScheme& sc = *s.scheme;
  CHECK(sc.last_evolved < s.n_nodes() - 1);
  std::vector<double> f(s.n_nodes());
  for (int i = 0; i < s.n_nodes(); ++i) {
    const double y = s.grid->nodes[i];
    f[i] = 1.0 + y + 0.5 * y * y - 0.1 * y * y * y;  // degree <= 4: exact
  }
  std::vector<double> g = f;
  for (int i = sc.last_evolved + 1; i < s.n_nodes(); ++i) g[i] = 1e9;
  enforce_closure(sc, g);
  for (int i = 0; i < s.n_nodes(); ++i)
    CHECK(g[i] == doctest::Approx(f[i]).epsilon(1e-11));
}
