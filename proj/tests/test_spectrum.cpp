#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "corevac/solver.hpp"
#include "corevac/spectrum.hpp"

using namespace corevac;

namespace {

EquilibriumProfile reference_profile() {
  return EquilibriumProfile::from_radius({5.0 / 3.0, 1.0, 1.0, 1.0, 0.0}, 2.5);
}

// Converged values from an independent shooting integration of the
// linearized radial problem (gamma = 5/3, A = g0 = r0 = 1, R = 5/2).
const double kMuReference[6] = {0.4615034635, 1.3563658572, 2.6936422716,
                                4.4746118362, 6.6998127140, 9.3695027108};

}  // namespace

TEST_CASE("lowest eigenvalues match the shooting reference") {
  const SpectrumResult r = compute_spectrum(reference_profile(), 256, 2.0, 6);
  REQUIRE(r.n_modes == 6);
  for (int k = 0; k < 6; ++k) {
    CAPTURE(k);
    CHECK(std::abs(r.modes[k].mu - kMuReference[k]) / kMuReference[k] <= 1e-6);
    CHECK(r.modes[k].residual <= 1e-8);
  }
  for (int k = 1; k < 6; ++k) CHECK(r.modes[k].mu > r.modes[k - 1].mu);
  // mu_min > 1/4: the decay rate saturates at the damping rate
  CHECK(r.predicted_delta == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadratic roots attached to each mode") {
  const SpectrumResult r = compute_spectrum(reference_profile(), 64, 2.0, 4);
  for (const Mode& m : r.modes) {
    const auto res = [&](std::complex<double> l) {
      return std::abs(l * l + l + m.mu);
    };
    CHECK(res(m.lambda_plus) <= 1e-12);
    CHECK(res(m.lambda_minus) <= 1e-12);
    if (m.mu > 0.25) {
      CHECK(m.lambda_plus.real() == doctest::Approx(-0.5).epsilon(1e-12));
      CHECK(m.lambda_plus.imag() > 0.0);
    }
  }
}

TEST_CASE("predicted decay rate formula") {
  SpectrumResult r;
  r.modes.push_back({3.0 / 16.0, {}, {}, 0.0});
  // 1 - sqrt(1 - 3/4) = 1/2
  CHECK(predicted_delta(r) == doctest::Approx(0.5).epsilon(1e-14));
  r.modes.push_back({2.0, {}, {}, 0.0});
  CHECK(predicted_delta(r) == doctest::Approx(0.5).epsilon(1e-14));
  r.modes.push_back({-1.0, {}, {}, 0.0});
  CHECK_THROWS_AS(predicted_delta(r), UnstableMode);
  SpectrumResult empty;
  CHECK_THROWS_AS(predicted_delta(empty), EigensolverFailure);
}

TEST_CASE("mesh refinement leaves the low modes in place") {
  const EquilibriumProfile p = reference_profile();
  const SpectrumResult coarse = compute_spectrum(p, 64, 2.0, 3);
  const SpectrumResult fine = compute_spectrum(p, 128, 2.0, 3);
  for (int k = 0; k < 3; ++k)
    CHECK(std::abs(coarse.modes[k].mu - fine.modes[k].mu) / fine.modes[k].mu <=
          1e-5);
}

TEST_CASE("linearized operator agrees with the nonlinear one at small amplitude") {
  const EquilibriumProfile p = reference_profile();
  auto profile = std::make_shared<const EquilibriumProfile>(p);
  auto grid = std::make_shared<const Grid>(build_grid(p, 128, 2.0));
  const SimState base = make_equilibrium_state(profile, grid);

  const int n = base.n_nodes();
  std::vector<double> v(n);
  const double r0 = 1.0, R = 2.5;
  for (int i = 0; i < n; ++i) {
    const double s =
        std::sin(std::numbers::pi * (grid->nodes[i] - r0) / (2.0 * (R - r0)));
    v[i] = s * s * s;
  }
  v[0] = 0.0;
  enforce_closure(*base.scheme, v);

  const std::vector<double> lv = apply_linearized(p, *grid, v);
  const double eps = 1e-6;
  std::vector<double> zp(n), zm(n);
  for (int i = 0; i < n; ++i) {
    zp[i] = eps * v[i];
    zm[i] = -eps * v[i];
  }
  const std::vector<double> fp = spatial_rhs(base, zp);
  const std::vector<double> fm = spatial_rhs(base, zm);
  double scale = 0.0;
  for (double x : lv) scale = std::max(scale, std::abs(x));
  for (int i = 1; i <= base.scheme->last_evolved; ++i) {
    const double num = (fp[i] - fm[i]) / (2.0 * eps);
    CHECK(std::abs(num - lv[i]) <= 1e-4 * scale);
  }
}

TEST_CASE("reduced system shape") {
  const EquilibriumProfile p = reference_profile();
  const Grid grid = build_grid(p, 64, 2.0);
  const LinearizedSystem sys = assemble_linearized(p, grid);
  CHECK(sys.last_evolved < grid.n_nodes() - 1);
  CHECK(sys.L.rows() == sys.last_evolved);
  CHECK(sys.L.cols() == sys.last_evolved);
  CHECK(sys.W.size() == sys.last_evolved);
}
