#include <benchmark/benchmark.h>

#include "corevac/diagnostics.hpp"
#include "corevac/solver.hpp"
#include "corevac/spectrum.hpp"

namespace {

corevac::SimState reference_state(int n_cells) {
  corevac::GasParameters gas{5.0 / 3.0, 1.0, 1.0, 1.0, 0.0};
  auto profile = std::make_shared<const corevac::EquilibriumProfile>(
      corevac::EquilibriumProfile::from_radius(gas, 2.5));
  auto grid = std::make_shared<const corevac::Grid>(
      corevac::build_grid(*profile, n_cells, 2.0));
  corevac::SimState state = corevac::make_equilibrium_state(profile, grid);
  return corevac::apply_perturbation(
      state, {1, 0.01, corevac::PerturbationFamily::Kind::displacement});
}

void bm_acceleration(benchmark::State& bs) {
  const corevac::SimState state = reference_state(static_cast<int>(bs.range(0)));
  for (auto _ : bs) benchmark::DoNotOptimize(corevac::acceleration(state));
}
BENCHMARK(bm_acceleration)->Arg(128)->Arg(256)->Arg(512);

void bm_step(benchmark::State& bs) {
  corevac::SimState state = reference_state(static_cast<int>(bs.range(0)));
  const double dt = corevac::stable_dt(state);
  for (auto _ : bs) {
    state = corevac::step(state, dt);
    benchmark::DoNotOptimize(state.zeta.data());
  }
}
BENCHMARK(bm_step)->Arg(128)->Arg(256)->Arg(512);

void bm_energy_report(benchmark::State& bs) {
  const corevac::SimState state = reference_state(static_cast<int>(bs.range(0)));
  for (auto _ : bs) benchmark::DoNotOptimize(corevac::energy_report(state));
}
BENCHMARK(bm_energy_report)->Arg(128)->Arg(256);

void bm_assemble_linearized(benchmark::State& bs) {
  corevac::GasParameters gas{5.0 / 3.0, 1.0, 1.0, 1.0, 0.0};
  const auto profile = corevac::EquilibriumProfile::from_radius(gas, 2.5);
  const auto grid = corevac::build_grid(profile, static_cast<int>(bs.range(0)), 2.0);
  for (auto _ : bs)
    benchmark::DoNotOptimize(corevac::assemble_linearized(profile, grid));
}
BENCHMARK(bm_assemble_linearized)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
