#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qmlab/dispersion.hpp"
#include "qmlab/experiments.hpp"
#include "qmlab/madelung.hpp"
#include "qmlab/potential.hpp"
#include "qmlab/solver.hpp"

using namespace qmlab;
using namespace qmlab::presets;

namespace {

MediumSpec contact_medium() {
  BecContact p;
  p.g = 1.0;
  return build_medium(p);
}

MediumSpec gravity_medium() {
  SelfGravity p;
  p.omega_j = 1.0;
  return build_medium(p);
}

GridState seeded_state(const Grid& grid, const MediumSpec& medium) {
  PerturbationSpec pert;
  pert.amplitude = 1e-3;
  return seed(uniform_state(grid, medium.params.n0), pert, medium.params);
}

void bench_step(benchmark::State& state, const MediumSpec& medium) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid grid = Grid::make_1d(n, 4.0 * M_PI);
  SolverConfig cfg;
  cfg.dt = 0.9 * SolverConfig::max_stable_dt(grid, medium.params, 0.5);
  Stepper stepper(medium, cfg, grid);
  GridState s = seeded_state(grid, medium);
  for (auto _ : state) {
    stepper.step(s);
    benchmark::DoNotOptimize(s.psi.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_step_contact_1d(benchmark::State& state) {
  bench_step(state, contact_medium());
}
BENCHMARK(BM_step_contact_1d)->Arg(1 << 10)->Arg(1 << 12)->Arg(1 << 14);

void BM_step_gravity_1d(benchmark::State& state) {
  bench_step(state, gravity_medium());
}
BENCHMARK(BM_step_gravity_1d)->Arg(1 << 10)->Arg(1 << 12)->Arg(1 << 14);

// The merged advance loop fuses adjacent half kicks and reuses the kernel
// convolution; compare its per-step cost with plain step().
void BM_advance_gravity_1d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid grid = Grid::make_1d(n, 4.0 * M_PI);
  const MediumSpec medium = gravity_medium();
  SolverConfig cfg;
  cfg.dt = 0.9 * SolverConfig::max_stable_dt(grid, medium.params, 0.5);
  Stepper stepper(medium, cfg, grid);
  GridState s = seeded_state(grid, medium);
  const long chunk = 64;
  for (auto _ : state) {
    stepper.advance(s, chunk);
    benchmark::DoNotOptimize(s.psi.data());
  }
  state.SetItemsProcessed(state.iterations() * chunk * n);
}
BENCHMARK(BM_advance_gravity_1d)->Arg(1 << 10)->Arg(1 << 12)->Arg(1 << 14);

void BM_step_gravity_2d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid grid = Grid::make_2d(n, n, 4.0 * M_PI, 4.0 * M_PI);
  const MediumSpec medium = gravity_medium();
  SolverConfig cfg;
  cfg.dt = 0.9 * SolverConfig::max_stable_dt(grid, medium.params, 0.5);
  Stepper stepper(medium, cfg, grid);
  GridState s = seeded_state(grid, medium);
  for (auto _ : state) {
    stepper.step(s);
    benchmark::DoNotOptimize(s.psi.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_step_gravity_2d)->Arg(128)->Arg(256);

void BM_nonlocal_potential_3d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid grid = Grid::make_3d(n, 16.0);
  std::vector<double> density(grid.size(), 1.0);
  for (std::size_t i = 0; i < density.size(); ++i)
    density[i] += 1e-3 * std::sin(0.37 * static_cast<double>(i));
  const auto kernel = InteractionKernel::poisson(-1.0);
  for (auto _ : state) {
    auto phi = nonlocal_potential(grid, density, kernel,
                                  ExternalPotentialMode::jeans_swindle);
    benchmark::DoNotOptimize(phi.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_nonlocal_potential_3d)->Arg(32)->Arg(64);

void BM_to_fields(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid grid = Grid::make_1d(n, 4.0 * M_PI);
  const MediumSpec medium = contact_medium();
  const GridState s = seeded_state(grid, medium);
  for (auto _ : state) {
    auto fields = to_fields(s, medium.params);
    benchmark::DoNotOptimize(fields.density.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_to_fields)->Arg(1 << 10)->Arg(1 << 12);

void BM_dispersion_curve(benchmark::State& state) {
  const MediumSpec medium = gravity_medium();
  const auto ks = log_spaced(1e-2, 1e2, 10000);
  for (auto _ : state) {
    auto curve = sample_curve(medium, ks);
    benchmark::DoNotOptimize(curve.omega2.data());
  }
  state.SetItemsProcessed(state.iterations() * ks.size());
}
BENCHMARK(BM_dispersion_curve);

void BM_critical_wavenumber(benchmark::State& state) {
  const MediumSpec medium = gravity_medium();
  for (auto _ : state) {
    auto c = critical_wavenumber(medium);
    benchmark::DoNotOptimize(c.k_star);
  }
}
BENCHMARK(BM_critical_wavenumber);

void BM_fit_mode(benchmark::State& state) {
  const std::size_t n = 4096;
  std::vector<double> t(n);
  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = 0.01 * static_cast<double>(i);
    a[i] = std::cos(1.1180339887 * t[i]);
  }
  for (auto _ : state) {
    auto fit = fit_mode(t, a);
    benchmark::DoNotOptimize(fit.value);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_fit_mode);

}  // namespace

BENCHMARK_MAIN();
