#include <doctest.h>

#include <cmath>
#include <random>

#include "qmlab/errors.hpp"
#include "qmlab/madelung.hpp"
#include "qmlab/medium.hpp"
#include "qmlab/solver.hpp"
#include "qmlab/spectral.hpp"

using namespace qmlab;

namespace {

// Exact solution of the free equation: a superposition of plane waves,
// psi(x,t) = sum_j c_j exp(i(k_j x - hbar k_j^2 t / 2m)).
GridState free_superposition(const Grid& grid, const PhysicalParams& params,
                             const std::vector<int>& modes,
                             const std::vector<double>& coeffs, double t) {
  GridState s(grid);
  s.time = t;
  for (std::size_t i = 0; i < grid.shape[0]; ++i) {
    const double x = grid.coordinate(0, i);
    std::complex<double> v = 0.0;
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const double k = 2.0 * M_PI * modes[j] / grid.box[0];
      const double phase = k * x - params.hbar * k * k * t / (2.0 * params.mass);
      v += coeffs[j] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    s.psi[i] = v;
  }
  return s;
}

}  // namespace

TEST_CASE("plane wave: uniform density, uniform velocity, vanishing Q") {
  const Grid grid = Grid::make_1d(128, 2.0 * M_PI);
  const PhysicalParams params{1.0, 1.0, 1.0};
  const double n0 = 2.0, k = 3.0;  // mode 3 of the box
  GridState s(grid);
  for (std::size_t i = 0; i < grid.shape[0]; ++i) {
    const double x = grid.coordinate(0, i);
    s.psi[i] = std::sqrt(n0) *
               std::complex<double>(std::cos(k * x), std::sin(k * x));
  }
  const MadelungFields f = to_fields(s, params);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(f.density[i] == doctest::Approx(n0).epsilon(1e-14));
    CHECK(f.velocity[0][i] == doctest::Approx(k).epsilon(1e-12));  // hbar k/m
    CHECK(std::abs(f.quantum_potential[i]) < 1e-9);
  }
}

TEST_CASE("density equals |psi|^2 exactly") {
  const Grid grid = Grid::make_1d(64, 5.0);
  GridState s(grid);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : s.psi.span()) v = {u(rng) + 1.5, u(rng)};
  const MadelungFields f = to_fields(s, PhysicalParams{});
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(f.density[i] == std::norm(s.psi[i]));
}

TEST_CASE("Gaussian packet: Q(0) = hbar^2 / (2 m sigma^2) at the center") {
  // With n = e^{-x^2/sigma^2}: Q(x) = -(hbar^2/2m)(x^2/sigma^4 - 1/sigma^2),
  // so Q(0) = 0.5 at hbar = m = sigma = 1.
  const Grid grid = Grid::make_1d(512, 40.0);
  const PhysicalParams params{1.0, 1.0, 1.0};
  GridState s(grid);
  const double x0 = 20.0;
  for (std::size_t i = 0; i < grid.shape[0]; ++i) {
    const double x = grid.coordinate(0, i) - x0;
    s.psi[i] = std::exp(-0.5 * x * x);
  }
  const MadelungFields f = to_fields(s, params);
  const std::size_t center = 256;  // x = x0
  CHECK(f.quantum_potential[center] == doctest::Approx(0.5).epsilon(1e-8));

  // independent finite-difference check of lap(sqrt n)/sqrt n at the center
  const double h = grid.spacing(0);
  auto amp = [&](std::size_t i) { return std::abs(s.psi[i]); };
  const double lap_fd =
      (amp(center + 1) - 2.0 * amp(center) + amp(center - 1)) / (h * h);
  const double q_fd = -0.5 * lap_fd / amp(center);
  CHECK(f.quantum_potential[center] == doctest::Approx(q_fd).epsilon(1e-3));

  // vacuum tail is reported as undefined
  CHECK(std::isnan(f.quantum_potential[0]));
  CHECK(std::isnan(f.velocity[0][0]));
}

TEST_CASE("the two algebraic forms of the quantum potential agree") {
  const Grid grid = Grid::make_1d(256, 2.0 * M_PI);
  const PhysicalParams params{1.3, 0.7, 1.0};
  std::vector<double> n(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coordinate(0, i);
    n[i] = 1.0 + 0.4 * std::cos(x) + 0.15 * std::sin(2.0 * x);
  }
  const auto q1 = quantum_potential_sqrt_form(grid, n, params);
  const auto q2 = quantum_potential_log_form(grid, n, params);
  double max_q = 0.0, max_diff = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    max_q = std::max(max_q, std::abs(q1[i]));
    max_diff = std::max(max_diff, std::abs(q1[i] - q2[i]));
  }
  CHECK(max_diff < 1e-10 * max_q);
}

TEST_CASE("field round trip: smooth density and curl-free velocity") {
  const Grid grid = Grid::make_1d(256, 10.0);
  const PhysicalParams params{1.0, 0.8, 1.0};
  MadelungFields f;
  f.grid = grid;
  f.density.resize(grid.size());
  f.velocity[0].resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coordinate(0, i) * 2.0 * M_PI / 10.0;
    f.density[i] = 1.0 + 0.3 * std::cos(x) + 0.1 * std::sin(2.0 * x);
    // u = grad(S)/m with S = 0.2 sin(x) + 0.05 cos(2x) (periodic, curl-free)
    f.velocity[0][i] = (0.2 * std::cos(x) - 0.1 * std::sin(2.0 * x)) *
                       (2.0 * M_PI / 10.0) / params.mass;
  }
  const GridState s = from_fields(f, params);
  const MadelungFields r = to_fields(s, params);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(r.density[i] == doctest::Approx(f.density[i]).epsilon(1e-13));
    num += std::pow(r.velocity[0][i] - f.velocity[0][i], 2);
    den += std::pow(f.velocity[0][i], 2);
  }
  CHECK(std::sqrt(num / den) < 1e-8);
}

TEST_CASE("round trip of a plane wave reproduces the winding") {
  const Grid grid = Grid::make_1d(128, 2.0 * M_PI);
  const PhysicalParams params{1.0, 1.0, 1.0};
  GridState s(grid);
  for (std::size_t i = 0; i < grid.shape[0]; ++i) {
    const double x = grid.coordinate(0, i);
    s.psi[i] = std::complex<double>(std::cos(2.0 * x), std::sin(2.0 * x));
  }
  const MadelungFields f = to_fields(s, params);
  const GridState r = from_fields(f, params);
  // Global phase is arbitrary; compare psi up to the phase at one point.
  const std::complex<double> rot = s.psi[5] / r.psi[5];
  CHECK(std::abs(std::abs(rot) - 1.0) < 1e-12);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(r.psi[i] * rot - s.psi[i]) < 1e-10);
}

TEST_CASE("from_fields rejects the classical limit") {
  const Grid grid = Grid::make_1d(64, 1.0);
  MadelungFields f;
  f.grid = grid;
  f.density.assign(grid.size(), 1.0);
  f.velocity[0].assign(grid.size(), 0.0);
  CHECK_THROWS_AS(from_fields(f, PhysicalParams{1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("from_fields rejects rotational velocity fields") {
  const Grid grid = Grid::make_2d(32, 32, 2.0 * M_PI, 2.0 * M_PI);
  const PhysicalParams params{1.0, 1.0, 1.0};
  MadelungFields f;
  f.grid = grid;
  f.density.assign(grid.size(), 1.0);
  f.velocity[0].resize(grid.size());
  f.velocity[1].assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.shape[0]; ++i)
    for (std::size_t j = 0; j < grid.shape[1]; ++j) {
      const double y = grid.coordinate(1, j);
      f.velocity[0][i * grid.shape[1] + j] = std::cos(y);  // curl = sin(y)
    }
  CHECK_THROWS_AS(from_fields(f, params), InconsistentFieldsError);
}

TEST_CASE("degenerate all-zero field is rejected") {
  const Grid grid = Grid::make_1d(32, 1.0);
  GridState s(grid);
  CHECK_THROWS_AS(to_fields(s, PhysicalParams{}), DegenerateStateError);
}

TEST_CASE("evolved 2-d states stay irrotational away from vacuum") {
  const Grid grid = Grid::make_2d(64, 64, 2.0 * M_PI, 2.0 * M_PI);
  const PhysicalParams params{1.0, 1.0, 1.0};
  GridState s(grid);
  for (std::size_t i = 0; i < grid.shape[0]; ++i)
    for (std::size_t j = 0; j < grid.shape[1]; ++j) {
      const double x = grid.coordinate(0, i), y = grid.coordinate(1, j);
      const double phase = 0.3 * std::sin(x) + 0.2 * std::cos(y);
      s.psi[i * grid.shape[1] + j] =
          std::sqrt(1.0 + 0.2 * std::cos(x + y)) *
          std::complex<double>(std::cos(phase), std::sin(phase));
    }

  // Evolve the vortex-free initial data for a while before checking.
  presets::BecContact preset;
  preset.g = 0.5;
  const MediumSpec medium = build_medium(preset);
  SolverConfig cfg;
  cfg.dt = 0.9 * SolverConfig::max_stable_dt(grid, params, 0.5);
  Stepper stepper(medium, cfg, grid);
  stepper.advance(s, 200);

  const MadelungFields f = to_fields(s, params);
  SpectralOps ops(grid);
  const auto duy_dx = ops.derivative(f.velocity[1], 0);
  const auto dux_dy = ops.derivative(f.velocity[0], 1);
  double max_u = 0.0, max_curl = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    max_u = std::max({max_u, std::abs(f.velocity[0][i]),
                      std::abs(f.velocity[1][i])});
    max_curl = std::max(max_curl, std::abs(duy_dx[i] - dux_dy[i]));
  }
  CHECK(max_curl <= 1e-6 * max_u);
}

TEST_CASE("hydrodynamic residual: plane-wave eigenmode sits at the floor") {
  const Grid grid = Grid::make_1d(128, 2.0 * M_PI);
  presets::Free preset;
  const MediumSpec medium = build_medium(preset);
  const double dt = 1e-3;
  const GridState a =
      free_superposition(grid, medium.params, {2}, {1.0}, 0.0);
  const GridState b =
      free_superposition(grid, medium.params, {2}, {1.0}, dt);
  const ResidualNorms r = hydrodynamic_residual(a, b, medium);
  CHECK(r.continuity < 1e-10);
  CHECK(r.euler < 1e-10);
}

TEST_CASE("hydrodynamic residual converges at second order in the pair "
          "spacing") {
  const Grid grid = Grid::make_1d(256, 2.0 * M_PI);
  presets::Free preset;
  const MediumSpec medium = build_medium(preset);
  const std::vector<int> modes{0, 1, 2};
  const std::vector<double> coeffs{1.0, 0.2, 0.1};

  auto residual_at = [&](double dt) {
    const GridState a =
        free_superposition(grid, medium.params, modes, coeffs, 0.1);
    const GridState b =
        free_superposition(grid, medium.params, modes, coeffs, 0.1 + dt);
    return hydrodynamic_residual(a, b, medium);
  };
  const ResidualNorms r1 = residual_at(4e-2);
  const ResidualNorms r2 = residual_at(2e-2);
  const ResidualNorms r4 = residual_at(1e-2);
  const double order_c = std::log2(r1.continuity / r2.continuity);
  const double order_c2 = std::log2(r2.continuity / r4.continuity);
  const double order_e = std::log2(r1.euler / r2.euler);
  CHECK(order_c == doctest::Approx(2.0).epsilon(0.1));
  CHECK(order_c2 == doctest::Approx(2.0).epsilon(0.1));
  CHECK(order_e == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("solver state pairs satisfy the balances at second order in the "
          "step") {
  const Grid grid = Grid::make_1d(256, 2.0 * M_PI);
  presets::BecContact preset;
  preset.g = 1.0;
  const MediumSpec medium = build_medium(preset);

  auto residual_for = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    Stepper stepper(medium, cfg, grid);
    GridState s(grid);
    for (std::size_t i = 0; i < grid.shape[0]; ++i) {
      const double x = grid.coordinate(0, i);
      s.psi[i] = std::sqrt(1.0 + 0.05 * std::cos(x));
    }
    stepper.advance(s, std::lround(0.1 / dt));
    const GridState a = s.clone();
    stepper.step(s);
    return hydrodynamic_residual(a, s, medium);
  };
  const ResidualNorms r1 = residual_for(1.6e-4);
  const ResidualNorms r2 = residual_for(0.8e-4);
  CHECK(r1.continuity / r2.continuity == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("corrupted states light up the residual (negative control)") {
  const Grid grid = Grid::make_1d(256, 2.0 * M_PI);
  presets::Free preset;
  const MediumSpec medium = build_medium(preset);
  const std::vector<int> modes{0, 1};
  const std::vector<double> coeffs{1.0, 0.2};
  const double dt = 1e-2;
  GridState a = free_superposition(grid, medium.params, modes, coeffs, 0.1);
  GridState b =
      free_superposition(grid, medium.params, modes, coeffs, 0.1 + dt);
  const ResidualNorms clean = hydrodynamic_residual(a, b, medium);

  // Scale psi by 2 in half the box.
  for (std::size_t i = 0; i < grid.size() / 2; ++i) b.psi[i] *= 2.0;
  const ResidualNorms bad = hydrodynamic_residual(a, b, medium);
  CHECK(bad.continuity > 1e3 * clean.continuity);
}
