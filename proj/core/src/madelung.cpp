#include "qmlab/madelung.hpp"

#include <cmath>
#include <limits>

#include "qmlab/errors.hpp"
#include "qmlab/potential.hpp"
#include "qmlab/spectral.hpp"

namespace qmlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> quantum_potential_sqrt_form(const Grid& grid,
                                                std::span<const double> density,
                                                const PhysicalParams& params,
                                                double vacuum_abs) {
  SpectralOps ops(grid);
  std::vector<double> amp(density.size());
  for (std::size_t i = 0; i < density.size(); ++i)
    amp[i] = std::sqrt(std::max(density[i], 0.0));
  const std::vector<double> lap = ops.laplacian(amp);
  const double pref =
      -params.hbar * params.hbar / (2.0 * params.mass);
  std::vector<double> q(density.size());
  for (std::size_t i = 0; i < density.size(); ++i)
    q[i] = (density[i] >= vacuum_abs && amp[i] > 0.0) ? pref * lap[i] / amp[i]
                                                      : kNaN;
  return q;
}

std::vector<double> quantum_potential_log_form(const Grid& grid,
                                               std::span<const double> density,
                                               const PhysicalParams& params,
                                               double vacuum_abs) {
  SpectralOps ops(grid);
  const std::vector<double> lap = ops.laplacian(density);
  const auto grad = ops.gradient(density);
  const double pref =
      -params.hbar * params.hbar / (4.0 * params.mass);
  std::vector<double> q(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (!(density[i] >= vacuum_abs) || density[i] <= 0.0) {
      q[i] = kNaN;
      continue;
    }
    double grad2 = 0.0;
    for (int a = 0; a < grid.dims; ++a) grad2 += grad[a][i] * grad[a][i];
    q[i] = pref * (lap[i] / density[i] -
                   0.5 * grad2 / (density[i] * density[i]));
  }
  return q;
}

MadelungFields to_fields(const GridState& state, const PhysicalParams& params,
                         double vacuum_fraction) {
  const Grid& grid = state.grid;
  const std::size_t n = grid.size();
  MadelungFields f;
  f.grid = grid;
  f.time = state.time;
  f.density.resize(n);
  double max_n = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f.density[i] = std::norm(state.psi[i]);
    max_n = std::max(max_n, f.density[i]);
  }
  if (max_n == 0.0)
    throw DegenerateStateError("to_fields: wavefunction is identically zero");
  f.vacuum_threshold = vacuum_fraction * max_n;

  f.phase.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    f.phase[i] = params.hbar * std::arg(state.psi[i]);

  // u = (hbar/m) Im(psi* grad psi) / n, spectral gradient; immune to the
  // branch cuts of differentiating arg(psi).
  SpectralOps ops(grid);
  AlignedBuffer<std::complex<double>> dpsi(n);
  const double vel_pref = params.hbar / params.mass;
  for (int a = 0; a < grid.dims; ++a) {
    ops.derivative_complex(state.psi.span(), a, dpsi.span());
    f.velocity[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (f.density[i] >= f.vacuum_threshold && f.density[i] > 0.0) {
        f.velocity[a][i] =
            vel_pref * std::imag(std::conj(state.psi[i]) * dpsi[i]) /
            f.density[i];
      } else {
        f.velocity[a][i] = kNaN;
      }
    }
  }

  f.quantum_potential =
      quantum_potential_sqrt_form(grid, f.density, params, f.vacuum_threshold);
  return f;
}

GridState from_fields(const MadelungFields& fields,
                      const PhysicalParams& params, double curl_tol) {
  if (!(params.hbar > 0.0))
    throw DomainError(
        "from_fields: hbar = 0 has no wavefunction (phase reconstruction "
        "undefined)");
  const Grid& grid = fields.grid;
  const std::size_t n = grid.size();
  if (fields.density.size() != n)
    throw InputError("from_fields: density size does not match grid");
  for (double d : fields.density)
    if (!(d >= 0.0)) throw InputError("from_fields: density must be >= 0");

  // Mean velocity must be an integer phase winding of the periodic box.
  std::array<double, 3> mean{{0.0, 0.0, 0.0}};
  std::array<long, 3> winding{{0, 0, 0}};
  for (int a = 0; a < grid.dims; ++a) {
    if (fields.velocity[a].size() != n)
      throw InputError("from_fields: velocity size does not match grid");
    double sum = 0.0;
    for (double u : fields.velocity[a]) {
      if (!std::isfinite(u))
        throw InputError("from_fields: velocity contains undefined (vacuum) "
                         "samples");
      sum += u;
    }
    mean[a] = sum / static_cast<double>(n);
    const double w = params.mass * mean[a] * grid.box[a] /
                     (2.0 * M_PI * params.hbar);
    winding[a] = std::lround(w);
    if (std::abs(w - static_cast<double>(winding[a])) >
        1e-6 * (1.0 + std::abs(w)))
      throw InconsistentFieldsError(
          "from_fields: mean velocity is not an integer winding of the "
          "periodic box");
  }

  // Integrate the fluctuating part of m u into a single-valued phase.
  std::array<std::vector<double>, 3> momentum;
  double full_norm2 = 0.0;
  for (int a = 0; a < grid.dims; ++a) {
    momentum[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mu_full = params.mass * fields.velocity[a][i];
      momentum[a][i] = mu_full - params.mass * mean[a];
      full_norm2 += mu_full * mu_full;
    }
  }
  SpectralOps ops(grid);
  const std::vector<double> phase_fluct = ops.potential_of_gradient(momentum);

  // Verify curl-freeness: grad of the integrated phase must reproduce m u'
  // relative to the full velocity scale (a pure winding has zero residual
  // fluctuation and passes trivially).
  double err2 = 0.0;
  for (int a = 0; a < grid.dims; ++a) {
    const std::vector<double> g = ops.derivative(phase_fluct, a);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = g[i] - momentum[a][i];
      err2 += d * d;
    }
  }
  if (full_norm2 > 0.0 && std::sqrt(err2 / full_norm2) > curl_tol)
    throw InconsistentFieldsError(
        "from_fields: velocity field is not curl-free within tolerance");

  GridState state(grid);
  state.time = fields.time;
  const std::size_t n0 = grid.shape[0], n1 = grid.shape[1], n2 = grid.shape[2];
  std::size_t idx = 0;
  const double inv_hbar = 1.0 / params.hbar;
  for (std::size_t i0 = 0; i0 < n0; ++i0)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
        double wind_phase = 0.0;
        const std::size_t idxs[3] = {i0, i1, i2};
        for (int a = 0; a < grid.dims; ++a)
          wind_phase += 2.0 * M_PI * static_cast<double>(winding[a]) *
                        static_cast<double>(idxs[a]) /
                        static_cast<double>(grid.shape[a]);
        const double theta = phase_fluct[idx] * inv_hbar + wind_phase;
        state.psi[idx] = std::sqrt(fields.density[idx]) *
                         std::complex<double>(std::cos(theta), std::sin(theta));
      }
  return state;
}

namespace {

struct EulerTerms {
  std::vector<double> flux_div;                 // div(n u)
  std::array<std::vector<double>, 3> balance;   // m (u.grad)u + grad(Phi+mu+Q)
};

EulerTerms balance_terms(const MadelungFields& f, const MediumSpec& medium,
                         SpectralOps& ops) {
  const Grid& grid = f.grid;
  const std::size_t n = grid.size();

  EulerTerms t;
  std::array<std::vector<double>, 3> nu;
  for (int a = 0; a < grid.dims; ++a) {
    nu[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) nu[a][i] = f.density[i] * f.velocity[a][i];
  }
  t.flux_div = ops.divergence(nu);

  const std::vector<double> phi = nonlocal_potential(
      grid, f.density, medium.kernel, medium.potential_mode);
  std::vector<double> mu_field(n);
  medium.nonlinearity.mu_field(f.density, mu_field);

  // Local potential sum Phi + mu + Q; gradients taken spectrally at once.
  std::vector<double> local(n);
  for (std::size_t i = 0; i < n; ++i)
    local[i] = phi[i] + mu_field[i] + f.quantum_potential[i];
  const auto grad_local = ops.gradient(local);

  for (int c = 0; c < grid.dims; ++c) {
    t.balance[c].assign(n, 0.0);
    // m (u . grad) u_c
    const std::vector<double> du_c_all = f.velocity[c];
    for (int a = 0; a < grid.dims; ++a) {
      const std::vector<double> d = ops.derivative(du_c_all, a);
      for (std::size_t i = 0; i < n; ++i)
        t.balance[c][i] += medium.params.mass * f.velocity[a][i] * d[i];
    }
    for (std::size_t i = 0; i < n; ++i) t.balance[c][i] += grad_local[c][i];
  }
  return t;
}

}  // namespace

ResidualNorms hydrodynamic_residual(const GridState& earlier,
                                    const GridState& later,
                                    const MediumSpec& medium) {
  if (!(earlier.grid == later.grid))
    throw InputError("hydrodynamic_residual: states on different grids");
  const double dt = later.time - earlier.time;
  if (dt == 0.0)
    throw InputError("hydrodynamic_residual: states must differ in time");

  const MadelungFields fa = to_fields(earlier, medium.params);
  const MadelungFields fb = to_fields(later, medium.params);
  const Grid& grid = earlier.grid;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(fa.quantum_potential[i]) ||
        !std::isfinite(fb.quantum_potential[i]))
      throw InputError(
          "hydrodynamic_residual: state contains vacuum regions");

  SpectralOps ops(grid);
  const EulerTerms ta = balance_terms(fa, medium, ops);
  const EulerTerms tb = balance_terms(fb, medium, ops);

  const double dv = grid.cell_volume();
  double cont2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (fb.density[i] - fa.density[i]) / dt +
                     0.5 * (ta.flux_div[i] + tb.flux_div[i]);
    cont2 += r * r;
  }

  double euler2 = 0.0;
  for (int c = 0; c < grid.dims; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r =
          medium.params.mass * (fb.velocity[c][i] - fa.velocity[c][i]) / dt +
          0.5 * (ta.balance[c][i] + tb.balance[c][i]);
      euler2 += r * r;
    }
  }
  return {std::sqrt(cont2 * dv), std::sqrt(euler2 * dv)};
}

}  // namespace qmlab
