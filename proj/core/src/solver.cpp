#include "qmlab/solver.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "qmlab/errors.hpp"
#include "qmlab/numerics.hpp"
#include "qmlab/potential.hpp"

namespace qmlab {

double SolverConfig::max_stable_dt(const Grid& grid,
                                   const PhysicalParams& params,
                                   double safety) {
  if (!(params.hbar > 0.0)) return std::numeric_limits<double>::infinity();
  const double dx = grid.min_spacing();
  return safety * 2.0 * params.mass * dx * dx / (M_PI * params.hbar);
}

void SolverConfig::validate(const Grid& grid,
                            const PhysicalParams& params) const {
  if (!(dt > 0.0)) throw ConfigurationError("solver: dt must be > 0");
  if (!(stability_safety > 0.0))
    throw ConfigurationError("solver: stability_safety must be > 0");
  const double bound = max_stable_dt(grid, params, stability_safety);
  if (dt > bound)
    throw ConfigurationError(
        "solver: dt " + format_sci(dt) +
        " exceeds the kinetic-phase rotation bound " + format_sci(bound));
}

std::complex<double> kinetic_phase_factor(const PhysicalParams& params,
                                          double k_sq, double dt) {
  const double theta = -params.hbar * k_sq * dt / (2.0 * params.mass);
  return {std::cos(theta), std::sin(theta)};
}

Stepper::Stepper(const MediumSpec& medium, const SolverConfig& cfg,
                 const Grid& grid)
    : medium_(medium),
      cfg_(cfg),
      grid_(grid),
      fft_(grid),
      scratch_(grid.size()) {
  if (!(medium.params.hbar > 0.0))
    throw ConfigurationError(
        "solver: hbar = 0 cannot be integrated directly; approximate the "
        "classical limit with a small effective hbar (--classical-hbar)");
  cfg_.validate(grid, medium.params);

  has_kernel_ = !medium_.kernel.is_none();
  has_local_ = has_kernel_ || !medium_.nonlinearity.is_none();
  dealias_ = cfg_.dealias.value_or(!medium_.nonlinearity.is_none());
  if (has_kernel_)
    vk_table_ = kernel_mode_table(grid_, medium_.kernel, medium_.potential_mode);

  const std::size_t n = grid_.size();
  kin_phase_.resize(n);
  kin_phase_rev_.resize(n);
  const std::size_t n0 = grid_.shape[0], n1 = grid_.shape[1],
                    n2 = grid_.shape[2];
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < n0; ++i0)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
        const std::size_t idxs[3] = {i0, i1, i2};
        double k2 = 0.0;
        bool masked = false;
        for (int a = 0; a < grid_.dims; ++a) {
          const std::size_t na = grid_.shape[a];
          const long m = (idxs[a] <= na / 2)
                             ? static_cast<long>(idxs[a])
                             : static_cast<long>(idxs[a]) - static_cast<long>(na);
          if (dealias_ && 3 * std::labs(m) > static_cast<long>(na))
            masked = true;
          const double k = grid_.wavenumber(a, idxs[a]);
          k2 += k * k;
        }
        if (masked) {
          kin_phase_[idx] = 0.0;
          kin_phase_rev_[idx] = 0.0;
        } else {
          kin_phase_[idx] = kinetic_phase_factor(medium_.params, k2, cfg_.dt);
          kin_phase_rev_[idx] = std::conj(kin_phase_[idx]);
        }
      }

  density_.resize(n);
  phi_.assign(n, 0.0);
  mu_.resize(n);
}

void Stepper::compute_density(const GridState& state) {
  const std::size_t n = grid_.size();
  for (std::size_t i = 0; i < n; ++i) density_[i] = std::norm(state.psi[i]);
}

void Stepper::compute_phi() {
  if (!has_kernel_) return;
  const std::size_t n = grid_.size();
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = density_[i];
  fft_.forward(scratch_.data());
  for (std::size_t i = 0; i < n; ++i) scratch_[i] *= vk_table_[i];
  fft_.backward(scratch_.data());
  for (std::size_t i = 0; i < n; ++i) phi_[i] = scratch_[i].real();
}

// psi *= exp(-i (Phi + mu(n)) dt / hbar); density_ and phi_ must be current.
void Stepper::local_kick(GridState& state, double dt) {
  if (!has_local_) return;
  const std::size_t n = grid_.size();
  medium_.nonlinearity.mu_field(density_, mu_);
  const double scale = -dt / medium_.params.hbar;
  if (has_kernel_) {
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = scale * (phi_[i] + mu_[i]);
      state.psi[i] *= std::complex<double>(std::cos(theta), std::sin(theta));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = scale * mu_[i];
      state.psi[i] *= std::complex<double>(std::cos(theta), std::sin(theta));
    }
  }
}

void Stepper::kinetic_kick(GridState& state, double sign) {
  const std::size_t n = grid_.size();
  const auto& table = (sign >= 0.0) ? kin_phase_ : kin_phase_rev_;
  fft_.forward(state.psi.data());
  for (std::size_t i = 0; i < n; ++i) state.psi[i] *= table[i];
  fft_.backward(state.psi.data());
}

void Stepper::check_finite(const GridState& state) const {
  double sum = 0.0;
  for (const auto& v : state.psi.span()) sum += std::norm(v);
  if (!std::isfinite(sum))
    throw BlowupError("field overflowed (deep collapse?) at t = " +
                          format_sci(state.time),
                      state.time);
}

void Stepper::step(GridState& state) {
  if (!(state.grid == grid_))
    throw ConfigurationError("solver: state grid does not match stepper grid");
  compute_density(state);
  compute_phi();
  local_kick(state, 0.5 * cfg_.dt);
  kinetic_kick(state, +1.0);
  compute_density(state);
  compute_phi();
  local_kick(state, 0.5 * cfg_.dt);
  state.time += cfg_.dt;
  check_finite(state);
}

void Stepper::step_reversed(GridState& state) {
  if (!(state.grid == grid_))
    throw ConfigurationError("solver: state grid does not match stepper grid");
  compute_density(state);
  compute_phi();
  local_kick(state, -0.5 * cfg_.dt);
  kinetic_kick(state, -1.0);
  compute_density(state);
  compute_phi();
  local_kick(state, -0.5 * cfg_.dt);
  state.time -= cfg_.dt;
  check_finite(state);
}

void Stepper::advance(GridState& state, long nsteps, long sample_every,
                      const SampleFn& on_sample) {
  if (!(state.grid == grid_))
    throw ConfigurationError("solver: state grid does not match stepper grid");
  if (nsteps <= 0) return;
  // First-same-as-last merge: the trailing half kick of one step and the
  // leading half kick of the next share the same density, hence the same
  // local phase, and fuse into one full kick.
  compute_density(state);
  compute_phi();
  local_kick(state, 0.5 * cfg_.dt);
  for (long j = 1; j <= nsteps; ++j) {
    kinetic_kick(state, +1.0);
    compute_density(state);
    compute_phi();
    local_kick(state, (j < nsteps) ? cfg_.dt : 0.5 * cfg_.dt);
    state.time += cfg_.dt;
    check_finite(state);
    if (on_sample && sample_every > 0 && j % sample_every == 0)
      on_sample(state, density_);
  }
}

StepReport Stepper::report(const GridState& state) const {
  StepReport r;
  r.time = state.time;
  const std::size_t n = grid_.size();
  const double dv = grid_.cell_volume();

  std::vector<double> density(n);
  double max2 = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    density[i] = std::norm(state.psi[i]);
    norm += density[i];
    max2 = std::max(max2, density[i]);
  }
  r.norm = norm * dv;
  r.max_abs_psi = std::sqrt(max2);

  // Kinetic energy via Parseval: (hbar^2/2m) sum k^2 |psi_hat|^2 dV / N.
  AlignedBuffer<std::complex<double>> work(n);
  for (std::size_t i = 0; i < n; ++i) work[i] = state.psi[i];
  fft_.forward(work.data());
  const std::size_t n0 = grid_.shape[0], n1 = grid_.shape[1],
                    n2 = grid_.shape[2];
  double ekin = 0.0;
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < n0; ++i0)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
        const std::size_t idxs[3] = {i0, i1, i2};
        double k2 = 0.0;
        for (int a = 0; a < grid_.dims; ++a) {
          const double k = grid_.wavenumber(a, idxs[a]);
          k2 += k * k;
        }
        ekin += k2 * std::norm(work[idx]);
      }
  const double hbar = medium_.params.hbar;
  r.e_kinetic = hbar * hbar / (2.0 * medium_.params.mass) * ekin * dv /
                static_cast<double>(n);

  if (has_kernel_) {
    const std::vector<double> phi = nonlocal_potential(
        grid_, density, medium_.kernel, medium_.potential_mode);
    double eint = 0.0;
    for (std::size_t i = 0; i < n; ++i) eint += phi[i] * density[i];
    r.e_interaction = 0.5 * eint * dv;
  }
  if (!medium_.nonlinearity.is_none()) {
    double enl = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      enl += medium_.nonlinearity.energy_density(density[i]);
    r.e_nonlinear = enl * dv;
  }
  return r;
}

void write_report_csv_header(std::ostream& out, const Provenance& prov) {
  out << prov.comment_line() << "\n";
  out << "t,N,E_kin,E_int,E_nl,max_psi\n";
}

void write_report_csv_row(std::ostream& out, const StepReport& r) {
  out << format_sci(r.time) << "," << format_sci(r.norm) << ","
      << format_sci(r.e_kinetic) << "," << format_sci(r.e_interaction) << ","
      << format_sci(r.e_nonlinear) << "," << format_sci(r.max_abs_psi) << "\n";
}

}  // namespace qmlab
