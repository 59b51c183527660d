#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qmlab/fft.hpp"
#include "qmlab/grid.hpp"
#include "qmlab/medium.hpp"
#include "qmlab/provenance.hpp"

namespace qmlab {

/// Time-stepping configuration. The step must satisfy the kinetic-phase
/// rotation bound dt <= safety * 2 m dx^2 / (pi hbar); dealiasing defaults
/// to on whenever a nonlinearity is present (2/3-rule truncation).
struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  long report_every = 1;    // StepReport cadence in steps (0: off)
  long snapshot_every = 0;  // snapshot cadence in steps (0: off)
  std::optional<bool> dealias;
  double stability_safety = 0.5;

  static double max_stable_dt(const Grid& grid, const PhysicalParams& params,
                              double safety);
  void validate(const Grid& grid, const PhysicalParams& params) const;
};

/// Conserved-quantity report for one instant.
struct StepReport {
  double time = 0.0;
  double norm = 0.0;
  double e_kinetic = 0.0;
  double e_interaction = 0.0;
  double e_nonlinear = 0.0;
  double e_external = 0.0;  // identically 0: V0 is absorbed by the k=0 policy
  double max_abs_psi = 0.0;
};

/// Phase factor of the kinetic substep, exp(-i hbar k^2 dt / 2m).
/// Identity at hbar = 0 (the classical limit leaves the kinetic substep
/// trivial; full classical runs use a small effective hbar instead, see
/// Stepper).
std::complex<double> kinetic_phase_factor(const PhysicalParams& params,
                                          double k_sq, double dt);

/// Second-order Strang split-step integrator for
///   i hbar dpsi/dt = [ -hbar^2/2m lap + Phi(n) + mu(n) ] psi,
/// with Phi the spectral kernel convolution of n = |psi|^2 (k = 0 mode per
/// the medium's background policy) and the external potential V0 absorbed
/// by that policy. Substeps are norm-preserving and the splitting is
/// time-symmetric.
///
/// Requires hbar > 0: the classical limit is approximated by running with
/// an hbar small enough that hbar k_max^2 / 2m is negligible against every
/// physical frequency (single code path; the CLI exposes this as
/// --classical-hbar).
///
/// A Stepper owns per-grid tables (kernel modes, kinetic phases, dealias
/// mask); one simulation owns its Stepper and state exclusively.
/// psi must not be modified externally between successive calls.
class Stepper {
 public:
  Stepper(const MediumSpec& medium, const SolverConfig& cfg, const Grid& grid);

  /// One exact Strang step dt: half local kick, kinetic, half local kick.
  /// Throws BlowupError (with the time stamp) when the field goes
  /// non-finite.
  void step(GridState& state);

  /// The same substeps with -dt; exact inverse of step() up to rounding.
  void step_reversed(GridState& state);

  /// nsteps of the merged first-same-as-last loop (adjacent half kicks
  /// fused; one convolution per step). The callback, fired every
  /// sample_every steps, receives the state and its exact density; psi
  /// itself is phase-synchronized only at the final step, so use step()
  /// (or segment advance calls) when intermediate wavefunctions matter.
  using SampleFn =
      std::function<void(const GridState&, std::span<const double>)>;
  void advance(GridState& state, long nsteps, long sample_every = 0,
               const SampleFn& on_sample = {});

  /// Norm, energy components, and max |psi| of a state.
  StepReport report(const GridState& state) const;

  bool dealias_enabled() const { return dealias_; }
  const SolverConfig& config() const { return cfg_; }

 private:
  void compute_density(const GridState& state);
  void compute_phi();
  void local_kick(GridState& state, double dt);
  void kinetic_kick(GridState& state, double sign);
  void check_finite(const GridState& state) const;

  MediumSpec medium_;
  SolverConfig cfg_;
  Grid grid_;
  SpectralTransform fft_;
  bool dealias_ = false;
  bool has_kernel_ = false;
  bool has_local_ = false;
  std::vector<double> vk_table_;
  std::vector<std::complex<double>> kin_phase_;      // includes dealias mask
  std::vector<std::complex<double>> kin_phase_rev_;  // reversed-time table
  std::vector<double> density_;
  std::vector<double> phi_;
  std::vector<double> mu_;
  AlignedBuffer<std::complex<double>> scratch_;
};

/// StepReport stream as CSV (t, N, E_kin, E_int, E_nl, max_psi).
void write_report_csv_header(std::ostream& out, const Provenance& prov);
void write_report_csv_row(std::ostream& out, const StepReport& report);

}  // namespace qmlab
