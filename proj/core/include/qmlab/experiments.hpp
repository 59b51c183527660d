#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmlab/grid.hpp"
#include "qmlab/medium.hpp"
#include "qmlab/provenance.hpp"
#include "qmlab/solver.hpp"

namespace qmlab {

/// Single-mode density perturbation n = n0 (1 + eps cos(k.r + phase)),
/// u = 0, seeded on a homogeneous state. eps = 0 is the null perturbation.
struct PerturbationSpec {
  std::array<int, 3> mode{{1, 0, 0}};
  double amplitude = 1e-4;  // eps, in (0, 1e-2]
  double phase = 0.0;
};

/// Applies the perturbation and rebuilds psi from the Madelung fields.
/// state0 must be uniform to 1e-12 relative; the mode must lie below the
/// dealiasing cutoff (|m_a| <= N_a/3).
GridState seed(const GridState& state0, const PerturbationSpec& p,
               const PhysicalParams& params);

/// Extracts the complex amplitude of one Fourier mode of the density,
/// normalized so a density n0 (1 + eps cos(k.r)) gives amplitude eps n0.
class ModeProbe {
 public:
  ModeProbe(const Grid& grid, std::array<int, 3> mode);
  std::complex<double> amplitude(std::span<const double> density) const;

 private:
  Grid grid_;
  std::array<std::vector<std::complex<double>>, 3> tables_;
};

enum class FitClass { oscillatory, growing, decaying, marginal };

const char* to_string(FitClass c);

struct ModeFitOptions {
  double skip_efolds = 1.0;  // transient excluded from growth fits
  int min_samples = 64;
  double min_periods = 3.0;
  double min_efolds = 3.0;
  double contamination_threshold = 1e-2;
};

/// Frequency or growth-rate fit of a mode-amplitude time series.
struct ModeFit {
  double value = 0.0;  // omega (oscillatory) or gamma (growing/decaying)
  FitClass classification = FitClass::marginal;
  double residual = 0.0;    // relative RMS misfit of the chosen model
  double confidence = 0.0;  // ~1.96 sigma on value
};

/// Fit a uniformly sampled complex amplitude history. A standing seeded
/// mode evolves as cos(omega t) (stable) or cosh(gamma t) (unstable, both
/// roots excited by the u = 0 start); the estimator is the three-point
/// recurrence x_{j+1} + x_{j-1} = 2 c x_j, exact for the cos, cosh, and
/// exp families, followed by a model least-squares for the residual.
/// Throws FitWindowError when the series is too short and
/// ContaminationError when neither model fits to the threshold.
ModeFit fit_mode(std::span<const double> times,
                 std::span<const std::complex<double>> amplitudes,
                 const ModeFitOptions& opts = {});

struct ValidationOptions {
  double eps = 1e-4;
  double periods = 6.0;   // measured span, oscillatory branch
  double efolds = 4.0;    // measured span after the skip, growing branch
  double skip_efolds = 1.0;
  long samples = 256;
  double tol_omega = 0.01;
  double tol_gamma = 0.02;
  double max_phase_per_step = 0.05;  // cap on omega dt
  double stability_safety = 0.5;
  std::optional<bool> dealias;
  int jobs = 1;  // per-k runs are independent; >1 runs them on threads
};

struct ValidationRow {
  double k = 0.0;
  double omega2_theory = 0.0;
  double measured = 0.0;  // omega or gamma
  double confidence = 0.0;  // ~1.96 sigma on the measurement
  double rel_err = 0.0;
  FitClass classification = FitClass::marginal;
  bool within_tol = false;
  std::string note;  // nonempty when the run or fit failed
};

/// Seed -> evolve -> fit for each wavenumber; per-k failures (blow-up,
/// contamination) are reported in the row without aborting the scan.
/// Every k must be a harmonic of the grid's axis-0 box length.
std::vector<ValidationRow> validate_dispersion(const MediumSpec& medium,
                                               std::span<const double> ks,
                                               const Grid& grid,
                                               const ValidationOptions& opts = {});

/// CSV columns: k, omega2_theory, omega_or_gamma_measured, rel_err, class.
void write_validation_csv(std::ostream& out,
                          std::span<const ValidationRow> rows,
                          const Provenance& prov);

std::string validation_verdict_json(std::span<const ValidationRow> rows,
                                    const ValidationOptions& opts,
                                    const Provenance& prov);

}  // namespace qmlab
