#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmlab/medium.hpp"
#include "qmlab/provenance.hpp"

namespace qmlab {

/// omega^2(k) = (n0/m) Vk(k) k^2 + cs2 k^2 + hbar^2 k^4 / (4 m^2)
/// for a plane-wave perturbation of the homogeneous state. Requires k > 0;
/// kernel domain errors propagate.
double omega_sq(const MediumSpec& medium, double k);

enum class StabilityClass { stable, marginal, unstable };

const char* to_string(StabilityClass c);

/// Sampled dispersion relation with per-sample stability classification.
/// growth[i] = sqrt(-omega2[i]) where unstable, NaN elsewhere.
struct DispersionCurve {
  std::vector<double> k;
  std::vector<double> omega2;
  std::vector<StabilityClass> classification;
  std::vector<double> growth;
};

DispersionCurve sample_curve(const MediumSpec& medium,
                             std::span<const double> k_grid);

struct RootScanOptions {
  double k_lo_factor = 1e-3;   // scan starts at k_char * k_lo_factor
  double k_hi_factor = 1e3;    // and ends at k_char * k_hi_factor
  int samples_per_decade = 48;
  std::optional<double> k_hi_override;
};

/// Root of omega^2(k) = 0 separating stable from unstable bands.
struct CriticalWavenumber {
  std::optional<double> k_star;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |omega^2(k_star)|
  double scan_lo = 0.0;
  double scan_hi = 0.0;
};

/// Locate the critical wavenumber by scanning log-spaced samples for a
/// sign change and bisecting it. Returns k_star = nullopt when omega^2
/// keeps one sign over the whole scan range (e.g. plasmas). Throws
/// InputError when no usable scan range exists.
CriticalWavenumber critical_wavenumber(const MediumSpec& medium,
                                       const RootScanOptions& opts = {});

/// Weak-field dispersion of gravity with non-minimal matter-curvature
/// coupling:
///   omega^2 = -[(alpha gamma - beta/2) k^2 + gamma/4] m n0 / (1 + 3 alpha k^2)
///             + hbar^2 k^4 / (4 m^2).
/// alpha = beta = 0, gamma = 16 pi G recovers Newtonian gravity; alpha = 0
/// is the pure-coupling regime whose k^2 term acts as cs2 = beta m n0 / 2.
struct NmcParams {
  double alpha = 0.0;  // length^2
  double beta = 0.0;   // gamma * length^2
  double gamma = 0.0;  // units of 16 pi G
};

double omega_sq_nmc(const NmcParams& nmc, const PhysicalParams& params,
                    double k);

/// Classical chemotactic dispersion omega^2 = -lambda rho_bar + cs2 k^2
/// (rho_bar = mass density). Attractive lambda > 0 with cs2 > 0 has the
/// critical wavenumber sqrt(lambda rho_bar / cs2); repulsive lambda < 0 is
/// stable at every k.
double omega_sq_chemotaxis(double lambda, double rho_bar, double cs2,
                           double k);

std::optional<double> chemotaxis_critical_wavenumber(double lambda,
                                                     double rho_bar,
                                                     double cs2);

/// Invert the generic dispersion relation on a target curve:
///   Vk(k) = (m/n0) [omega2_target(k) - cs2 k^2 - hbar^2 k^4/(4 m^2)] / k^2.
/// When cs2 is not supplied it is fitted as the k^2 slope of the large-k
/// half of the residual omega2 - hbar^2 k^4/(4 m^2) (two-parameter fit
/// against const + cs2 k^2, which is exact for Poisson-family targets).
/// Requires >= 8 strictly ascending samples with k > 0.
struct AnalogMatch {
  FourierSamples kernel;
  double cs2 = 0.0;
  bool cs2_fitted = false;
};

AnalogMatch match_analog(std::span<const double> k,
                         std::span<const double> omega2_target,
                         const PhysicalParams& params,
                         std::optional<double> assume_cs2 = std::nullopt);

/// CSV columns: k, omega_sq, class, gamma (gamma empty where not unstable).
void write_curve_csv(std::ostream& out, const DispersionCurve& curve,
                     const Provenance& prov);

/// JSON summary: k_star (nullable), residual/bracket, small-k and large-k
/// limit diagnostics, and contiguous classification bands.
std::string curve_summary_json(const DispersionCurve& curve,
                               const CriticalWavenumber& critical,
                               const MediumSpec& medium,
                               const Provenance& prov);

}  // namespace qmlab
