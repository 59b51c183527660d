#pragma once

#include <array>
#include <span>
#include <vector>

#include "qmlab/grid.hpp"
#include "qmlab/medium.hpp"

namespace qmlab {

/// Hydrodynamic fields of a wavefunction: density n = |psi|^2, velocity
/// u = (hbar/m) Im(psi* grad psi)/n, phase S = hbar arg(psi) (defined
/// modulo 2 pi hbar windings), and the Bohm quantum potential
/// Q = -(hbar^2/2m) lap(sqrt n)/sqrt n. u and Q are NaN where
/// n < vacuum_threshold (Q is singular in vacuum).
struct MadelungFields {
  Grid grid;
  double time = 0.0;
  std::vector<double> density;
  std::array<std::vector<double>, 3> velocity;
  std::vector<double> phase;
  std::vector<double> quantum_potential;
  double vacuum_threshold = 0.0;  // absolute density cut used
};

/// Decompose a wavefunction into Madelung fields. vacuum_fraction is
/// relative to max n. The velocity comes from the psi-bilinear form (no
/// phase unwrapping); all derivatives are spectral. Throws
/// DegenerateStateError on an identically-zero field.
MadelungFields to_fields(const GridState& state, const PhysicalParams& params,
                         double vacuum_fraction = 1e-8);

/// Rebuild psi = sqrt(n) exp(i S / hbar) from density and a curl-free
/// velocity. The mean velocity must correspond to an integer phase winding
/// around the periodic box; the fluctuating part is integrated spectrally
/// and verified against u (relative tolerance curl_tol), else
/// InconsistentFieldsError. hbar = 0 throws DomainError (no wavefunction
/// exists in the classical limit).
GridState from_fields(const MadelungFields& fields,
                      const PhysicalParams& params, double curl_tol = 1e-6);

/// Bohm potential via -(hbar^2/2m) lap(sqrt n)/sqrt n.
std::vector<double> quantum_potential_sqrt_form(const Grid& grid,
                                                std::span<const double> density,
                                                const PhysicalParams& params,
                                                double vacuum_abs = 0.0);

/// Same quantity via the algebraically equal form
/// -(hbar^2/4m) [lap n / n - (grad n)^2 / (2 n^2)].
std::vector<double> quantum_potential_log_form(const Grid& grid,
                                               std::span<const double> density,
                                               const PhysicalParams& params,
                                               double vacuum_abs = 0.0);

/// Discrete L2 norms of the continuity and momentum balances evaluated
/// from two temporally adjacent states (centered in time, spectral in
/// space). Both norms shrink at second order as the pair spacing and the
/// grid are refined.
struct ResidualNorms {
  double continuity = 0.0;
  double euler = 0.0;
};

ResidualNorms hydrodynamic_residual(const GridState& earlier,
                                    const GridState& later,
                                    const MediumSpec& medium);

}  // namespace qmlab
