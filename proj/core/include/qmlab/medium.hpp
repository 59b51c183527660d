#pragma once

#include <optional>
#include <string>
#include <variant>

#include "qmlab/kernel.hpp"
#include "qmlab/nonlinearity.hpp"

namespace qmlab {

/// Bulk physical parameters shared by every medium.
/// hbar = 0 is legal and selects the classical fluid limit (the quantum
/// k^4 dispersion term vanishes and no wavefunction can be built).
struct PhysicalParams {
  double mass = 1.0;
  double hbar = 1.0;
  double n0 = 1.0;  // background number density

  void validate() const;
};

/// How the homogeneous background is neutralized. Both the neutralizing
/// background and the Jeans swindle amount to the same spectral rule:
/// the k = 0 Fourier mode of the interaction is dropped, so the potential
/// is sourced by the density perturbation only.
enum class ExternalPotentialMode { none, neutralizing_background, jeans_swindle };

const char* to_string(ExternalPotentialMode mode);

/// A complete model instance: bulk parameters, interaction kernel,
/// nonlinearity, and background policy. Immutable after construction;
/// share freely across threads.
struct MediumSpec {
  PhysicalParams params;
  InteractionKernel kernel;
  Nonlinearity nonlinearity;
  ExternalPotentialMode potential_mode = ExternalPotentialMode::none;
  double cs2 = 0.0;  // cached nonlinearity.sound_speed_sq(mass, n0)
  std::string label = "custom";

  static MediumSpec make(PhysicalParams params, InteractionKernel kernel,
                         Nonlinearity nonlinearity, ExternalPotentialMode mode,
                         std::string label = "custom");
};

namespace presets {

// Preset parameter structs default to natural units (everything 1); the
// CLI substitutes SI constants when that unit system is selected.

struct Free {
  PhysicalParams params;
  std::optional<double> cs2;  // realized as a contact nonlinearity
};

/// Contact-interacting condensate; cs2 = g n0 / m. The coupling g relates
/// to an s-wave scattering length via g = 4 pi a_s hbar^2 / m (the
/// convention that reproduces p = 2 pi a_s hbar^2 n^2 / m).
struct BecContact {
  PhysicalParams params;
  double g = 1.0;
};

struct FermionGas {
  PhysicalParams params;
  int dim = 3;
};

struct LogFluid {
  PhysicalParams params;
  double a = 1.0;
  double b = -1.0;  // p = -b n; b < 0 gives cs2 = -b/m > 0
};

/// Self-gravity: kernel coupling G_kernel = -m^2 G, Jeans frequency
/// Omega_J = sqrt(4 pi G m n0). Exactly one of grav_g / omega_j is used;
/// omega_j wins when both are set.
struct SelfGravity {
  PhysicalParams params;
  std::optional<double> grav_g;
  std::optional<double> omega_j;
  std::optional<double> cs2;      // via contact nonlinearity
  bool fermion_pressure = false;  // degeneracy pressure instead of contact
};

/// Electron fluid on a neutralizing ionic background:
/// kernel coupling e^2 / (4 pi eps0), Omega_p = sqrt(e^2 n0 / eps0 m).
struct QuantumPlasma {
  PhysicalParams params;
  double charge = 1.0;
  double eps0 = 1.0;
  std::optional<double> cs2;
  bool fermion_pressure = false;
};

/// Laser-cooled cloud with effective charge
/// Q = (sigma_r - sigma_l) sigma_l intensity / light_speed;
/// kernel coupling Q / (4 pi). sigma_l < sigma_r is plasma-like
/// (repulsive), sigma_l > sigma_r gravity-like (attractive), and
/// sigma_l = sigma_r is a free medium.
struct MotCloud {
  PhysicalParams params;
  double sigma_r = 1.0;
  double sigma_l = 1.0;
  double intensity = 1.0;
  double light_speed = 1.0;
  std::optional<double> cs2;
};

/// Classical (hbar = 0) aggregation of organisms drifting along a
/// chemical gradient; lambda > 0 is attractive. The equivalent kernel
/// coupling is -lambda m^2 / (4 pi), which makes the long-wavelength
/// dispersion term equal -lambda rho_bar with rho_bar = m n0.
struct Chemotaxis {
  double mass = 1.0;
  double n0 = 1.0;
  double lambda = 1.0;
  double cs2 = 1.0;
};

/// Non-minimally coupled gravity analog. alpha = 0 maps onto the
/// closed-form kernel Vk = -gamma m^2/(4 k^2) + beta m^2/2
/// (coulomb_cubed with A = gamma m^2/16 pi, B = beta m^2/4 pi);
/// alpha != 0 uses a closure for
/// Vk = -m^2 [(alpha gamma - beta/2) k^2 + gamma/4] / (k^2 (1 + 3 alpha k^2)).
/// Units: [gamma] = [16 pi G_newton], [alpha] = length^2,
/// [beta] = [gamma] length^2.
struct NmcGravity {
  PhysicalParams params;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
};

using MediumPreset =
    std::variant<Free, BecContact, FermionGas, LogFluid, SelfGravity,
                 QuantumPlasma, MotCloud, Chemotaxis, NmcGravity>;

}  // namespace presets

/// Expand a preset into a full MediumSpec. Pure and deterministic; throws
/// InvalidParameter naming the offending field.
MediumSpec build_medium(const presets::MediumPreset& preset);

/// Effective squared interaction frequency |(n0/m) Vk(k) k^2| for Poisson
/// family kernels (Omega_J^2, Omega_p^2, |Q| n0 / m, lambda rho_bar); used
/// to build characteristic scales. Returns 0 for kernel-free media.
double interaction_frequency_sq(const MediumSpec& medium);

}  // namespace qmlab
