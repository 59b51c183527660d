#include "qmlab/medium.hpp"

#include <cmath>

#include "qmlab/errors.hpp"

namespace qmlab {

void PhysicalParams::validate() const {
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  if (!(hbar >= 0.0)) throw InvalidParameter("hbar must be >= 0");
  if (!(n0 > 0.0)) throw InvalidParameter("n0 must be > 0");
}

const char* to_string(ExternalPotentialMode mode) {
  switch (mode) {
    case ExternalPotentialMode::none:
      return "none";
    case ExternalPotentialMode::neutralizing_background:
      return "neutralizing_background";
    case ExternalPotentialMode::jeans_swindle:
      return "jeans_swindle";
  }
  return "?";
}

MediumSpec MediumSpec::make(PhysicalParams params, InteractionKernel kernel,
                            Nonlinearity nonlinearity,
                            ExternalPotentialMode mode, std::string label) {
  params.validate();
  MediumSpec spec;
  spec.params = params;
  spec.kernel = std::move(kernel);
  spec.nonlinearity = std::move(nonlinearity);
  spec.potential_mode = mode;
  spec.cs2 = spec.nonlinearity.sound_speed_sq(params.mass, params.n0);
  spec.label = std::move(label);
  return spec;
}

namespace {

using namespace presets;

Nonlinearity contact_for_cs2(const PhysicalParams& p,
                             const std::optional<double>& cs2) {
  if (!cs2 || *cs2 == 0.0) return Nonlinearity::none();
  // cs2 = g n0 / m  =>  g = cs2 m / n0
  return Nonlinearity::contact(*cs2 * p.mass / p.n0);
}

MediumSpec build(const Free& f) {
  return MediumSpec::make(f.params, InteractionKernel::none(),
                          contact_for_cs2(f.params, f.cs2),
                          ExternalPotentialMode::none, "free");
}

MediumSpec build(const BecContact& b) {
  return MediumSpec::make(b.params, InteractionKernel::none(),
                          Nonlinearity::contact(b.g),
                          ExternalPotentialMode::none, "bec_contact");
}

MediumSpec build(const FermionGas& f) {
  if (!(f.params.hbar > 0.0))
    throw InvalidParameter("fermion_gas: hbar must be > 0");
  return MediumSpec::make(
      f.params, InteractionKernel::none(),
      Nonlinearity::fermion_pressure(f.params.hbar, f.params.mass, f.dim),
      ExternalPotentialMode::none, "fermion_gas");
}

MediumSpec build(const LogFluid& l) {
  return MediumSpec::make(l.params, InteractionKernel::none(),
                          Nonlinearity::logarithmic(l.a, l.b),
                          ExternalPotentialMode::none, "log_fluid");
}

MediumSpec build(const SelfGravity& g) {
  g.params.validate();
  double grav;
  if (g.omega_j) {
    if (!(*g.omega_j > 0.0))
      throw InvalidParameter("self_gravity: omega_j must be > 0");
    // Omega_J^2 = 4 pi G m n0
    grav = (*g.omega_j) * (*g.omega_j) /
           (4.0 * M_PI * g.params.mass * g.params.n0);
  } else if (g.grav_g) {
    if (!(*g.grav_g > 0.0))
      throw InvalidParameter("self_gravity: grav_g must be > 0");
    grav = *g.grav_g;
  } else {
    throw InvalidParameter("self_gravity: set grav_g or omega_j");
  }
  Nonlinearity nl = g.fermion_pressure
                        ? Nonlinearity::fermion_pressure(g.params.hbar,
                                                         g.params.mass)
                        : contact_for_cs2(g.params, g.cs2);
  return MediumSpec::make(
      g.params, InteractionKernel::poisson(-g.params.mass * g.params.mass * grav),
      std::move(nl), ExternalPotentialMode::jeans_swindle, "self_gravity");
}

MediumSpec build(const QuantumPlasma& q) {
  if (!(q.eps0 > 0.0)) throw InvalidParameter("quantum_plasma: eps0 must be > 0");
  if (q.charge == 0.0)
    throw InvalidParameter("quantum_plasma: charge must be nonzero");
  Nonlinearity nl = q.fermion_pressure
                        ? Nonlinearity::fermion_pressure(q.params.hbar,
                                                         q.params.mass)
                        : contact_for_cs2(q.params, q.cs2);
  return MediumSpec::make(
      q.params,
      InteractionKernel::poisson(q.charge * q.charge / (4.0 * M_PI * q.eps0)),
      std::move(nl), ExternalPotentialMode::neutralizing_background,
      "quantum_plasma");
}

MediumSpec build(const MotCloud& m) {
  if (!(m.sigma_r >= 0.0) || !(m.sigma_l >= 0.0))
    throw InvalidParameter("mot_cloud: cross-sections must be >= 0");
  if (!(m.intensity >= 0.0))
    throw InvalidParameter("mot_cloud: intensity must be >= 0");
  if (!(m.light_speed > 0.0))
    throw InvalidParameter("mot_cloud: light_speed must be > 0");
  const double q_eff =
      (m.sigma_r - m.sigma_l) * m.sigma_l * m.intensity / m.light_speed;
  // Q = 0 (balanced cross-sections) degenerates to a free medium.
  InteractionKernel kernel =
      (q_eff == 0.0) ? InteractionKernel::none()
                     : InteractionKernel::poisson(q_eff / (4.0 * M_PI));
  const ExternalPotentialMode mode =
      (q_eff == 0.0) ? ExternalPotentialMode::none
                     : ExternalPotentialMode::neutralizing_background;
  return MediumSpec::make(m.params, std::move(kernel),
                          contact_for_cs2(m.params, m.cs2), mode, "mot_cloud");
}

MediumSpec build(const Chemotaxis& c) {
  if (!(c.mass > 0.0)) throw InvalidParameter("chemotaxis: mass must be > 0");
  if (!(c.n0 > 0.0)) throw InvalidParameter("chemotaxis: n0 must be > 0");
  if (c.lambda == 0.0)
    throw InvalidParameter("chemotaxis: lambda must be nonzero");
  PhysicalParams p{c.mass, 0.0, c.n0};  // classical medium
  // Attractive chemotaxis (lambda > 0) maps onto an attractive Poisson
  // kernel with (n0/m) Vk k^2 = -lambda rho_bar.
  InteractionKernel kernel =
      InteractionKernel::poisson(-c.lambda * c.mass * c.mass / (4.0 * M_PI));
  Nonlinearity nl = contact_for_cs2(p, c.cs2);
  return MediumSpec::make(p, std::move(kernel), std::move(nl),
                          ExternalPotentialMode::jeans_swindle, "chemotaxis");
}

MediumSpec build(const NmcGravity& n) {
  n.params.validate();
  const double m = n.params.mass;
  InteractionKernel kernel;
  if (n.alpha == 0.0) {
    kernel = InteractionKernel::coulomb_cubed(n.gamma * m * m / (16.0 * M_PI),
                                              n.beta * m * m / (4.0 * M_PI));
  } else {
    const double alpha = n.alpha, beta = n.beta, gamma = n.gamma;
    double k_hi = 0.0;  // unbounded
    if (alpha < 0.0) k_hi = std::sqrt(-1.0 / (3.0 * alpha)) * (1.0 - 1e-12);
    kernel = InteractionKernel::custom_closure(
        [m, alpha, beta, gamma](double k) {
          const double k2 = k * k;
          const double denom = 1.0 + 3.0 * alpha * k2;
          if (std::abs(denom) < 1e-14)
            throw SingularityError("NMC kernel pole at k", k);
          return -m * m * ((alpha * gamma - 0.5 * beta) * k2 + 0.25 * gamma) /
                 (k2 * denom);
        },
        0.0, k_hi);
  }
  return MediumSpec::make(n.params, std::move(kernel), Nonlinearity::none(),
                          ExternalPotentialMode::jeans_swindle, "nmc_gravity");
}

}  // namespace

MediumSpec build_medium(const presets::MediumPreset& preset) {
  return std::visit([](const auto& p) { return build(p); }, preset);
}

double interaction_frequency_sq(const MediumSpec& medium) {
  const auto& k = medium.kernel;
  if (k.is_none()) return 0.0;
  const double factor = medium.params.n0 / medium.params.mass;
  if (k.form() == InteractionKernel::Form::poisson)
    return std::abs(factor * 4.0 * M_PI * k.coupling());
  // Probe the kernel in the middle of its domain for non-analytic forms.
  const auto [lo, hi] = k.domain();
  const double probe =
      std::isfinite(hi) ? std::sqrt(lo * hi) : std::max(1.0, 2.0 * lo);
  return std::abs(factor * k.fourier(probe) * probe * probe);
}

}  // namespace qmlab
