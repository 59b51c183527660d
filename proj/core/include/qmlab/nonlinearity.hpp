#pragma once

#include <functional>
#include <optional>
#include <span>

namespace qmlab {

/// Local nonlinearity mu(n) of the wave equation, with its induced
/// barotropic pressure p(n) = \int_0^n n' mu'(n') dn' and the equilibrium
/// squared sound speed cs2 = (1/m) dp/dn at n0.
///
/// Builtin forms:
///   none                   mu = 0,            p = 0,                cs2 = 0
///   power_law(g, s)        mu = g n^s,        p = g s n^{s+1}/(s+1), cs2 = g s n0^s / m
///   logarithmic(a, b)      mu = -b ln(a n),   p = -b n,             cs2 = -b / m
///   custom(mu)             quadrature / finite differences
///
/// power_law(g, 1) is the contact (Gross-Pitaevskii) interaction with
/// cs2 = g n0 / m (Bogoliubov sound). fermion_pressure() builds the
/// degeneracy-pressure form: in d dimensions mu = c_d n^{2/d} with
/// c_d = (1/2) (d / (2 S_d))^{2/d} (2 pi hbar)^2 / m, which at d = 3 is
/// (3 pi^2)^{2/3} hbar^2 / (2 m).
///
/// cs2 (and p) may be negative; attractive media are legal and nothing is
/// clamped.
class Nonlinearity {
 public:
  enum class Form { none, power_law, logarithmic, custom };

  Nonlinearity() : form_(Form::none) {}

  static Nonlinearity none() { return Nonlinearity{}; }
  static Nonlinearity power_law(double g, double exponent);
  static Nonlinearity contact(double g) { return power_law(g, 1.0); }
  static Nonlinearity fermion_pressure(double hbar, double mass, int dim = 3);
  static Nonlinearity logarithmic(double a, double b);
  /// Arbitrary mu(n); pressure is integrated numerically from n_ref
  /// (default 0, where p is pinned to 0).
  static Nonlinearity custom(std::function<double(double)> mu,
                             double n_ref = 0.0);

  double mu(double n) const;
  /// Vectorized mu over a density field (fast path for the solver loop).
  void mu_field(std::span<const double> n, std::span<double> out) const;

  double pressure(double n) const;

  /// cs2 = (1/m) dp/dn at n0. Builtin forms are closed-form; the custom
  /// form uses a centered difference of p across [n0 - h, n0 + h] with
  /// h = 1e-6 n0, evaluated as a single cancellation-free quadrature.
  double sound_speed_sq(double mass, double n0) const;

  /// Energy density U(n) = \int_0^n mu dn' (enters the total-energy report).
  double energy_density(double n) const;

  /// gamma of p ~ n^gamma for the power-law family, nullopt otherwise.
  std::optional<double> polytropic_gamma() const;

  Form form() const { return form_; }
  bool is_none() const { return form_ == Form::none; }
  double coefficient() const { return g_; }
  double exponent() const { return s_; }

 private:
  double mu_derivative(double n) const;

  Form form_;
  double g_ = 0.0;  // power-law coefficient
  double s_ = 1.0;  // power-law exponent
  double log_a_ = 1.0, log_b_ = 0.0;
  std::function<double(double)> custom_mu_;
  double n_ref_ = 0.0;
};

}  // namespace qmlab
