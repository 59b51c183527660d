#include "qmlab/nonlinearity.hpp"

#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/numerics.hpp"

namespace qmlab {

namespace {
// d-dimensional solid angle S_d = 2 pi^{d/2} / Gamma(d/2).
double solid_angle(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}
}  // namespace

Nonlinearity Nonlinearity::power_law(double g, double exponent) {
  if (!(exponent > 0.0))
    throw InvalidParameter("power-law exponent must be > 0");
  Nonlinearity nl;
  nl.form_ = Form::power_law;
  nl.g_ = g;
  nl.s_ = exponent;
  return nl;
}

Nonlinearity Nonlinearity::fermion_pressure(double hbar, double mass, int dim) {
  if (dim < 1 || dim > 3) throw InvalidParameter("fermion dimension must be 1..3");
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  const double h = 2.0 * M_PI * hbar;  // Planck constant
  const double coeff =
      0.5 * std::pow(dim / (2.0 * solid_angle(dim)), 2.0 / dim) * h * h / mass;
  return power_law(coeff, 2.0 / dim);
}

Nonlinearity Nonlinearity::logarithmic(double a, double b) {
  if (!(a > 0.0)) throw InvalidParameter("logarithmic parameter a must be > 0");
  Nonlinearity nl;
  nl.form_ = Form::logarithmic;
  nl.log_a_ = a;
  nl.log_b_ = b;
  return nl;
}

Nonlinearity Nonlinearity::custom(std::function<double(double)> mu,
                                  double n_ref) {
  if (!mu) throw InvalidParameter("custom nonlinearity closure is empty");
  if (n_ref < 0.0) throw InvalidParameter("n_ref must be >= 0");
  Nonlinearity nl;
  nl.form_ = Form::custom;
  nl.custom_mu_ = std::move(mu);
  nl.n_ref_ = n_ref;
  return nl;
}

double Nonlinearity::mu(double n) const {
  switch (form_) {
    case Form::none:
      return 0.0;
    case Form::power_law:
      return g_ * std::pow(n, s_);
    case Form::logarithmic:
      if (!(n > 0.0))
        throw DomainError("logarithmic nonlinearity requires n > 0");
      return -log_b_ * std::log(log_a_ * n);
    case Form::custom:
      return custom_mu_(n);
  }
  throw Error("unreachable nonlinearity form");
}

void Nonlinearity::mu_field(std::span<const double> n,
                            std::span<double> out) const {
  switch (form_) {
    case Form::none:
      for (auto& v : out) v = 0.0;
      return;
    case Form::power_law:
      if (s_ == 1.0) {
        for (std::size_t i = 0; i < n.size(); ++i) out[i] = g_ * n[i];
      } else {
        for (std::size_t i = 0; i < n.size(); ++i)
          out[i] = g_ * std::pow(n[i], s_);
      }
      return;
    case Form::logarithmic:
      for (std::size_t i = 0; i < n.size(); ++i)
        out[i] = -log_b_ * std::log(log_a_ * n[i]);
      return;
    case Form::custom:
      for (std::size_t i = 0; i < n.size(); ++i) out[i] = custom_mu_(n[i]);
      return;
  }
}

double Nonlinearity::mu_derivative(double n) const {
  // cbrt(eps)-relative step balances rounding noise against the O(delta^2)
  // truncation of the centered stencil; stays inside n > 0.
  const double delta = 6.06e-6 * std::max(n, 1e-300);
  return (custom_mu_(n + delta) - custom_mu_(n - delta)) / (2.0 * delta);
}

double Nonlinearity::pressure(double n) const {
  if (n < 0.0) throw DomainError("pressure requires n >= 0");
  switch (form_) {
    case Form::none:
      return 0.0;
    case Form::power_law:
      // p = \int n' mu' = g s n^{s+1} / (s+1)
      return g_ * s_ * std::pow(n, s_ + 1.0) / (s_ + 1.0);
    case Form::logarithmic:
      // integrand n' mu' = -b is constant, so p = -b n exactly.
      return -log_b_ * n;
    case Form::custom: {
      if (n == n_ref_) return 0.0;
      const double floor = 1e-12 * std::max(n, n_ref_);
      const auto integrand = [&](double x) {
        const double xx = std::max(x, floor);
        return xx * mu_derivative(xx);
      };
      // Tolerance sits at the truncation level of the differenced mu;
      // asking for more only chases finite-difference noise.
      const double scale = std::abs(n * custom_mu_(std::max(n, floor))) + 1.0;
      return integrate_adaptive(integrand, n_ref_, n, 1e-10 * scale).value;
    }
  }
  throw Error("unreachable nonlinearity form");
}

double Nonlinearity::sound_speed_sq(double mass, double n0) const {
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  if (!(n0 > 0.0)) throw InvalidParameter("n0 must be > 0");
  switch (form_) {
    case Form::none:
      return 0.0;
    case Form::power_law:
      // (1/m) dp/dn = g s n0^s / m
      return g_ * s_ * std::pow(n0, s_) / mass;
    case Form::logarithmic:
      return -log_b_ / mass;
    case Form::custom: {
      // Centered difference of p across n0 +/- h. Since dp/dn = n mu'(n),
      // the difference is a single short integral, which avoids the
      // cancellation of subtracting two large quadratures.
      const double h = 1e-6 * n0;
      const auto integrand = [&](double x) { return x * mu_derivative(x); };
      const double scale = std::abs(n0 * custom_mu_(n0)) + 1.0;
      const double dp =
          integrate_adaptive(integrand, n0 - h, n0 + h, 1e-13 * scale).value;
      return dp / (2.0 * h * mass);
    }
  }
  throw Error("unreachable nonlinearity form");
}

double Nonlinearity::energy_density(double n) const {
  if (n < 0.0) throw DomainError("energy density requires n >= 0");
  switch (form_) {
    case Form::none:
      return 0.0;
    case Form::power_law:
      return g_ * std::pow(n, s_ + 1.0) / (s_ + 1.0);
    case Form::logarithmic:
      // \int -b ln(a n') dn' = -b n (ln(a n) - 1); limit 0 at n -> 0.
      return (n > 0.0) ? -log_b_ * n * (std::log(log_a_ * n) - 1.0) : 0.0;
    case Form::custom: {
      if (n == 0.0) return 0.0;
      const double floor = 1e-12 * n;
      const auto integrand = [&](double x) {
        return custom_mu_(std::max(x, floor));
      };
      const double scale = std::abs(n * custom_mu_(n)) + 1.0;
      return integrate_adaptive(integrand, 0.0, n, 1e-10 * scale).value;
    }
  }
  throw Error("unreachable nonlinearity form");
}

std::optional<double> Nonlinearity::polytropic_gamma() const {
  if (form_ == Form::power_law) return 1.0 + s_;
  if (form_ == Form::logarithmic) return 1.0;  // isothermal p = -b n
  return std::nullopt;
}

}  // namespace qmlab
