#include <doctest.h>

#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/nonlinearity.hpp"

using namespace qmlab;

TEST_CASE("contact nonlinearity: quadratic pressure and Bogoliubov sound") {
  const double g = 0.8;
  const auto nl = Nonlinearity::contact(g);
  for (double n : {0.1, 1.0, 10.0})
    CHECK(nl.pressure(n) == doctest::Approx(0.5 * g * n * n).epsilon(1e-15));
  CHECK(nl.sound_speed_sq(2.0, 3.0) == doctest::Approx(g * 3.0 / 2.0));
  CHECK(nl.polytropic_gamma().value() == doctest::Approx(2.0));
}

TEST_CASE("degeneracy pressure matches the Planck-constant closed form") {
  // p = (1/20) (3/pi)^{2/3} h^2 n^{5/3} / m with h = 2 pi hbar, and
  // cs2 = (1/12) (3/pi)^{2/3} h^2 n0^{2/3} / m^2. Both must agree with the
  // mu = (3 pi^2)^{2/3} hbar^2 n^{2/3} / (2 m) route.
  const double hbar = 1.3, m = 0.7;
  const auto nl = Nonlinearity::fermion_pressure(hbar, m);
  const double h = 2.0 * M_PI * hbar;
  for (double n : {0.2, 1.0, 5.0}) {
    const double expected =
        (1.0 / 20.0) * std::pow(3.0 / M_PI, 2.0 / 3.0) * h * h / m *
        std::pow(n, 5.0 / 3.0);
    CHECK(nl.pressure(n) == doctest::Approx(expected).epsilon(1e-13));
    // same thing through the (3 pi^2)^{2/3} hbar^2 / 5 m coefficient
    const double expected2 = std::pow(3.0 * M_PI * M_PI, 2.0 / 3.0) * hbar *
                             hbar * std::pow(n, 5.0 / 3.0) / (5.0 * m);
    CHECK(expected == doctest::Approx(expected2).epsilon(1e-14));
  }
  const double n0 = 2.0;
  const double cs2_expected = (1.0 / 12.0) * std::pow(3.0 / M_PI, 2.0 / 3.0) *
                              h * h * std::pow(n0, 2.0 / 3.0) / (m * m);
  CHECK(nl.sound_speed_sq(m, n0) == doctest::Approx(cs2_expected).epsilon(1e-13));
  // mu itself has the textbook coefficient at d = 3
  const double mu_expected = std::pow(3.0 * M_PI * M_PI, 2.0 / 3.0) * hbar *
                             hbar / (2.0 * m) * std::pow(n0, 2.0 / 3.0);
  CHECK(nl.mu(n0) == doctest::Approx(mu_expected).epsilon(1e-13));
  CHECK(nl.polytropic_gamma().value() == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("logarithmic nonlinearity: isothermal pressure") {
  const double a = 2.0, b = -1.0;
  const auto nl = Nonlinearity::logarithmic(a, b);
  for (double n : {0.3, 1.0, 4.0})
    CHECK(nl.pressure(n) == doctest::Approx(-b * n).epsilon(1e-15));
  CHECK(nl.sound_speed_sq(1.0, 1.0) == doctest::Approx(1.0));  // cs2 = -b/m
  CHECK(nl.polytropic_gamma().value() == doctest::Approx(1.0));
  CHECK_THROWS_AS(nl.mu(0.0), DomainError);
}

TEST_CASE("trivial nonlinearity") {
  const auto nl = Nonlinearity::none();
  CHECK(nl.sound_speed_sq(1.0, 1.0) == 0.0);
  CHECK(nl.pressure(5.0) == 0.0);
  CHECK(nl.mu(5.0) == 0.0);
}

TEST_CASE("custom copy of the contact form matches the closed forms") {
  const double g = 1.0;
  const auto closed = Nonlinearity::contact(g);
  const auto custom = Nonlinearity::custom([g](double n) { return g * n; });
  CHECK(custom.sound_speed_sq(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  for (double n : {0.5, 1.0, 2.0})
    CHECK(custom.pressure(n) ==
          doctest::Approx(closed.pressure(n)).epsilon(1e-9));
}

TEST_CASE("custom sound speeds track closed forms over 4 decades of n0") {
  const double m = 1.4;
  const auto gp_closed = Nonlinearity::contact(0.6);
  const auto gp_custom = Nonlinearity::custom([](double n) { return 0.6 * n; });
  const auto fermi_closed = Nonlinearity::fermion_pressure(1.0, m);
  const double fermi_coeff = fermi_closed.coefficient();
  const auto fermi_custom = Nonlinearity::custom(
      [fermi_coeff](double n) { return fermi_coeff * std::pow(n, 2.0 / 3.0); });
  const auto log_closed = Nonlinearity::logarithmic(1.0, -0.8);
  const auto log_custom = Nonlinearity::custom(
      [](double n) { return 0.8 * std::log(n); });

  for (double n0 = 1e-2; n0 <= 1e2 + 1e-9; n0 *= 10.0) {
    CHECK(gp_custom.sound_speed_sq(m, n0) ==
          doctest::Approx(gp_closed.sound_speed_sq(m, n0)).epsilon(1e-5));
    CHECK(fermi_custom.sound_speed_sq(m, n0) ==
          doctest::Approx(fermi_closed.sound_speed_sq(m, n0)).epsilon(1e-5));
    CHECK(log_custom.sound_speed_sq(m, n0) ==
          doctest::Approx(log_closed.sound_speed_sq(m, n0)).epsilon(1e-5));
  }
}

TEST_CASE("negative sound speed is legal and unclamped") {
  const auto attractive = Nonlinearity::contact(-2.0);
  CHECK(attractive.sound_speed_sq(1.0, 1.0) == doctest::Approx(-2.0));
  const auto log_warm = Nonlinearity::logarithmic(1.0, 0.5);
  CHECK(log_warm.sound_speed_sq(1.0, 1.0) == doctest::Approx(-0.5));
}

TEST_CASE("power-law pressure exponent: p = g s n^{s+1}/(s+1)") {
  const double g = 0.9, s = 2.0 / 3.0;
  const auto nl = Nonlinearity::power_law(g, s);
  for (double n : {0.5, 2.0})
    CHECK(nl.pressure(n) ==
          doctest::Approx(g * s * std::pow(n, s + 1.0) / (s + 1.0))
              .epsilon(1e-14));
}

TEST_CASE("energy density integrates mu") {
  const auto gp = Nonlinearity::contact(1.2);
  CHECK(gp.energy_density(2.0) == doctest::Approx(1.2 * 4.0 / 2.0));
  const auto lg = Nonlinearity::logarithmic(1.0, -1.0);
  // d/dn of n (ln n - 1) is ln n = -mu/b
  CHECK(lg.energy_density(3.0) == doctest::Approx(3.0 * (std::log(3.0) - 1.0)));
}
