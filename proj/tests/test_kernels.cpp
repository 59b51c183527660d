#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "qmlab/errors.hpp"
#include "qmlab/kernel.hpp"
#include "qmlab/radial_transform.hpp"

using namespace qmlab;

TEST_CASE("poisson kernel Fourier transform") {
  const auto k = InteractionKernel::poisson(1.0);
  CHECK(k.fourier(2.0) == doctest::Approx(M_PI).epsilon(1e-15));
  // Gravity-style coupling -m^2 G.
  const double m = 2.0, grav = 0.3;
  const auto kg = InteractionKernel::poisson(-m * m * grav);
  for (double kk : {0.1, 1.0, 7.5})
    CHECK(kg.fourier(kk) ==
          doctest::Approx(-4.0 * M_PI * m * m * grav / (kk * kk)).epsilon(1e-15));
}

TEST_CASE("kernel domain and trivial cases") {
  const auto none = InteractionKernel::none();
  CHECK(none.fourier(3.7) == 0.0);
  CHECK(none.fourier_at_zero().value() == 0.0);
  const auto p = InteractionKernel::poisson(1.0);
  CHECK(!p.fourier_at_zero().has_value());
  CHECK_THROWS_AS(p.fourier(0.0), DomainError);
  CHECK_THROWS_AS(p.fourier(-1.0), DomainError);
}

TEST_CASE("fourier_eval * k^2 is constant for the poisson family") {
  const double coupling = -0.7;
  const auto kern = InteractionKernel::poisson(coupling);
  for (double k = 1e-3; k < 1e3; k *= 3.7) {
    CHECK(kern.fourier(k) * k * k ==
          doctest::Approx(4.0 * M_PI * coupling).epsilon(1e-14));
  }
}

TEST_CASE("kernel transform is linear in the coupling") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> coup(-5.0, 5.0);
  std::uniform_real_distribution<double> wav(0.01, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double g = coup(rng), c = coup(rng), k = wav(rng);
    const auto k1 = InteractionKernel::poisson(g);
    const auto k2 = InteractionKernel::poisson(c * g);
    CHECK(k2.fourier(k) == doctest::Approx(c * k1.fourier(k)).epsilon(1e-13));
  }
}

TEST_CASE("coulomb_cubed kernel matches its closed form") {
  const double a = 0.4, b = 1.3;
  const auto kern = InteractionKernel::coulomb_cubed(a, b);
  for (double k : {0.2, 1.0, 5.0})
    CHECK(kern.fourier(k) ==
          doctest::Approx(-4.0 * M_PI * a / (k * k) + 2.0 * M_PI * b)
              .epsilon(1e-15));
}

TEST_CASE("custom table interpolates and rejects out-of-range k") {
  FourierSamples s;
  for (int i = 1; i <= 32; ++i) {
    const double k = 0.1 * i;
    s.k.push_back(k);
    s.vk.push_back(4.0 * M_PI / (k * k));
  }
  const auto kern = InteractionKernel::custom_table(s);
  // Exact at nodes, close between them (smooth 1/k^2 data).
  CHECK(kern.fourier(0.5) == doctest::Approx(4.0 * M_PI / 0.25).epsilon(1e-14));
  CHECK(kern.fourier(0.55) ==
        doctest::Approx(4.0 * M_PI / (0.55 * 0.55)).epsilon(1e-2));
  CHECK_THROWS_AS(kern.fourier(0.05), InputError);
  CHECK_THROWS_AS(kern.fourier(3.3), InputError);
}

TEST_CASE("kernel tables round-trip through the text format") {
  FourierSamples s;
  for (int i = 1; i <= 9; ++i) {
    s.k.push_back(0.25 * i);
    s.vk.push_back(std::sin(i) * 3.0);
  }
  std::stringstream buf;
  save_kernel_table(buf, s, {"test table"});
  const FourierSamples r = load_kernel_table(buf);
  REQUIRE(r.k.size() == s.k.size());
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    CHECK(r.k[i] == s.k[i]);
    CHECK(r.vk[i] == s.vk[i]);
  }
}

TEST_CASE("kernel table loader validates input") {
  std::stringstream no_header("1.0 2.0\n2.0 3.0\n");
  CHECK_THROWS_AS(load_kernel_table(no_header), InputError);
  std::stringstream unsorted("# k Vk\n1.0 2.0\n0.5 3.0\n");
  CHECK_THROWS_AS(load_kernel_table(unsorted), InputError);
  std::stringstream negative("# k Vk\n-1.0 2.0\n2.0 3.0\n");
  CHECK_THROWS_AS(load_kernel_table(negative), InputError);
}

TEST_CASE("non-convergent quadrature raises an accuracy error with the "
          "achieved residual") {
  // An integrand oscillating far below the chunk scale exhausts the
  // adaptive refinement depth.
  const std::vector<double> ks{1.0};
  try {
    numeric_radial_transform(
        [](double r) { return std::sin(1e7 * r) / std::max(r, 1e-300); }, ks,
        10.0, 1e-12);
    FAIL("expected AccuracyError");
  } catch (const AccuracyError& e) {
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("numeric radial transform: zero kernel") {
  const std::vector<double> ks{0.5, 1.0, 2.0};
  const auto s = numeric_radial_transform([](double) { return 0.0; }, ks, 10.0,
                                          1e-10);
  for (double vk : s.vk) CHECK(std::abs(vk) < 1e-10);
}

TEST_CASE("numeric radial transform reproduces the Yukawa closed form") {
  // V(r) = e^{-r}/r has Vk = 4 pi / (1 + k^2); at k = 1 that is 2 pi.
  const std::vector<double> ks{0.1, 0.3, 1.0, 3.0, 10.0};
  const auto s = numeric_radial_transform(
      [](double r) { return std::exp(-r) / std::max(r, 1e-300); }, ks, 60.0,
      1e-8);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double expected = 4.0 * M_PI / (1.0 + ks[i] * ks[i]);
    CHECK(s.vk[i] == doctest::Approx(expected).epsilon(1e-7));
  }
  CHECK(s.vk[2] == doctest::Approx(2.0 * M_PI).epsilon(1e-7));
}

TEST_CASE("regulated Coulomb transform extrapolates to 4 pi / k^2") {
  // V(r) = e^{-eps r}/r gives Vk = 4 pi/(k^2 + eps^2); extrapolating the
  // eps^2 dependence to zero recovers the bare result.
  const double k = 1.0;
  const std::vector<double> ks{k};
  double eps1 = 0.05, eps2 = 0.025;
  const auto s1 = numeric_radial_transform(
      [eps1](double r) { return std::exp(-eps1 * r) / std::max(r, 1e-300); },
      ks, 600.0, 1e-9);
  const auto s2 = numeric_radial_transform(
      [eps2](double r) { return std::exp(-eps2 * r) / std::max(r, 1e-300); },
      ks, 1200.0, 1e-9);
  // Richardson in eps^2: V0 = (e1^2 V2 - e2^2 V1) / (e1^2 - e2^2).
  const double e1 = eps1 * eps1, e2 = eps2 * eps2;
  const double v0 = (e1 * s2.vk[0] - e2 * s1.vk[0]) / (e1 - e2);
  CHECK(v0 == doctest::Approx(4.0 * M_PI).epsilon(1e-5));
}

TEST_CASE("numeric transform agrees with the analytic poisson kernel "
          "across a decade of k") {
  const auto analytic = InteractionKernel::poisson(1.0);
  const double eps = 0.05;
  std::vector<double> ks;
  for (double k = 0.5; k <= 5.0; k *= 1.3335) ks.push_back(k);
  const auto s = numeric_radial_transform(
      [eps](double r) { return std::exp(-eps * r) / std::max(r, 1e-300); }, ks,
      900.0, 1e-9);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double reference =
        4.0 * M_PI / (ks[i] * ks[i] + eps * eps);  // screened closed form
    CHECK(s.vk[i] == doctest::Approx(reference).epsilon(1e-6));
    // and the screening correction eps^2/k^2 bounds the gap to the bare form
    CHECK(s.vk[i] == doctest::Approx(analytic.fourier(ks[i]))
                         .epsilon(1.5 * eps * eps / (ks[i] * ks[i])));
  }
}
