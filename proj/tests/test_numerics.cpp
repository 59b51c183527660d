#include <doctest.h>

#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/numerics.hpp"

using namespace qmlab;

TEST_CASE("adaptive quadrature integrates smooth functions") {
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                    M_PI, 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  const auto g = integrate_adaptive([](double x) { return std::exp(-x * x); },
                                    -6.0, 6.0, 1e-12);
  CHECK(g.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-11));
}

TEST_CASE("oscillatory quadrature handles many periods") {
  const double k = 25.0;
  const auto r = integrate_oscillatory(
      [k](double x) { return std::sin(k * x) * std::exp(-x); }, 0.0, 40.0, k,
      1e-12);
  CHECK(r.value == doctest::Approx(k / (1.0 + k * k)).epsilon(1e-9));
}

TEST_CASE("bisection finds roots at tight tolerance") {
  const auto r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(r.root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0),
                  InputError);
}

TEST_CASE("pchip interpolation is exact at nodes and monotone") {
  std::vector<double> x{1.0, 2.0, 3.0, 5.0, 8.0};
  std::vector<double> y{1.0, 4.0, 9.0, 25.0, 64.0};
  const PchipInterpolator f(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-15));
  // Monotone data stays monotone between nodes.
  double prev = f(1.0);
  for (double t = 1.0; t <= 8.0; t += 0.01) {
    const double v = f(t);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK_THROWS_AS(f(0.5), InputError);
  CHECK_THROWS_AS(f(8.5), InputError);
}

TEST_CASE("line fit recovers slope and intercept") {
  std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y{1.0, 3.5, 6.0, 8.5, 11.0};
  const LineFit l = fit_line(x, y);
  CHECK(l.slope == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(l.intercept == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("format_sci round-trips doubles") {
  for (double v : {1.0 / 3.0, 6.62607015e-34, -123456.789, 0.0}) {
    CHECK(std::stod(format_sci(v)) == v);
  }
}
