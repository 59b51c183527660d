#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmlab {

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance.
/// Throws AccuracyError (carrying the achieved residual) if the recursion
/// depth limit is hit before the tolerance is met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth = 48);

/// Integral of an oscillatory radial integrand: the range is split into
/// half-period chunks of length pi/k before adaptive integration.
QuadratureResult integrate_oscillatory(const std::function<double(double)>& f,
                                       double a, double b, double k,
                                       double abs_tol);

struct BisectionResult {
  double root;
  double bracket_lo;
  double bracket_hi;
  double residual;  // |f(root)|
};

/// Bisection on [lo, hi]; requires a sign change. Iterates until the
/// bracket width is below rel_tol * |root| (or abs floor).
BisectionResult bisect(const std::function<double(double)>& f, double lo,
                       double hi, double rel_tol = 1e-13);

/// Monotone (Fritsch-Carlson) piecewise-cubic interpolation through
/// strictly increasing abscissae. Evaluation outside [x.front(), x.back()]
/// throws InputError.
class PchipInterpolator {
 public:
  PchipInterpolator() = default;
  PchipInterpolator(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, slope_;
};

struct LineFit {
  double slope;
  double intercept;
};

/// Ordinary least squares line through (x, y).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// n log-spaced points on [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, int n);

/// FNV-1a 64-bit hash, used for config provenance stamps.
std::uint64_t fnv1a64(std::string_view s);

/// Scientific-notation formatting with 17 significant digits, enough to
/// round-trip an IEEE double through text exactly.
std::string format_sci(double v);

}  // namespace qmlab
