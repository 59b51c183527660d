#include "qmlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qmlab/errors.hpp"

namespace qmlab {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  double accumulated_error = 0.0;
  bool exhausted = false;
  long evals_left = 200000;  // global budget; unresolved structure fails fast
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(SimpsonState& st, double a, double b, double fa,
                     double fm, double fb, double whole, double tol,
                     int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.evals_left -= 2;
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0 || st.evals_left <= 0) {
    if (std::abs(delta) > 15.0 * tol) st.exhausted = true;
    st.accumulated_error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth) {
  if (a == b) return {0.0, 0.0};
  SimpsonState st{f};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson(fa, fm, fb, b - a);
  const double value =
      adaptive_step(st, a, b, fa, fm, fb, whole, abs_tol, max_depth);
  if (st.exhausted && st.accumulated_error > abs_tol) {
    throw AccuracyError("adaptive quadrature did not converge (residual " +
                            format_sci(st.accumulated_error) + ")",
                        st.accumulated_error);
  }
  return {value, st.accumulated_error};
}

QuadratureResult integrate_oscillatory(const std::function<double(double)>& f,
                                       double a, double b, double k,
                                       double abs_tol) {
  const double span = b - a;
  if (span <= 0.0) return {0.0, 0.0};
  const double chunk = (k > 0.0) ? std::min(M_PI / k, span) : span;
  const int n_chunks = std::max(1, static_cast<int>(std::ceil(span / chunk)));
  const double tol_per_chunk = abs_tol / n_chunks;
  double total = 0.0, err = 0.0;
  for (int i = 0; i < n_chunks; ++i) {
    const double lo = a + span * i / n_chunks;
    const double hi = a + span * (i + 1) / n_chunks;
    const QuadratureResult r = integrate_adaptive(f, lo, hi, tol_per_chunk);
    total += r.value;
    err += r.error_estimate;
  }
  return {total, err};
}

BisectionResult bisect(const std::function<double(double)>& f, double lo,
                       double hi, double rel_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, lo, lo, 0.0};
  if (fhi == 0.0) return {hi, hi, hi, 0.0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw InputError("bisect: no sign change on [" + format_sci(lo) + ", " +
                     format_sci(hi) + "]");
  }
  for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::abs(0.5 * (lo + hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return {mid, lo, hi, 0.0};
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  const double root = 0.5 * (lo + hi);
  return {root, lo, hi, std::abs(f(root))};
}

PchipInterpolator::PchipInterpolator(std::vector<double> x,
                                     std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw InputError("interpolation table needs >= 2 matched samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw InputError("interpolation abscissae must be strictly increasing");

  // Fritsch-Carlson slopes: harmonic-mean limiter keeps the interpolant
  // monotone on monotone data and never overshoots the samples.
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  slope_.assign(n, 0.0);
  slope_[0] = d[0];
  slope_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
      const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
      slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
}

double PchipInterpolator::operator()(double x) const {
  if (x_.empty()) throw InputError("empty interpolator");
  if (x < x_.front() || x > x_.back())
    throw InputError("evaluation at " + format_sci(x) +
                     " outside sampled range [" + format_sci(x_.front()) +
                     ", " + format_sci(x_.back()) + "]");
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i =
      (it == x_.end()) ? x_.size() - 2 : static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
  const double h10 = t * (1.0 - t) * (1.0 - t);
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = t * t * (t - 1.0);
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] +
         h11 * h * slope_[i + 1];
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InputError("fit_line needs >= 2 matched samples");
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("fit_line: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw InputError("log_spaced needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace qmlab
