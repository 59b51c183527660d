#include "qmlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "qmlab/dispersion.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/madelung.hpp"
#include "qmlab/numerics.hpp"

namespace qmlab {

GridState seed(const GridState& state0, const PerturbationSpec& p,
               const PhysicalParams& params) {
  const Grid& grid = state0.grid;
  const std::size_t n = grid.size();

  // The base state must be homogeneous.
  double mean_n = 0.0;
  for (const auto& v : state0.psi.span()) mean_n += std::norm(v);
  mean_n /= static_cast<double>(n);
  if (mean_n <= 0.0)
    throw DegenerateStateError("seed: base state has zero density");
  for (const auto& v : state0.psi.span())
    if (std::abs(std::norm(v) - mean_n) > 1e-12 * mean_n)
      throw InputError("seed: base state is not uniform to 1e-12 relative");

  if (p.amplitude == 0.0) return state0.clone();
  if (!(p.amplitude > 0.0) || p.amplitude > 1e-2)
    throw InputError("seed: amplitude must lie in (0, 1e-2]");

  bool any_mode = false;
  for (int a = 0; a < grid.dims; ++a) {
    const long cutoff = static_cast<long>(grid.shape[a]) / 3;
    if (std::labs(p.mode[a]) > cutoff)
      throw InputError("seed: mode exceeds the dealiasing cutoff N/3");
    if (p.mode[a] != 0) any_mode = true;
  }
  if (!any_mode) throw InputError("seed: mode must be nonzero");

  MadelungFields fields;
  fields.grid = grid;
  fields.time = state0.time;
  fields.density.resize(n);
  for (int a = 0; a < grid.dims; ++a) fields.velocity[a].assign(n, 0.0);

  const std::size_t n0 = grid.shape[0], n1 = grid.shape[1], n2 = grid.shape[2];
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < n0; ++i0)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
        const std::size_t idxs[3] = {i0, i1, i2};
        double arg = p.phase;
        for (int a = 0; a < grid.dims; ++a)
          arg += 2.0 * M_PI * p.mode[a] * static_cast<double>(idxs[a]) /
                 static_cast<double>(grid.shape[a]);
        fields.density[idx] = mean_n * (1.0 + p.amplitude * std::cos(arg));
      }
  return from_fields(fields, params);
}

ModeProbe::ModeProbe(const Grid& grid, std::array<int, 3> mode) : grid_(grid) {
  for (int a = 0; a < grid.dims; ++a) {
    tables_[a].resize(grid.shape[a]);
    for (std::size_t i = 0; i < grid.shape[a]; ++i) {
      const double arg = -2.0 * M_PI * mode[a] * static_cast<double>(i) /
                         static_cast<double>(grid.shape[a]);
      tables_[a][i] = {std::cos(arg), std::sin(arg)};
    }
  }
}

std::complex<double> ModeProbe::amplitude(
    std::span<const double> density) const {
  if (density.size() != grid_.size())
    throw InputError("mode probe: density size mismatch");
  std::complex<double> acc = 0.0;
  const std::size_t n0 = grid_.shape[0], n1 = grid_.shape[1],
                    n2 = grid_.shape[2];
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < n0; ++i0) {
    const std::complex<double> f0 = tables_[0][i0];
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      const std::complex<double> f01 =
          (grid_.dims > 1) ? f0 * tables_[1][i1] : f0;
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
        const std::complex<double> f =
            (grid_.dims > 2) ? f01 * tables_[2][i2] : f01;
        acc += density[idx] * f;
      }
    }
  }
  return 2.0 * acc / static_cast<double>(grid_.size());
}

const char* to_string(FitClass c) {
  switch (c) {
    case FitClass::oscillatory:
      return "oscillatory";
    case FitClass::growing:
      return "growing";
    case FitClass::decaying:
      return "decaying";
    case FitClass::marginal:
      return "marginal";
  }
  return "?";
}

namespace {

struct Recurrence {
  double c;
  double sigma_c;
};

// Least-squares (c, d) in x_{j+1} + x_{j-1} = 2 c x_j + d. The intercept
// makes the identity exact for A cos(w t) + C, A cosh(g t) + C, and pure
// exponentials alike, so a DC offset cannot bias the frequency.
Recurrence fit_recurrence(std::span<const double> x) {
  const std::size_t m = x.size() - 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 1; j + 1 < x.size(); ++j) {
    const double y = x[j + 1] + x[j - 1];
    sx += x[j];
    sy += y;
    sxx += x[j] * x[j];
    sxy += x[j] * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom <= 0.0) throw FitWindowError("mode fit: degenerate signal");
  const double slope = (m * sxy - sx * sy) / denom;
  const double c = 0.5 * slope;
  const double d = (sy - slope * sx) / m;
  double rss = 0.0;
  for (std::size_t j = 1; j + 1 < x.size(); ++j) {
    const double r = x[j + 1] + x[j - 1] - 2.0 * c * x[j] - d;
    rss += r * r;
  }
  const double dof = std::max<double>(1.0, static_cast<double>(m) - 2.0);
  const double sigma_c = 0.5 * std::sqrt(rss / dof * m / denom);
  return {c, sigma_c};
}

double series_rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

ModeFit fit_mode(std::span<const double> times,
                 std::span<const std::complex<double>> amplitudes,
                 const ModeFitOptions& opts) {
  const std::size_t n = times.size();
  if (n != amplitudes.size())
    throw InputError("fit_mode: times/amplitudes length mismatch");
  if (n < static_cast<std::size_t>(opts.min_samples))
    throw FitWindowError("fit_mode: need >= " +
                         std::to_string(opts.min_samples) + " samples, got " +
                         std::to_string(n));
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw InputError("fit_mode: times must increase");
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * dt)
      throw InputError("fit_mode: sampling must be uniform");

  // Align phases so the signed projection carries the oscillation.
  const std::complex<double> a0 = amplitudes[0];
  const double phi0 = (std::abs(a0) > 0.0) ? std::arg(a0) : 0.0;
  const std::complex<double> rot{std::cos(-phi0), std::sin(-phi0)};
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (amplitudes[i] * rot).real();

  double max_dev = 0.0, max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_dev = std::max(max_dev, std::abs(s[i] - s[0]));
    max_abs = std::max(max_abs, std::abs(s[i]));
  }
  ModeFit fit;
  if (max_dev <= 1e-10 * (max_abs + std::abs(s[0]))) {
    fit.classification = FitClass::marginal;
    return fit;  // static mode: omega = 0
  }

  // Amplitude trend decides the branch before any model is fitted.
  const std::size_t q = std::max<std::size_t>(4, n / 4);
  const double head = series_rms(std::span<const double>(s).first(q));
  const double tail = series_rms(std::span<const double>(s).last(q));
  const double efold_gate = std::exp(1.5);

  if (tail > efold_gate * head || head > efold_gate * tail) {
    // Exponential branch. Drop the transient in which the two roots
    // +/-gamma are still mixing: the first skip_efolds of net growth
    // (for decay, work on the reversed series).
    std::vector<double> w(s);
    const bool grew = tail > head;
    if (!grew) std::reverse(w.begin(), w.end());
    const double start_amp = std::abs(w[0]) + 1e-300;
    std::size_t j0 = 0;
    while (j0 + 1 < w.size() &&
           std::abs(w[j0]) < std::exp(opts.skip_efolds) * start_amp)
      ++j0;
    if (w.size() - j0 < 8)
      throw FitWindowError("fit_mode: too little signal after the transient");
    const std::span<const double> tail_span(w.data() + j0, w.size() - j0);

    const Recurrence rec = fit_recurrence(tail_span);
    double gamma;
    if (rec.c >= 1.0) {
      gamma = std::acosh(rec.c) / dt;
    } else {
      // Degenerate window; fall back to a log-slope estimate.
      std::vector<double> lt, la;
      for (std::size_t j = 0; j < tail_span.size(); ++j)
        if (std::abs(tail_span[j]) > 0.0) {
          lt.push_back(static_cast<double>(j) * dt);
          la.push_back(std::log(std::abs(tail_span[j])));
        }
      gamma = fit_line(lt, la).slope;
    }

    // Residual against the full two-root model A e^{gamma t} + B e^{-gamma t}
    // (a u = 0 seed excites both roots, so this is the linear-regime signal).
    const double z = std::exp(gamma * dt);
    double paa = 0, pbb = 0, pab = 0, pay = 0, pby = 0;
    double zp = 1.0, zm = 1.0;
    for (std::size_t j = 0; j < tail_span.size(); ++j) {
      paa += zp * zp;
      pbb += zm * zm;
      pab += zp * zm;
      pay += zp * tail_span[j];
      pby += zm * tail_span[j];
      zp *= z;
      zm /= z;
    }
    const double det = paa * pbb - pab * pab;
    double grow_amp = 0.0, decay_amp = 0.0;
    if (std::abs(det) > 0.0) {
      grow_amp = (pay * pbb - pby * pab) / det;
      decay_amp = (pby * paa - pay * pab) / det;
    }
    double rss = 0.0;
    zp = 1.0;
    zm = 1.0;
    for (std::size_t j = 0; j < tail_span.size(); ++j) {
      const double r = tail_span[j] - grow_amp * zp - decay_amp * zm;
      rss += r * r;
      zp *= z;
      zm /= z;
    }
    const double signal = series_rms(tail_span) + 1e-300;
    fit.residual =
        std::sqrt(rss / static_cast<double>(tail_span.size())) / signal;
    if (fit.residual > opts.contamination_threshold)
      throw ContaminationError(
          "fit_mode: growth model residual " + format_sci(fit.residual) +
              " too large; reduce the perturbation amplitude",
          fit.residual);

    const double span = static_cast<double>(tail_span.size() - 1) * dt;
    if (gamma * span < opts.min_efolds)
      throw FitWindowError("fit_mode: window spans fewer than " +
                           std::to_string(opts.min_efolds) + " e-folds");

    fit.value = gamma;
    fit.classification = grew ? FitClass::growing : FitClass::decaying;
    const double sinh_gd = std::sinh(std::max(gamma * dt, 1e-12));
    const double stat = rec.sigma_c / (dt * sinh_gd);
    // Systematic allowance: a coherent misfit of the residual size can
    // drift the apparent rate by about residual / window.
    const double window = static_cast<double>(tail_span.size() - 1) * dt;
    const double syst = fit.residual / std::max(window, dt);
    fit.confidence = 1.96 * std::sqrt(stat * stat + syst * syst);
    return fit;
  }

  // Oscillatory branch: remove the mean (DC offset from nonlinear mixing),
  // then the recurrence gives cos(omega dt).
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = s[i] - mean;

  const Recurrence rec = fit_recurrence(x);
  const double c = std::clamp(rec.c, -1.0, 1.0);
  const double omega = std::acos(c) / dt;

  // Amplitude/phase least squares at the fitted frequency; the intercept
  // absorbs the DC offset left over from de-meaning a non-integer number
  // of periods.
  double m00 = 0, m01 = 0, m02 = 0, m11 = 0, m12 = 0, m22 = 0;
  double r0 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double ca = std::cos(omega * t), sb = std::sin(omega * t);
    m00 += ca * ca;
    m01 += ca * sb;
    m02 += ca;
    m11 += sb * sb;
    m12 += sb;
    m22 += 1.0;
    r0 += ca * x[i];
    r1 += sb * x[i];
    r2 += x[i];
  }
  // Solve the 3x3 normal equations by Cramer's rule.
  const double det = m00 * (m11 * m22 - m12 * m12) -
                     m01 * (m01 * m22 - m12 * m02) +
                     m02 * (m01 * m12 - m11 * m02);
  double amp_a = 0.0, amp_b = 0.0, offset = 0.0;
  if (std::abs(det) > 0.0) {
    amp_a = (r0 * (m11 * m22 - m12 * m12) - m01 * (r1 * m22 - m12 * r2) +
             m02 * (r1 * m12 - m11 * r2)) /
            det;
    amp_b = (m00 * (r1 * m22 - m12 * r2) - r0 * (m01 * m22 - m12 * m02) +
             m02 * (m01 * r2 - r1 * m02)) /
            det;
    offset = (m00 * (m11 * r2 - r1 * m12) - m01 * (m01 * r2 - r1 * m02) +
              r0 * (m01 * m12 - m11 * m02)) /
             det;
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double r = x[i] - amp_a * std::cos(omega * t) -
                     amp_b * std::sin(omega * t) - offset;
    rss += r * r;
  }
  const double signal = series_rms(x) + 1e-300;
  fit.residual = std::sqrt(rss / static_cast<double>(n)) / signal;
  if (fit.residual > opts.contamination_threshold)
    throw ContaminationError(
        "fit_mode: oscillation model residual " + format_sci(fit.residual) +
            " too large; reduce the perturbation amplitude",
        fit.residual);

  const double span = times[n - 1] - times[0];
  if (omega * span < opts.min_periods * 2.0 * M_PI)
    throw FitWindowError("fit_mode: window spans fewer than " +
                         std::to_string(opts.min_periods) + " periods");

  fit.value = omega;
  fit.classification = FitClass::oscillatory;
  const double sin_od = std::abs(std::sin(omega * dt)) + 1e-300;
  const double stat = rec.sigma_c / (dt * sin_od);
  // Systematic allowance: residual-sized coherent contamination can shift
  // the phase by ~residual radians across the window.
  const double syst = fit.residual / std::max(span, dt);
  fit.confidence = 1.96 * std::sqrt(stat * stat + syst * syst);
  return fit;
}

namespace {

ValidationRow validate_single_k(const MediumSpec& medium, double k,
                                const Grid& grid,
                                const ValidationOptions& opts) {
  ValidationRow row;
  row.k = k;
  try {
    const double mode_real = k * grid.box[0] / (2.0 * M_PI);
    const long mode = std::lround(mode_real);
    if (std::abs(mode_real - static_cast<double>(mode)) > 1e-6 || mode == 0)
      throw InputError("k is not a harmonic of the box length");

    row.omega2_theory = omega_sq(medium, k);
    if (row.omega2_theory == 0.0) {
      row.classification = FitClass::marginal;
      row.note = "marginal mode (omega^2 = 0); nothing to fit";
      return row;
    }
    const double freq = std::sqrt(std::abs(row.omega2_theory));
    const bool unstable = row.omega2_theory < 0.0;
    const double t_end =
        unstable ? 1.05 * (opts.skip_efolds + opts.efolds + 1.0) / freq
                 : opts.periods * 2.0 * M_PI / freq;

    SolverConfig cfg;
    cfg.stability_safety = opts.stability_safety;
    cfg.dealias = opts.dealias;
    const double bound = SolverConfig::max_stable_dt(grid, medium.params,
                                                     opts.stability_safety);
    cfg.dt = std::min(bound, opts.max_phase_per_step / freq);
    long steps = static_cast<long>(std::ceil(t_end / cfg.dt));
    const long sample_every =
        std::max<long>(1, steps / std::max<long>(opts.samples, 1));
    steps = sample_every * ((steps + sample_every - 1) / sample_every);
    cfg.t_end = static_cast<double>(steps) * cfg.dt;

    GridState base = uniform_state(grid, medium.params.n0);
    PerturbationSpec pert;
    pert.mode = {static_cast<int>(mode), 0, 0};
    pert.amplitude = opts.eps;
    GridState state = seed(base, pert, medium.params);

    const ModeProbe probe(grid, pert.mode);
    std::vector<double> times{0.0};
    std::vector<std::complex<double>> amps{
        probe.amplitude(to_fields(state, medium.params).density)};

    Stepper stepper(medium, cfg, grid);
    stepper.advance(state, steps, sample_every,
                    [&](const GridState& st, std::span<const double> density) {
                      times.push_back(st.time);
                      amps.push_back(probe.amplitude(density));
                    });

    ModeFitOptions fopts;
    fopts.skip_efolds = opts.skip_efolds;
    const ModeFit fit = fit_mode(times, amps, fopts);
    row.measured = fit.value;
    // Fold in the splitting bias of the integrator itself: a second-order
    // Strang step carries a frequency error of about omega^3 dt^2 / 12.
    const double split_bias =
        std::pow(std::abs(fit.value), 3) * cfg.dt * cfg.dt / 12.0;
    row.confidence = std::hypot(fit.confidence, split_bias);
    row.classification = fit.classification;
    row.rel_err = std::abs(fit.value - freq) / freq;
    const bool class_ok =
        unstable ? fit.classification == FitClass::growing
                 : fit.classification == FitClass::oscillatory;
    row.within_tol =
        class_ok && row.rel_err <= (unstable ? opts.tol_gamma : opts.tol_omega);
    if (!class_ok) row.note = "classification mismatch";
  } catch (const Error& e) {
    row.note = e.what();
    row.within_tol = false;
  }
  return row;
}

}  // namespace

std::vector<ValidationRow> validate_dispersion(const MediumSpec& medium,
                                               std::span<const double> ks,
                                               const Grid& grid,
                                               const ValidationOptions& opts) {
  std::vector<ValidationRow> rows(ks.size());
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || ks.size() <= 1) {
    for (std::size_t i = 0; i < ks.size(); ++i)
      rows[i] = validate_single_k(medium, ks[i], grid, opts);
    return rows;
  }
  // Per-k runs share nothing mutable; rows land at their own index, so the
  // assembled table is deterministic regardless of scheduling.
  std::vector<std::thread> pool;
  std::size_t next = 0;
  std::mutex m;
  const int nthreads = std::min<std::size_t>(jobs, ks.size());
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(m);
          if (next >= ks.size()) return;
          i = next++;
        }
        try {
          rows[i] = validate_single_k(medium, ks[i], grid, opts);
        } catch (const std::exception& e) {
          rows[i].k = ks[i];
          rows[i].note = e.what();
          rows[i].within_tol = false;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

void write_validation_csv(std::ostream& out,
                          std::span<const ValidationRow> rows,
                          const Provenance& prov) {
  out << prov.comment_line() << "\n";
  out << "k,omega2_theory,omega_or_gamma_measured,rel_err,class\n";
  for (const auto& r : rows) {
    out << format_sci(r.k) << "," << format_sci(r.omega2_theory) << ","
        << format_sci(r.measured) << "," << format_sci(r.rel_err) << ","
        << to_string(r.classification);
    if (!r.note.empty()) out << " (" << r.note << ")";
    out << "\n";
  }
}

std::string validation_verdict_json(std::span<const ValidationRow> rows,
                                    const ValidationOptions& opts,
                                    const Provenance& prov) {
  nlohmann::json j;
  j["tool"] = "qmlab";
  j["version"] = prov.tool_version;
  j["config_hash"] = prov.config_hash;
  j["units"] = prov.units;
  j["tolerance"] = {{"omega", opts.tol_omega}, {"gamma", opts.tol_gamma}};
  bool all_ok = true;
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    all_ok = all_ok && r.within_tol;
    nlohmann::json rj = {{"k", r.k},
                         {"omega2_theory", r.omega2_theory},
                         {"measured", r.measured},
                         {"rel_err", r.rel_err},
                         {"class", to_string(r.classification)},
                         {"within_tol", r.within_tol}};
    if (!r.note.empty()) rj["note"] = r.note;
    rows_json.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows_json);
  j["all_within_tolerance"] = all_ok;
  return j.dump(2) + "\n";
}

}  // namespace qmlab
