#include "qmlab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "qmlab/errors.hpp"
#include "qmlab/numerics.hpp"

namespace qmlab {

double omega_sq(const MediumSpec& medium, double k) {
  if (!(k > 0.0)) throw DomainError("omega_sq requires k > 0");
  const auto& p = medium.params;
  const double k2 = k * k;
  double total = medium.cs2 * k2;
  if (!medium.kernel.is_none())
    total += p.n0 / p.mass * medium.kernel.fourier(k) * k2;
  if (p.hbar > 0.0) {
    const double quantum = p.hbar * k2 / (2.0 * p.mass);
    total += quantum * quantum;
  }
  return total;
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::stable:
      return "stable";
    case StabilityClass::marginal:
      return "marginal";
    case StabilityClass::unstable:
      return "unstable";
  }
  return "?";
}

DispersionCurve sample_curve(const MediumSpec& medium,
                             std::span<const double> k_grid) {
  DispersionCurve curve;
  const std::size_t n = k_grid.size();
  curve.k.assign(k_grid.begin(), k_grid.end());
  curve.omega2.resize(n);
  curve.classification.resize(n);
  curve.growth.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    const double w2 = omega_sq(medium, k_grid[i]);
    curve.omega2[i] = w2;
    if (w2 > 0.0) {
      curve.classification[i] = StabilityClass::stable;
    } else if (w2 < 0.0) {
      curve.classification[i] = StabilityClass::unstable;
      curve.growth[i] = std::sqrt(-w2);
    } else {
      curve.classification[i] = StabilityClass::marginal;
    }
  }
  return curve;
}

namespace {

/// Characteristic wavenumber from the competing scales of the medium:
/// interaction vs quantum pressure, interaction vs sound, sound vs quantum.
double characteristic_k(const MediumSpec& medium) {
  const auto& p = medium.params;
  const double omega2 = interaction_frequency_sq(medium);
  const double omega = std::sqrt(omega2);
  const double abs_cs = std::sqrt(std::abs(medium.cs2));
  double k_char = 0.0;
  if (omega > 0.0 && p.hbar > 0.0)
    k_char = std::max(k_char, std::sqrt(2.0 * p.mass * omega / p.hbar));
  if (omega > 0.0 && abs_cs > 0.0) k_char = std::max(k_char, omega / abs_cs);
  if (abs_cs > 0.0 && p.hbar > 0.0)
    k_char = std::max(k_char, 2.0 * p.mass * abs_cs / p.hbar);
  return (k_char > 0.0) ? k_char : 1.0;
}

}  // namespace

CriticalWavenumber critical_wavenumber(const MediumSpec& medium,
                                       const RootScanOptions& opts) {
  const double k_char = characteristic_k(medium);
  double lo = k_char * opts.k_lo_factor;
  double hi = opts.k_hi_override.value_or(k_char * opts.k_hi_factor);

  // Clip to the kernel's evaluable range (custom tables are bounded).
  const auto [dom_lo, dom_hi] = medium.kernel.domain();
  lo = std::max(lo, dom_lo > 0.0 ? dom_lo : lo);
  if (std::isfinite(dom_hi)) hi = std::min(hi, dom_hi);
  if (!(hi > lo)) throw InputError("critical_wavenumber: empty scan range");

  const int decades = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo))));
  const int n_samples = std::max(16, decades * opts.samples_per_decade);
  const std::vector<double> ks = log_spaced(lo, hi, n_samples);

  CriticalWavenumber result;
  result.scan_lo = lo;
  result.scan_hi = hi;

  double prev_k = ks[0];
  double prev_w2 = omega_sq(medium, prev_k);
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double w2 = omega_sq(medium, ks[i]);
    if (prev_w2 == 0.0) {  // landed exactly on the root
      result.k_star = prev_k;
      result.bracket_lo = result.bracket_hi = prev_k;
      result.residual = 0.0;
      return result;
    }
    if ((prev_w2 > 0.0) != (w2 > 0.0)) {
      const auto root = bisect([&](double k) { return omega_sq(medium, k); },
                               prev_k, ks[i]);
      result.k_star = root.root;
      result.bracket_lo = root.bracket_lo;
      result.bracket_hi = root.bracket_hi;
      result.residual = std::abs(omega_sq(medium, root.root));
      return result;
    }
    prev_k = ks[i];
    prev_w2 = w2;
  }
  return result;  // single-signed over the scan range: no critical k
}

double omega_sq_nmc(const NmcParams& nmc, const PhysicalParams& params,
                    double k) {
  if (!(k > 0.0)) throw DomainError("omega_sq_nmc requires k > 0");
  const double k2 = k * k;
  const double denom = 1.0 + 3.0 * nmc.alpha * k2;
  if (std::abs(denom) < 1e-14)
    throw SingularityError("NMC dispersion pole 1 + 3 alpha k^2 = 0 at k", k);
  double total = -((nmc.alpha * nmc.gamma - 0.5 * nmc.beta) * k2 +
                   0.25 * nmc.gamma) *
                 params.mass * params.n0 / denom;
  if (params.hbar > 0.0) {
    const double quantum = params.hbar * k2 / (2.0 * params.mass);
    total += quantum * quantum;
  }
  return total;
}

double omega_sq_chemotaxis(double lambda, double rho_bar, double cs2,
                           double k) {
  if (!(rho_bar > 0.0))
    throw InvalidParameter("chemotaxis dispersion: rho_bar must be > 0");
  return -lambda * rho_bar + cs2 * k * k;
}

std::optional<double> chemotaxis_critical_wavenumber(double lambda,
                                                     double rho_bar,
                                                     double cs2) {
  if (!(rho_bar > 0.0))
    throw InvalidParameter("chemotaxis dispersion: rho_bar must be > 0");
  if (lambda > 0.0 && cs2 > 0.0) return std::sqrt(lambda * rho_bar / cs2);
  return std::nullopt;  // repulsive (all stable) or pressureless (all unstable)
}

AnalogMatch match_analog(std::span<const double> k,
                         std::span<const double> omega2_target,
                         const PhysicalParams& params,
                         std::optional<double> assume_cs2) {
  params.validate();
  if (k.size() != omega2_target.size())
    throw InputError("match_analog: k and omega^2 lengths differ");
  if (k.size() < 8)
    throw InputError("match_analog: need >= 8 target samples, got " +
                     std::to_string(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(k[i] > 0.0)) throw InputError("match_analog: k must be > 0");
    if (i > 0 && !(k[i] > k[i - 1]))
      throw InputError("match_analog: k must be strictly ascending");
  }

  const double quartic = params.hbar * params.hbar /
                         (4.0 * params.mass * params.mass);

  AnalogMatch out;
  if (assume_cs2) {
    out.cs2 = *assume_cs2;
  } else {
    // Fit const + cs2 k^2 through the large-k half of the quantum-subtracted
    // residual; the slope is the sound-speed estimate.
    const std::size_t half = k.size() / 2;
    std::vector<double> x, y;
    x.reserve(k.size() - half);
    y.reserve(k.size() - half);
    for (std::size_t i = half; i < k.size(); ++i) {
      x.push_back(k[i] * k[i]);
      y.push_back(omega2_target[i] - quartic * k[i] * k[i] * k[i] * k[i]);
    }
    out.cs2 = fit_line(x, y).slope;
    out.cs2_fitted = true;
  }

  out.kernel.k.assign(k.begin(), k.end());
  out.kernel.vk.resize(k.size());
  const double m_over_n0 = params.mass / params.n0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double k2 = k[i] * k[i];
    out.kernel.vk[i] =
        m_over_n0 * (omega2_target[i] - out.cs2 * k2 - quartic * k2 * k2) / k2;
  }
  return out;
}

void write_curve_csv(std::ostream& out, const DispersionCurve& curve,
                     const Provenance& prov) {
  out << prov.comment_line() << "\n";
  out << "k,omega_sq,class,gamma\n";
  for (std::size_t i = 0; i < curve.k.size(); ++i) {
    out << format_sci(curve.k[i]) << "," << format_sci(curve.omega2[i]) << ","
        << to_string(curve.classification[i]) << ",";
    if (curve.classification[i] == StabilityClass::unstable)
      out << format_sci(curve.growth[i]);
    out << "\n";
  }
}

std::string curve_summary_json(const DispersionCurve& curve,
                               const CriticalWavenumber& critical,
                               const MediumSpec& medium,
                               const Provenance& prov) {
  nlohmann::json j;
  j["tool"] = "qmlab";
  j["version"] = prov.tool_version;
  j["config_hash"] = prov.config_hash;
  j["units"] = prov.units;
  j["medium"] = medium.label;
  j["cs2"] = medium.cs2;
  const auto& p = medium.params;
  j["quartic_coeff"] = p.hbar * p.hbar / (4.0 * p.mass * p.mass);

  if (critical.k_star) {
    j["k_star"] = *critical.k_star;
    j["k_star_bracket"] = {critical.bracket_lo, critical.bracket_hi};
    j["k_star_residual"] = critical.residual;
  } else {
    j["k_star"] = nullptr;
  }
  j["scan_range"] = {critical.scan_lo, critical.scan_hi};

  if (!curve.k.empty()) {
    const std::size_t last = curve.k.size() - 1;
    j["limits"]["k_min"] = curve.k.front();
    j["limits"]["omega2_over_k2_at_kmin"] =
        curve.omega2.front() / (curve.k.front() * curve.k.front());
    j["limits"]["k_max"] = curve.k.back();
    const double quartic = p.hbar * p.hbar / (4.0 * p.mass * p.mass);
    const double k4 = std::pow(curve.k[last], 4);
    j["limits"]["omega2_over_quartic_at_kmax"] =
        (quartic > 0.0) ? curve.omega2[last] / (quartic * k4) : 0.0;

    nlohmann::json bands = nlohmann::json::array();
    std::size_t start = 0;
    for (std::size_t i = 1; i <= curve.k.size(); ++i) {
      if (i == curve.k.size() ||
          curve.classification[i] != curve.classification[start]) {
        bands.push_back({{"k_from", curve.k[start]},
                         {"k_to", curve.k[i - 1]},
                         {"class", to_string(curve.classification[start])}});
        start = i;
      }
    }
    j["bands"] = std::move(bands);
  }
  return j.dump(2) + "\n";
}

}  // namespace qmlab
