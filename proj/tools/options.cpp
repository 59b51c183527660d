#include "options.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qmlab/errors.hpp"
#include "qmlab/numerics.hpp"

namespace qmlab::cli {

namespace {

// CODATA values; used as defaults when --units si is selected.
constexpr double kSiHbar = 1.054571817e-34;
constexpr double kSiGrav = 6.67430e-11;
constexpr double kSiCharge = 1.602176634e-19;
constexpr double kSiEps0 = 8.8541878128e-12;
constexpr double kSiLightSpeed = 2.99792458e8;

std::string normalize_preset(std::string name) {
  for (auto& c : name)
    if (c == '_') c = '-';
  if (name == "gravity") return "self-gravity";
  if (name == "plasma") return "quantum-plasma";
  if (name == "bec") return "bec-contact";
  if (name == "fermion") return "fermion-gas";
  if (name == "log") return "log-fluid";
  if (name == "nmc") return "nmc-gravity";
  if (name == "mot") return "mot-cloud";
  return name;
}

}  // namespace

void Options::attach(CLI::App& app) {
  app.add_option("-c,--config", config_file, "JSON config file (flags win)");
  app.add_option("-o,--outdir", outdir,
                 "output directory (env QMLAB_OUTDIR)")
      ->capture_default_str();
  app.add_option("--units", units, "unit system: natural | si")
      ->check(CLI::IsMember({"natural", "si"}))
      ->capture_default_str();

  app.add_option("--preset", preset,
                 "medium: free | bec-contact | fermion-gas | log-fluid | "
                 "self-gravity | quantum-plasma | mot-cloud | chemotaxis | "
                 "nmc-gravity | custom")
      ->capture_default_str();
  app.add_option("--mass", mass)->capture_default_str();
  app.add_option("--hbar", hbar)->capture_default_str();
  app.add_option("--n0", n0, "background number density")->capture_default_str();
  app.add_option("--cs2", cs2, "squared sound speed via a contact term");
  app.add_option("--contact-g", contact_g, "contact coupling g (mu = g n)")
      ->capture_default_str();
  app.add_option("--fermion-dim", fermion_dim)->capture_default_str();
  app.add_flag("--fermion-pressure", fermion_pressure,
               "use degeneracy pressure for gravity/plasma presets");
  app.add_option("--log-a", log_a)->capture_default_str();
  app.add_option("--log-b", log_b, "logarithmic strength (p = -b n)")
      ->capture_default_str();
  app.add_option("--grav-g", grav_g, "gravitational constant");
  app.add_option("--omega-j", omega_j, "Jeans frequency (wins over --grav-g)");
  app.add_option("--charge", charge)->capture_default_str();
  app.add_option("--eps0", eps0)->capture_default_str();
  app.add_option("--sigma-r", sigma_r)->capture_default_str();
  app.add_option("--sigma-l", sigma_l)->capture_default_str();
  app.add_option("--intensity", intensity)->capture_default_str();
  app.add_option("--light-speed", light_speed)->capture_default_str();
  app.add_option("--lambda", lambda, "chemotactic coupling (>0 attractive)")
      ->capture_default_str();
  app.add_option("--alpha", alpha)->capture_default_str();
  app.add_option("--beta", beta)->capture_default_str();
  app.add_option("--gamma-nmc", gamma_nmc,
                 "NMC coupling; accepts forms like 4, 2pi, 16piG")
      ->capture_default_str();
  app.add_option("--kernel-file", kernel_file, "Vk table for --preset custom");
  app.add_option("--policy", policy,
                 "zero-mode policy: auto | none | neutralizing | swindle")
      ->check(CLI::IsMember({"auto", "none", "neutralizing", "swindle"}))
      ->capture_default_str();

  app.add_option("--kmin", kmin)->capture_default_str();
  app.add_option("--kmax", kmax)->capture_default_str();
  app.add_option("--knum", knum)->capture_default_str();

  app.add_option("--grid", grid_shape, "grid points per axis (1-3 values)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--box", box, "box lengths per axis")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--dt", dt, "time step (0 = 90% of the stability bound)")
      ->capture_default_str();
  app.add_option("--t-end", t_end)->capture_default_str();
  app.add_option("--report-every", report_every)->capture_default_str();
  app.add_option("--snapshot-every", snapshot_every)->capture_default_str();
  app.add_option("--dealias", dealias, "auto | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  app.add_option("--classical-hbar", classical_hbar,
                 "effective hbar used to integrate hbar = 0 media")
      ->capture_default_str();
  app.add_option("--eps", eps, "perturbation amplitude")->capture_default_str();
  app.add_option("--mode", mode, "perturbation mode index per axis")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--phase", mode_phase)->capture_default_str();

  app.add_option("--ks", ks, "wavenumbers to validate")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--periods", periods)->capture_default_str();
  app.add_option("--efolds", efolds)->capture_default_str();
  app.add_option("--skip-efolds", skip_efolds)->capture_default_str();
  app.add_option("--samples", samples)->capture_default_str();
  app.add_option("--tol-omega", tol_omega)->capture_default_str();
  app.add_option("--tol-gamma", tol_gamma)->capture_default_str();
  app.add_option("--jobs", jobs, "concurrent per-k runs")->capture_default_str();

  app.add_option("--scan-param", scan_param,
                 "medium field swept by `scan` (e.g. cs2, omega-j, lambda)")
      ->capture_default_str();
  app.add_option("--from", scan_from)->capture_default_str();
  app.add_option("--to", scan_to)->capture_default_str();
  app.add_option("--steps", scan_steps)->capture_default_str();

  app.add_option("--target", target_file, "target dispersion curve CSV");
  app.add_option("--match-cs2", match_cs2,
                 "sound speed for match-analog: a number or 'fit'")
      ->capture_default_str();
}

void Options::load_config(int argc, char** argv) {
  // Flags win over the config file, and the config file wins over unit
  // defaults, so the file (and the unit system) must be read before CLI11
  // parses argv. Pre-scan argv for just those two options.
  auto value_of = [&](const std::string& long_name,
                      const std::string& short_name) -> std::string {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if ((arg == long_name || (!short_name.empty() && arg == short_name)) &&
          i + 1 < argc)
        return argv[i + 1];
      const std::string prefix = long_name + "=";
      if (arg.rfind(prefix, 0) == 0) return arg.substr(prefix.size());
    }
    return {};
  };
  config_file = value_of("--config", "-c");
  std::string units_flag = value_of("--units", "");

  if (const char* env = std::getenv("QMLAB_OUTDIR"); env && *env) outdir = env;

  nlohmann::json cfg;
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    if (!f) throw ConfigurationError("cannot open config file: " + config_file);
    try {
      f >> cfg;
    } catch (const std::exception& e) {
      throw ConfigurationError("config parse error: " + std::string(e.what()));
    }
  }

  units = !units_flag.empty()  ? units_flag
          : cfg.contains("units") ? cfg["units"].get<std::string>()
                                  : units;
  if (units == "si") {
    hbar = kSiHbar;
    charge = kSiCharge;
    eps0 = kSiEps0;
    light_speed = kSiLightSpeed;
  } else if (units != "natural") {
    throw ConfigurationError("unknown unit system: " + units);
  }

  if (cfg.is_null()) return;
  auto section = [&](const char* name) -> nlohmann::json {
    return cfg.contains(name) ? cfg[name] : nlohmann::json::object();
  };
  auto get = [](const nlohmann::json& j, const char* key, auto& out) {
    if (j.contains(key)) j[key].get_to(out);
  };
  auto get_opt = [](const nlohmann::json& j, const char* key,
                    std::optional<double>& out) {
    if (j.contains(key)) out = j[key].get<double>();
  };

  get(cfg, "outdir", outdir);
  const nlohmann::json med = section("medium");
  get(med, "preset", preset);
  get(med, "mass", mass);
  get(med, "hbar", hbar);
  get(med, "n0", n0);
  get_opt(med, "cs2", cs2);
  get(med, "contact_g", contact_g);
  get(med, "fermion_dim", fermion_dim);
  get(med, "fermion_pressure", fermion_pressure);
  get(med, "log_a", log_a);
  get(med, "log_b", log_b);
  get_opt(med, "grav_g", grav_g);
  get_opt(med, "omega_j", omega_j);
  get(med, "charge", charge);
  get(med, "eps0", eps0);
  get(med, "sigma_r", sigma_r);
  get(med, "sigma_l", sigma_l);
  get(med, "intensity", intensity);
  get(med, "light_speed", light_speed);
  get(med, "lambda", lambda);
  get(med, "alpha", alpha);
  get(med, "beta", beta);
  get(med, "gamma_nmc", gamma_nmc);
  get(med, "kernel_file", kernel_file);
  get(med, "policy", policy);

  const nlohmann::json disp = section("dispersion");
  get(disp, "kmin", kmin);
  get(disp, "kmax", kmax);
  get(disp, "knum", knum);

  const nlohmann::json sol = section("solver");
  get(sol, "grid", grid_shape);
  get(sol, "box", box);
  get(sol, "dt", dt);
  get(sol, "t_end", t_end);
  get(sol, "report_every", report_every);
  get(sol, "snapshot_every", snapshot_every);
  get(sol, "dealias", dealias);
  get(sol, "classical_hbar", classical_hbar);

  const nlohmann::json exp = section("experiment");
  get(exp, "eps", eps);
  get(exp, "mode", mode);
  get(exp, "phase", mode_phase);
  get(exp, "ks", ks);
  get(exp, "periods", periods);
  get(exp, "efolds", efolds);
  get(exp, "skip_efolds", skip_efolds);
  get(exp, "samples", samples);
  get(exp, "tol_omega", tol_omega);
  get(exp, "tol_gamma", tol_gamma);
  get(exp, "jobs", jobs);

  const nlohmann::json scan = section("scan");
  get(scan, "param", scan_param);
  get(scan, "from", scan_from);
  get(scan, "to", scan_to);
  get(scan, "steps", scan_steps);

  const nlohmann::json match = section("match");
  get(match, "target", target_file);
  get(match, "cs2", match_cs2);
}

double Options::reference_grav() const {
  if (grav_g) return *grav_g;
  if (omega_j) return (*omega_j) * (*omega_j) / (4.0 * M_PI * mass * n0);
  return (units == "si") ? kSiGrav : 1.0 / (4.0 * M_PI);
}

double Options::gamma_nmc_value() const {
  std::string s = gamma_nmc;
  double factor = 1.0;
  if (s.size() > 3 && s.substr(s.size() - 3) == "piG") {
    factor = M_PI * reference_grav();
    s.resize(s.size() - 3);
  } else if (s.size() > 2 && s.substr(s.size() - 2) == "pi") {
    factor = M_PI;
    s.resize(s.size() - 2);
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v * factor;
  } catch (const std::exception&) {
    throw ConfigurationError("cannot parse --gamma-nmc value: " + gamma_nmc);
  }
}

MediumSpec Options::build() const {
  const std::string name = normalize_preset(preset);
  const PhysicalParams params{mass, hbar, n0};
  using namespace presets;
  if (name == "free") {
    Free p;
    p.params = params;
    p.cs2 = cs2;
    return build_medium(p);
  }
  if (name == "bec-contact") {
    BecContact p;
    p.params = params;
    p.g = cs2 ? *cs2 * mass / n0 : contact_g;
    return build_medium(p);
  }
  if (name == "fermion-gas") {
    FermionGas p;
    p.params = params;
    p.dim = fermion_dim;
    return build_medium(p);
  }
  if (name == "log-fluid") {
    LogFluid p;
    p.params = params;
    p.a = log_a;
    p.b = log_b;
    return build_medium(p);
  }
  if (name == "self-gravity") {
    SelfGravity p;
    p.params = params;
    p.grav_g = grav_g;
    p.omega_j = omega_j;
    if (!p.grav_g && !p.omega_j) p.omega_j = 1.0;
    p.cs2 = cs2;
    p.fermion_pressure = fermion_pressure;
    return build_medium(p);
  }
  if (name == "quantum-plasma") {
    QuantumPlasma p;
    p.params = params;
    p.charge = charge;
    p.eps0 = eps0;
    p.cs2 = cs2;
    p.fermion_pressure = fermion_pressure;
    return build_medium(p);
  }
  if (name == "mot-cloud") {
    MotCloud p;
    p.params = params;
    p.sigma_r = sigma_r;
    p.sigma_l = sigma_l;
    p.intensity = intensity;
    p.light_speed = light_speed;
    p.cs2 = cs2;
    return build_medium(p);
  }
  if (name == "chemotaxis") {
    Chemotaxis p;
    p.mass = mass;
    p.n0 = n0;
    p.lambda = lambda;
    p.cs2 = cs2.value_or(1.0);
    return build_medium(p);
  }
  if (name == "nmc-gravity") {
    NmcGravity p;
    p.params = params;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma_nmc_value();
    return build_medium(p);
  }
  if (name == "custom") {
    if (kernel_file.empty())
      throw ConfigurationError("--preset custom requires --kernel-file");
    InteractionKernel kernel =
        InteractionKernel::custom_table(load_kernel_table_file(kernel_file));
    Nonlinearity nl = cs2 && *cs2 != 0.0
                          ? Nonlinearity::contact(*cs2 * mass / n0)
                          : Nonlinearity::none();
    ExternalPotentialMode mode = ExternalPotentialMode::jeans_swindle;
    if (policy == "none") mode = ExternalPotentialMode::none;
    if (policy == "neutralizing")
      mode = ExternalPotentialMode::neutralizing_background;
    return MediumSpec::make(params, std::move(kernel), std::move(nl), mode,
                            "custom");
  }
  throw ConfigurationError("unknown preset: " + preset);
}

Grid Options::make_grid() const {
  const int dims = static_cast<int>(grid_shape.size());
  std::vector<double> b = box;
  if (b.size() == 1 && dims > 1) b.assign(dims, b[0]);
  if (static_cast<int>(b.size()) != dims)
    throw ConfigurationError("--grid and --box ranks differ");
  return Grid::make(dims, grid_shape, b);
}

std::string Options::resolved_json(const std::string& command) const {
  nlohmann::json j;
  j["command"] = command;
  j["units"] = units;
  j["medium"] = {{"preset", normalize_preset(preset)},
                 {"mass", mass},
                 {"hbar", hbar},
                 {"n0", n0},
                 {"contact_g", contact_g},
                 {"fermion_dim", fermion_dim},
                 {"fermion_pressure", fermion_pressure},
                 {"log_a", log_a},
                 {"log_b", log_b},
                 {"charge", charge},
                 {"eps0", eps0},
                 {"sigma_r", sigma_r},
                 {"sigma_l", sigma_l},
                 {"intensity", intensity},
                 {"light_speed", light_speed},
                 {"lambda", lambda},
                 {"alpha", alpha},
                 {"beta", beta},
                 {"gamma_nmc", gamma_nmc},
                 {"kernel_file", kernel_file},
                 {"policy", policy}};
  if (cs2) j["medium"]["cs2"] = *cs2;
  if (grav_g) j["medium"]["grav_g"] = *grav_g;
  if (omega_j) j["medium"]["omega_j"] = *omega_j;
  j["dispersion"] = {{"kmin", kmin}, {"kmax", kmax}, {"knum", knum}};
  j["solver"] = {{"grid", grid_shape},
                 {"box", box},
                 {"dt", dt},
                 {"t_end", t_end},
                 {"report_every", report_every},
                 {"snapshot_every", snapshot_every},
                 {"dealias", dealias},
                 {"classical_hbar", classical_hbar}};
  j["experiment"] = {{"eps", eps},
                     {"mode", mode},
                     {"phase", mode_phase},
                     {"ks", ks},
                     {"periods", periods},
                     {"efolds", efolds},
                     {"skip_efolds", skip_efolds},
                     {"samples", samples},
                     {"tol_omega", tol_omega},
                     {"tol_gamma", tol_gamma},
                     {"jobs", jobs}};
  j["scan"] = {{"param", scan_param},
               {"from", scan_from},
               {"to", scan_to},
               {"steps", scan_steps}};
  j["match"] = {{"target", target_file}, {"cs2", match_cs2}};
  return j.dump();
}

Provenance Options::provenance(const std::string& command) const {
  Provenance p;
  p.units = units;
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(resolved_json(command))));
  p.config_hash = buf;
  return p;
}

}  // namespace qmlab::cli
