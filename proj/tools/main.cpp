#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "options.hpp"
#include "qmlab/dispersion.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/experiments.hpp"
#include "qmlab/madelung.hpp"
#include "qmlab/numerics.hpp"
#include "qmlab/snapshot.hpp"
#include "qmlab/solver.hpp"
#include "qmlab/version.hpp"

namespace fs = std::filesystem;
using namespace qmlab;
using cli::Options;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigurationError("cannot write " + path.string());
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  open_out(path) << text;
}

// A medium with hbar = 0 cannot be integrated directly; substitute the
// requested effective hbar and report how far the quantum term is pushed
// below the physical frequencies.
MediumSpec medium_for_simulation(const Options& opts, nlohmann::json& info) {
  MediumSpec medium = opts.build();
  if (medium.params.hbar > 0.0) return medium;
  if (!(opts.classical_hbar > 0.0))
    throw ConfigurationError(
        "medium has hbar = 0; pass --classical-hbar to approximate the "
        "classical limit");
  PhysicalParams params = medium.params;
  params.hbar = opts.classical_hbar;
  MediumSpec effective =
      MediumSpec::make(params, medium.kernel, medium.nonlinearity,
                       medium.potential_mode, medium.label);
  const Grid grid = opts.make_grid();
  const double kmax = grid.k_max(0);
  const double quantum_rate = params.hbar * kmax * kmax / (2.0 * params.mass);
  const double physical_rate =
      std::sqrt(interaction_frequency_sq(effective)) +
      std::sqrt(std::abs(effective.cs2)) * kmax;
  info["classical_hbar"] = params.hbar;
  info["quantum_to_physical_rate_ratio"] =
      (physical_rate > 0.0) ? quantum_rate / physical_rate : 0.0;
  return effective;
}

int cmd_dispersion(const Options& opts) {
  const MediumSpec medium = opts.build();
  const Provenance prov = opts.provenance("dispersion");
  const auto ks = log_spaced(opts.kmin, opts.kmax, opts.knum);
  const DispersionCurve curve = sample_curve(medium, ks);
  const CriticalWavenumber critical = critical_wavenumber(medium);

  const fs::path dir(opts.outdir);
  auto csv = open_out(dir / "dispersion.csv");
  write_curve_csv(csv, curve, prov);
  write_text(dir / "dispersion.json",
             curve_summary_json(curve, critical, medium, prov));

  if (critical.k_star)
    std::printf("medium %s: k* = %.7f (residual %.2e)\n", medium.label.c_str(),
                *critical.k_star, critical.residual);
  else
    std::printf("medium %s: no critical wavenumber in [%g, %g]\n",
                medium.label.c_str(), critical.scan_lo, critical.scan_hi);
  std::printf("wrote %s and dispersion.json\n",
              (dir / "dispersion.csv").c_str());
  return 0;
}

int cmd_simulate(const Options& opts) {
  nlohmann::json info;
  const MediumSpec medium = medium_for_simulation(opts, info);
  const Grid grid = opts.make_grid();
  const Provenance prov = opts.provenance("simulate");

  SolverConfig cfg;
  cfg.stability_safety = 0.5;
  cfg.dt = (opts.dt > 0.0)
               ? opts.dt
               : 0.9 * SolverConfig::max_stable_dt(grid, medium.params, 0.5);
  cfg.t_end = opts.t_end;
  cfg.report_every = opts.report_every;
  cfg.snapshot_every = opts.snapshot_every;
  if (opts.dealias != "auto") cfg.dealias = (opts.dealias == "on");

  GridState state = uniform_state(grid, medium.params.n0);
  if (opts.eps > 0.0) {
    PerturbationSpec pert;
    for (std::size_t a = 0; a < opts.mode.size() && a < 3; ++a)
      pert.mode[a] = opts.mode[a];
    pert.amplitude = opts.eps;
    pert.phase = opts.mode_phase;
    state = seed(state, pert, medium.params);
  }

  Stepper stepper(medium, cfg, grid);
  const long steps_total =
      std::max<long>(1, std::lround(std::ceil(cfg.t_end / cfg.dt)));

  const fs::path dir(opts.outdir);
  auto report = open_out(dir / "report.csv");
  write_report_csv_header(report, prov);
  write_report_csv_row(report, stepper.report(state));

  auto snapshot_name = [&](long step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%08ld.qmf", step);
    return dir / buf;
  };
  if (cfg.snapshot_every > 0) write_snapshot_file(snapshot_name(0), state);

  GridState last_good = state.clone();
  long step = 0;
  info["blowup"] = nullptr;
  try {
    while (step < steps_total) {
      long next = steps_total;
      if (cfg.report_every > 0)
        next = std::min(next, step + cfg.report_every - (step % cfg.report_every));
      if (cfg.snapshot_every > 0)
        next = std::min(next,
                        step + cfg.snapshot_every - (step % cfg.snapshot_every));
      stepper.advance(state, next - step);
      step = next;
      if (cfg.report_every > 0 && step % cfg.report_every == 0)
        write_report_csv_row(report, stepper.report(state));
      if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0)
        write_snapshot_file(snapshot_name(step), state);
      last_good = state.clone();
    }
    if (step % std::max<long>(cfg.report_every, 1) != 0)
      write_report_csv_row(report, stepper.report(state));
  } catch (const BlowupError& e) {
    // Keep the last finite field on disk next to the report of the failure.
    write_snapshot_file(dir / "snap_last_valid.qmf", last_good);
    info["blowup"] = {{"time", e.time}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", e.what());
  }
  write_snapshot_file(dir / "snap_final.qmf",
                      info["blowup"].is_null() ? state : last_good);

  info["config"] = nlohmann::json::parse(opts.resolved_json("simulate"));
  info["config_hash"] = prov.config_hash;
  info["version"] = prov.tool_version;
  info["units"] = prov.units;
  info["dt"] = cfg.dt;
  info["steps"] = step;
  info["dealias"] = stepper.dealias_enabled();
  write_text(dir / "run.json", info.dump(2) + "\n");
  std::printf("simulated %ld steps (dt = %g); wrote report.csv, run.json\n",
              step, cfg.dt);
  return info["blowup"].is_null() ? 0 : 1;
}

int cmd_validate(const Options& opts, bool box_given) {
  const MediumSpec medium = opts.build();
  const Provenance prov = opts.provenance("validate");
  if (opts.ks.empty()) throw ConfigurationError("--ks is empty");

  double box_len;
  if (box_given) {
    box_len = opts.box.at(0);
  } else {
    // Smallest box for which every requested k is a harmonic.
    double kmin = opts.ks[0];
    for (double k : opts.ks) kmin = std::min(kmin, k);
    box_len = 2.0 * M_PI / kmin;
    for (double k : opts.ks) {
      const double harmonic = k / kmin;
      if (std::abs(harmonic - std::lround(harmonic)) > 1e-9)
        throw ConfigurationError(
            "ks are not commensurate; pass --box explicitly");
    }
  }
  const Grid grid = Grid::make_1d(opts.grid_shape.at(0), box_len);

  ValidationOptions vopts;
  vopts.eps = opts.eps;
  vopts.periods = opts.periods;
  vopts.efolds = opts.efolds;
  vopts.skip_efolds = opts.skip_efolds;
  vopts.samples = opts.samples;
  vopts.tol_omega = opts.tol_omega;
  vopts.tol_gamma = opts.tol_gamma;
  vopts.jobs = opts.jobs;
  if (opts.dealias != "auto") vopts.dealias = (opts.dealias == "on");

  const auto rows = validate_dispersion(medium, opts.ks, grid, vopts);

  const fs::path dir(opts.outdir);
  auto csv = open_out(dir / "validation.csv");
  write_validation_csv(csv, rows, prov);
  write_text(dir / "verdict.json",
             validation_verdict_json(rows, vopts, prov));

  bool all_ok = true;
  for (const auto& r : rows) {
    all_ok = all_ok && r.within_tol;
    const std::string note = r.note.empty() ? "" : " [" + r.note + "]";
    std::printf("k = %-8g theory w2 = %-12g measured = %-12g rel err = %-10g "
                "%s%s%s\n",
                r.k, r.omega2_theory, r.measured, r.rel_err,
                to_string(r.classification), r.within_tol ? " ok" : " FAIL",
                note.c_str());
  }
  std::printf("%s\n", all_ok ? "validation PASSED" : "validation FAILED");
  return all_ok ? 0 : 1;
}

int cmd_scan(Options opts) {
  const Provenance prov = opts.provenance("scan");
  if (opts.scan_steps < 1) throw ConfigurationError("--steps must be >= 1");

  auto apply = [](Options& o, const std::string& name, double v) {
    if (name == "cs2") o.cs2 = v;
    else if (name == "contact-g") o.contact_g = v;
    else if (name == "omega-j") o.omega_j = v;
    else if (name == "grav-g") { o.grav_g = v; o.omega_j.reset(); }
    else if (name == "lambda") o.lambda = v;
    else if (name == "log-b") o.log_b = v;
    else if (name == "charge") o.charge = v;
    else if (name == "eps0") o.eps0 = v;
    else if (name == "sigma-l") o.sigma_l = v;
    else if (name == "sigma-r") o.sigma_r = v;
    else if (name == "intensity") o.intensity = v;
    else if (name == "alpha") o.alpha = v;
    else if (name == "beta") o.beta = v;
    else if (name == "gamma-nmc") o.gamma_nmc = format_sci(v);
    else if (name == "hbar") o.hbar = v;
    else if (name == "mass") o.mass = v;
    else if (name == "n0") o.n0 = v;
    else throw ConfigurationError("unknown --scan-param: " + name);
  };

  const fs::path dir(opts.outdir);
  auto csv = open_out(dir / "scan.csv");
  csv << prov.comment_line() << "\n";
  csv << "value,k_star,residual,note\n";
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < opts.scan_steps; ++i) {
    const double v =
        (opts.scan_steps == 1)
            ? opts.scan_from
            : opts.scan_from + (opts.scan_to - opts.scan_from) * i /
                                   (opts.scan_steps - 1);
    Options o = opts;
    apply(o, opts.scan_param, v);
    nlohmann::json row;
    row["value"] = v;
    csv << format_sci(v) << ",";
    try {
      const MediumSpec medium = o.build();
      const CriticalWavenumber c = critical_wavenumber(medium);
      if (c.k_star) {
        csv << format_sci(*c.k_star) << "," << format_sci(c.residual) << ",\n";
        row["k_star"] = *c.k_star;
        row["residual"] = c.residual;
      } else {
        csv << ",,single-signed\n";
        row["k_star"] = nullptr;
      }
    } catch (const Error& e) {
      csv << ",," << e.what() << "\n";
      row["error"] = e.what();
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json j;
  j["version"] = prov.tool_version;
  j["config_hash"] = prov.config_hash;
  j["units"] = prov.units;
  j["param"] = opts.scan_param;
  j["rows"] = std::move(rows);
  write_text(dir / "scan.json", j.dump(2) + "\n");
  std::printf("scanned %s over [%g, %g] in %d steps; wrote scan.csv\n",
              opts.scan_param.c_str(), opts.scan_from, opts.scan_to,
              opts.scan_steps);
  return 0;
}

// Accepts the dispersion.csv format (k,omega_sq,...) or plain two-column
// whitespace rows; '#' lines and a header row are skipped.
std::pair<std::vector<double>, std::vector<double>> read_target_curve(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open target curve: " + path);
  std::vector<double> ks, w2;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (auto& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    double k, w;
    if (!(row >> k >> w)) continue;  // header row
    ks.push_back(k);
    w2.push_back(w);
  }
  return {std::move(ks), std::move(w2)};
}

int cmd_match_analog(const Options& opts) {
  if (opts.target_file.empty())
    throw ConfigurationError("match-analog requires --target");
  const Provenance prov = opts.provenance("match-analog");
  const auto [ks, w2] = read_target_curve(opts.target_file);

  std::optional<double> assume_cs2;
  if (opts.match_cs2 != "fit") {
    try {
      assume_cs2 = std::stod(opts.match_cs2);
    } catch (const std::exception&) {
      throw ConfigurationError("--match-cs2 must be a number or 'fit'");
    }
  }
  const PhysicalParams params{opts.mass, opts.hbar, opts.n0};
  const AnalogMatch match = match_analog(ks, w2, params, assume_cs2);

  const fs::path dir(opts.outdir);
  auto table = open_out(dir / "kernel.txt");
  save_kernel_table(table, match.kernel,
                    {prov.comment_line().substr(2),
                     std::string("cs2 ") + format_sci(match.cs2) +
                         (match.cs2_fitted ? " (fitted)" : " (assumed)")});

  nlohmann::json j;
  j["version"] = prov.tool_version;
  j["config_hash"] = prov.config_hash;
  j["units"] = prov.units;
  j["cs2"] = match.cs2;
  j["cs2_fitted"] = match.cs2_fitted;
  j["samples"] = match.kernel.k.size();
  write_text(dir / "match.json", j.dump(2) + "\n");
  std::printf("matched kernel over %zu samples, cs2 = %.10g (%s); wrote "
              "kernel.txt\n",
              match.kernel.k.size(), match.cs2,
              match.cs2_fitted ? "fitted" : "assumed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("qmlab ") + version +
               " - collective excitations of quantum media: closed-form "
               "dispersion analysis and split-step simulation"};
  app.require_subcommand(1);

  Options opts;
  try {
    opts.load_config(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  opts.attach(app);

  auto* sub_disp = app.add_subcommand(
      "dispersion", "sample omega^2(k), classify stability, locate k*");
  auto* sub_sim = app.add_subcommand(
      "simulate", "integrate the wave equation and stream reports/snapshots");
  auto* sub_val = app.add_subcommand(
      "validate", "measure mode frequencies and compare with theory");
  auto* sub_scan = app.add_subcommand(
      "scan", "sweep one medium parameter and track the critical wavenumber");
  auto* sub_match = app.add_subcommand(
      "match-analog", "invert a target dispersion curve into a kernel table");
  for (auto* sub : {sub_disp, sub_sim, sub_val, sub_scan, sub_match})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    fs::create_directories(opts.outdir);
    if (sub_disp->parsed()) return cmd_dispersion(opts);
    if (sub_sim->parsed()) return cmd_simulate(opts);
    if (sub_val->parsed()) return cmd_validate(opts, app.count("--box") > 0);
    if (sub_scan->parsed()) return cmd_scan(opts);
    if (sub_match->parsed()) return cmd_match_analog(opts);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
