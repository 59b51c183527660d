#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmlab/grid.hpp"
#include "qmlab/medium.hpp"
#include "qmlab/provenance.hpp"

namespace qmlab::cli {

/// Flat bag of every run option. Values are primed from the unit system,
/// then the JSON config file, then command-line flags (flags win).
struct Options {
  // global
  std::string config_file;
  std::string outdir = ".";
  std::string units = "natural";

  // medium
  std::string preset = "free";
  double mass = 1.0;
  double hbar = 1.0;
  double n0 = 1.0;
  std::optional<double> cs2;
  double contact_g = 1.0;
  int fermion_dim = 3;
  bool fermion_pressure = false;
  double log_a = 1.0;
  double log_b = -1.0;
  std::optional<double> grav_g;
  std::optional<double> omega_j;
  double charge = 1.0;
  double eps0 = 1.0;
  double sigma_r = 1.0;
  double sigma_l = 0.5;
  double intensity = 1.0;
  double light_speed = 1.0;
  double lambda = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::string gamma_nmc = "16piG";  // accepts <num>, <num>pi, <num>piG
  std::string kernel_file;
  std::string policy = "auto";  // auto|none|neutralizing|swindle

  // dispersion
  double kmin = 0.1;
  double kmax = 10.0;
  int knum = 200;

  // solver / simulate
  std::vector<std::size_t> grid_shape{512};
  std::vector<double> box{12.566370614359172};  // 4 pi
  double dt = 0.0;  // 0 = auto (90% of the stability bound)
  double t_end = 1.0;
  long report_every = 16;
  long snapshot_every = 0;
  std::string dealias = "auto";  // auto|on|off
  double classical_hbar = 0.0;   // substitute for hbar = 0 media
  double eps = 1e-4;
  std::vector<int> mode{1};
  double mode_phase = 0.0;

  // validate
  std::vector<double> ks{0.5, 1.0, 2.0};
  double periods = 6.0;
  double efolds = 4.0;
  double skip_efolds = 1.0;
  long samples = 256;
  double tol_omega = 0.01;
  double tol_gamma = 0.02;
  int jobs = 1;

  // scan
  std::string scan_param = "cs2";
  double scan_from = 0.0;
  double scan_to = 1.0;
  int scan_steps = 11;

  // match-analog
  std::string target_file;
  std::string match_cs2 = "fit";

  /// Register every option on the app (shared across subcommands).
  void attach(CLI::App& app);

  /// Apply unit-system defaults, then overlay the JSON config file (if
  /// any). Must run before CLI11 parses argv so flags keep the last word.
  void load_config(int argc, char** argv);

  /// Build the medium described by the flags. `resolved` collects the
  /// fields that were actually used (for hashing and run summaries).
  MediumSpec build() const;

  /// gamma_nmc with the pi / piG suffixes resolved.
  double gamma_nmc_value() const;
  double reference_grav() const;

  Grid make_grid() const;
  Provenance provenance(const std::string& command) const;
  std::string resolved_json(const std::string& command) const;
};

}  // namespace qmlab::cli
