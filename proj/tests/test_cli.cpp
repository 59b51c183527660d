#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = QMLAB_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qmlab_cli_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const fs::path& p) {
  return nlohmann::json::parse(slurp(p));
}

}  // namespace

TEST_CASE("dispersion subcommand: gravity k* lands in the JSON summary") {
  TempDir dir;
  const int rc = run("dispersion --preset self-gravity --omega-j 1 --cs2 0 -o " +
                     dir.path.string());
  CHECK(rc == 0);
  const auto j = load_json(dir.path / "dispersion.json");
  CHECK(j["k_star"].get<double>() == doctest::Approx(1.4142136).epsilon(1e-6));
  const std::string csv = slurp(dir.path / "dispersion.csv");
  CHECK(csv.rfind("# qmlab", 0) == 0);  // provenance first line
  CHECK(csv.find("k,omega_sq,class,gamma") != std::string::npos);
}

TEST_CASE("dispersion subcommand: free medium is stable everywhere") {
  TempDir dir;
  const int rc =
      run("dispersion --preset free --cs2 1 -o " + dir.path.string());
  CHECK(rc == 0);
  const auto j = load_json(dir.path / "dispersion.json");
  CHECK(j["k_star"].is_null());
  REQUIRE(j["bands"].size() == 1);
  CHECK(j["bands"][0]["class"] == "stable");
}

TEST_CASE("NMC reduction: gamma = 16piG curve equals the gravity curve") {
  TempDir dir_a, dir_b;
  CHECK(run("dispersion --preset self-gravity --omega-j 1 --cs2 0 -o " +
            dir_a.path.string()) == 0);
  CHECK(run("dispersion --preset nmc --alpha 0 --beta 0 --gamma-nmc 16piG -o " +
            dir_b.path.string()) == 0);
  // identical physics; only the provenance hash line may differ
  std::istringstream a(slurp(dir_a.path / "dispersion.csv"));
  std::istringstream b(slurp(dir_b.path / "dispersion.csv"));
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  int rows = 0;
  while (std::getline(a, la) && std::getline(b, lb)) {
    CHECK(la == lb);
    ++rows;
  }
  CHECK(rows > 100);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  TempDir dir_a, dir_b;
  const std::string flags =
      "dispersion --preset quantum-plasma --cs2 0.25 --kmin 0.2 --kmax 5 "
      "--knum 64 -o ";
  CHECK(run(flags + dir_a.path.string()) == 0);
  CHECK(run(flags + dir_b.path.string()) == 0);
  CHECK(slurp(dir_a.path / "dispersion.csv") ==
        slurp(dir_b.path / "dispersion.csv"));
  CHECK(slurp(dir_a.path / "dispersion.json") ==
        slurp(dir_b.path / "dispersion.json"));
}

TEST_CASE("config file drives the run and flags override it") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.json";
  {
    std::ofstream f(cfg);
    f << R"({"medium": {"preset": "self-gravity", "omega_j": 1.0},
             "dispersion": {"kmin": 0.5, "kmax": 2.0, "knum": 16}})";
  }
  CHECK(run("dispersion -c " + cfg.string() + " -o " + dir.path.string()) == 0);
  auto j = load_json(dir.path / "dispersion.json");
  CHECK(j["medium"] == "self_gravity");
  // flag overrides the config: free medium has no kernel, so no k*
  CHECK(run("dispersion -c " + cfg.string() + " --preset free --cs2 1 -o " +
            dir.path.string()) == 0);
  j = load_json(dir.path / "dispersion.json");
  CHECK(j["k_star"].is_null());
}

TEST_CASE("simulate writes reports and readable snapshots") {
  TempDir dir;
  const int rc = run(
      "simulate --preset bec-contact --contact-g 1 --grid 128 --box 6.2832 "
      "--t-end 0.05 --eps 1e-4 --mode 1 --report-every 8 --snapshot-every 64 "
      "-o " +
      dir.path.string());
  CHECK(rc == 0);
  const std::string report = slurp(dir.path / "report.csv");
  CHECK(report.find("t,N,E_kin,E_int,E_nl,max_psi") != std::string::npos);
  CHECK(fs::exists(dir.path / "snap_00000000.qmf"));
  CHECK(fs::exists(dir.path / "snap_final.qmf"));
  const auto j = load_json(dir.path / "run.json");
  CHECK(j["blowup"].is_null());
  CHECK(j["steps"].get<long>() > 0);

  // norm column stays constant to high precision
  std::istringstream rows(report);
  std::string line;
  std::getline(rows, line);  // provenance
  std::getline(rows, line);  // header
  double first_norm = -1.0;
  while (std::getline(rows, line)) {
    const auto comma = line.find(',');
    const auto second = line.find(',', comma + 1);
    const double norm = std::stod(line.substr(comma + 1, second - comma - 1));
    if (first_norm < 0)
      first_norm = norm;
    else
      CHECK(norm == doctest::Approx(first_norm).epsilon(1e-10));
  }
}

TEST_CASE("validate exits 0 in tolerance and reports rows") {
  TempDir dir;
  const int rc = run(
      "validate --preset bec-contact --contact-g 1 --ks 1,2 --grid 128 "
      "--periods 4 --samples 192 -o " +
      dir.path.string());
  CHECK(rc == 0);
  const auto j = load_json(dir.path / "verdict.json");
  CHECK(j["all_within_tolerance"].get<bool>());
  CHECK(j["rows"].size() == 2);
  CHECK(slurp(dir.path / "validation.csv")
            .find("k,omega2_theory,omega_or_gamma_measured,rel_err,class") !=
        std::string::npos);
}

TEST_CASE("validate exits 1 when out of tolerance") {
  TempDir dir;
  // absurd tolerance forces failure
  const int rc = run(
      "validate --preset bec-contact --contact-g 1 --ks 1 --grid 128 "
      "--periods 4 --samples 192 --tol-omega 1e-12 -o " +
      dir.path.string());
  CHECK(rc == 1);
}

TEST_CASE("scan sweeps cs2 and shrinks the Jeans wavenumber") {
  TempDir dir;
  const int rc = run(
      "scan --preset self-gravity --omega-j 1 --scan-param cs2 --from 0 "
      "--to 1 --steps 5 -o " +
      dir.path.string());
  CHECK(rc == 0);
  const auto j = load_json(dir.path / "scan.json");
  REQUIRE(j["rows"].size() == 5);
  double prev = 1e300;
  for (const auto& row : j["rows"]) {
    const double ks = row["k_star"].get<double>();
    CHECK(ks < prev);
    prev = ks;
  }
}

TEST_CASE("match-analog round trip through CSV files") {
  TempDir dir;
  CHECK(run("dispersion --preset quantum-plasma --kmin 0.2 --kmax 8 --knum 32 "
            "-o " +
            dir.path.string()) == 0);
  CHECK(run("match-analog --target " + (dir.path / "dispersion.csv").string() +
            " --match-cs2 0 -o " + dir.path.string()) == 0);
  const auto j = load_json(dir.path / "match.json");
  CHECK(!j["cs2_fitted"].get<bool>());
  // The kernel table must load back and invert to 4 pi G / k^2 with
  // G = e^2/(4 pi eps0) = 1/(4 pi) at unit charge.
  const std::string table = slurp(dir.path / "kernel.txt");
  CHECK(table.find("# k Vk") != std::string::npos);
  std::istringstream rows(table);
  std::string line;
  int checked = 0;
  while (std::getline(rows, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream r(line);
    double k, vk;
    REQUIRE((r >> k >> vk));
    CHECK(vk == doctest::Approx(1.0 / (k * k)).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked == 32);

  // and the table feeds back in as a custom medium
  TempDir dir2;
  CHECK(run("dispersion --preset custom --kernel-file " +
            (dir.path / "kernel.txt").string() +
            " --kmin 0.25 --kmax 6 --knum 32 -o " + dir2.path.string()) == 0);
  const auto j2 = load_json(dir2.path / "dispersion.json");
  CHECK(j2["medium"] == "custom");
}

TEST_CASE("config errors exit nonzero with a message") {
  TempDir dir;
  CHECK(run("dispersion --preset does-not-exist -o " + dir.path.string()) == 2);
  CHECK(run("match-analog -o " + dir.path.string()) == 2);  // no --target
  CHECK(run("simulate --preset chemotaxis --lambda 1 --grid 64 --box 6.28 "
            "--t-end 0.01 -o " +
            dir.path.string()) == 2);  // hbar = 0 without --classical-hbar
}

TEST_CASE("QMLAB_OUTDIR provides the default output directory") {
  TempDir dir;
  const std::string cmd = "QMLAB_OUTDIR=" + dir.path.string() + " " + kCli +
                          " dispersion --preset free --cs2 1 > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(dir.path / "dispersion.csv"));
}

TEST_CASE("simulate handles the free and gravity examples") {
  TempDir dir;
  // free plane-wave-ish run: uniform state, no perturbation
  CHECK(run("simulate --preset free --grid 64 --box 6.2832 --t-end 0.02 "
            "--eps 0 -o " +
            dir.path.string()) == 0);
  // gravity growth run under the swindle
  TempDir dir2;
  CHECK(run("simulate --preset self-gravity --omega-j 1 --grid 128 "
            "--box 12.566 --t-end 0.5 --eps 1e-4 --mode 1 -o " +
            dir2.path.string()) == 0);
  const auto j = load_json(dir2.path / "run.json");
  CHECK(j["blowup"].is_null());
}

TEST_CASE("classical media simulate under --classical-hbar") {
  TempDir dir;
  const int rc = run(
      "simulate --preset chemotaxis --lambda 1 --cs2 1 --classical-hbar 0.02 "
      "--grid 128 --box 12.566 --t-end 0.05 --eps 1e-3 --mode 2 -o " +
      dir.path.string());
  CHECK(rc == 0);
  const auto j = load_json(dir.path / "run.json");
  CHECK(j["classical_hbar"].get<double>() == doctest::Approx(0.02));
  CHECK(j["quantum_to_physical_rate_ratio"].get<double>() < 1.0);
}
