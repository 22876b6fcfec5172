#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "tomosc/csv.hpp"
#include "tomosc/errors.hpp"
#include "tomosc/scenario.hpp"

using namespace tomosc;
using cli::Representation;
namespace fs = std::filesystem;

namespace {

void expect_config_error(const std::string& config, const std::string& fragment) {
  try {
    cli::parse_scenario(config);
    FAIL("expected ConfigError for: ", config);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK_MESSAGE(msg.find(fragment) != std::string::npos,
                  "message \"", msg, "\" lacks \"", fragment, "\"");
  }
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tomosc_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(static_cast<bool>(f));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Data column of a tomogram CSV ('#' metadata, "X,density" header, rows).
std::vector<double> tomogram_column(const fs::path& path) {
  std::ifstream f(path);
  REQUIRE(static_cast<bool>(f));
  std::vector<double> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      CHECK(line == "X,density");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    out.push_back(std::stod(line.substr(comma + 1)));
  }
  return out;
}

std::string hex16(std::uint64_t h) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

struct CaptureStream {
  explicit CaptureStream(std::ostream& stream) : stream_(stream), old_(stream.rdbuf(ss.rdbuf())) {}
  ~CaptureStream() { stream_.rdbuf(old_); }
  std::string text() const { return ss.str(); }
  std::ostringstream ss;

 private:
  std::ostream& stream_;
  std::streambuf* old_;
};

const char* smoke_config = R"({
  "force": {"kind": "zero"},
  "state": {"kind": "coherent", "x0": 1.0, "p0": 0.0},
  "times": [0.0],
  "representations": ["wavefunction", "wigner", "symplectic", "optical"],
  "frames": [[1.0, 0.0]],
  "angles": [0.0],
  "grids": {
    "state": {"min": -12.0, "max": 12.0, "points": 1024},
    "wigner": {"q_min": -6.0, "q_max": 6.0, "p_min": -6.0, "p_max": 6.0, "n_q": 129, "n_p": 129},
    "tomogram": {"min": -10.0, "max": 10.0, "points": 501}
  }
})";

}  // namespace

TEST_CASE("a full config parses into the requested scenario") {
  const auto sc = cli::parse_scenario(R"({
    "force": {"kind": "sinusoidal", "amplitude": 0.5, "frequency": 1.3, "phase": 0.4},
    "state": {"kind": "fock", "n": 2},
    "times": [0.0, 1.5],
    "representations": ["wavefunction", "symplectic"],
    "frames": [[1.0, 0.0], [0.3, -1.2]],
    "grids": {"tomogram": {"min": -8.0, "max": 8.0, "points": 801}},
    "output_dir": "runs/demo"
  })");
  CHECK(sc.times == std::vector<double>{0.0, 1.5});
  REQUIRE(sc.representations.size() == 2);
  CHECK(sc.representations[0] == Representation::wavefunction);
  CHECK(sc.representations[1] == Representation::symplectic);
  REQUIRE(sc.frames.size() == 2);
  CHECK(sc.frames[1].mu == 0.3);
  CHECK(sc.frames[1].nu == -1.2);
  CHECK(std::get<states::FockIndex>(sc.state).n == 2);
  CHECK(sc.force.describe().find("sinusoidal") != std::string::npos);
  CHECK(sc.state_grid == states::default_state_grid());
  CHECK(sc.wigner_grid == phasespace::default_wigner_grid());
  CHECK(sc.tomogram_grid == GridSpec1D{-8.0, 8.0, 801});
  REQUIRE(sc.output_dir.has_value());
  CHECK(*sc.output_dir == "runs/demo");
}

TEST_CASE("config validation names the offending key") {
  expect_config_error("{ nope", "not valid JSON");
  expect_config_error("[1, 2]", "config must be a JSON object");
  expect_config_error("{}", "missing key \"force\"");
  expect_config_error(R"({"force": {"kind": "zero"}})", "missing key \"state\"");
  expect_config_error(
      R"({"force": {"kind": "zero"}, "state": {"kind": "coherent", "x0": 0, "p0": 0}})",
      "missing key \"times\"");
  expect_config_error(R"({"force": {"kind": "zero"},
                          "state": {"kind": "coherent", "x0": 0, "p0": 0},
                          "times": [0.0]})",
                      "missing key \"representations\"");

  const std::string base = R"("state": {"kind": "coherent", "x0": 1.0, "p0": 0.0},
                               "times": [0.0], "representations": ["wavefunction"])";
  auto with_force = [&](const std::string& force) {
    return "{\"force\": " + force + ", " + base + "}";
  };
  expect_config_error(with_force(R"({"kind": "quartic"})"), "unknown kind \"quartic\"");
  expect_config_error(with_force(R"({"kind": "constant"})"), "missing key \"f0\"");
  expect_config_error(with_force(R"({"kind": "constant", "f0": "big"})"), "must be a number");
  expect_config_error(with_force(R"({"kind": "zero", "f0": 1.0})"), "unknown key \"f0\"");
  expect_config_error(with_force(R"({"kind": "tabulated", "times": [0, 1], "values": [0]})"),
                      "equal length");

  auto with = [&](const std::string& extra) {
    return std::string(R"({"force": {"kind": "zero"}, )") + extra + "}";
  };
  expect_config_error(with(base + R"(, "frames": [[1, 0]], "typo_key": 3)"),
                      "unknown key \"typo_key\"");
  expect_config_error(
      with(R"("state": {"kind": "squeezed"}, "times": [0], "representations": ["wigner"])"),
      "unknown kind \"squeezed\"");
  expect_config_error(
      with(R"("state": {"kind": "fock", "n": -1}, "times": [0], "representations": ["wigner"])"),
      "n must lie in");
  expect_config_error(
      with(R"("state": {"kind": "fock", "n": 2.5}, "times": [0], "representations": ["wigner"])"),
      "must be an integer");

  const std::string st = R"("state": {"kind": "coherent", "x0": 1.0, "p0": 0.0})";
  expect_config_error(with(st + R"(, "times": 3, "representations": ["wigner"])"),
                      "\"times\" must be a non-empty array");
  expect_config_error(with(st + R"(, "times": [], "representations": ["wigner"])"),
                      "\"times\" must be a non-empty array");
  expect_config_error(with(st + R"(, "times": [0, "later"], "representations": ["wigner"])"),
                      "\"times\" must contain only numbers");
  expect_config_error(with(st + R"(, "times": [-0.5], "representations": ["wigner"])"),
                      "finite and nonnegative");
  expect_config_error(with(st + R"(, "times": [1.0, 1.0], "representations": ["wigner"])"),
                      "duplicate entries");
  expect_config_error(with(st + R"(, "times": [0], "representations": [])"),
                      "\"representations\" must be a non-empty array");
  expect_config_error(with(st + R"(, "times": [0], "representations": ["density"])"),
                      "unknown representation \"density\"");
  expect_config_error(with(st + R"(, "times": [0], "representations": ["wigner", "wigner"])"),
                      "duplicate entries");
  expect_config_error(with(st + R"(, "times": [0], "representations": ["symplectic"])"),
                      "\"frames\" is required when \"symplectic\"");
  expect_config_error(
      with(st + R"(, "times": [0], "representations": ["symplectic"], "frames": [[1]])"),
      "[mu, nu] number pairs");
  expect_config_error(
      with(st + R"(, "times": [0], "representations": ["symplectic"], "frames": [[0, 0]])"),
      "(0,0) is not a frame");
  expect_config_error(with(st + R"(, "times": [0], "representations": ["optical"])"),
                      "\"angles\" is required when \"optical\"");
  expect_config_error(
      with(st + R"(, "times": [0], "representations": ["optical"], "angles": ["up"])"),
      "\"angles\" must contain only numbers");

  const std::string wf = st + R"(, "times": [0], "representations": ["wavefunction"])";
  expect_config_error(with(wf + R"(, "grids": {"statee": {}})"), "unknown key \"statee\"");
  expect_config_error(with(wf + R"(, "grids": {"state": {"min": -4, "max": 4, "points": 1}})"),
                      "at least 2 grid points");
  expect_config_error(with(wf + R"(, "grids": {"state": {"min": 4, "max": -4, "points": 64}})"),
                      "x_max must exceed x_min");
  expect_config_error(with(wf + R"(, "output_dir": 7)"), "\"output_dir\" must be a string");

  // Cross-field checks.
  expect_config_error(
      with(R"("state": {"kind": "fock", "n": 25}, "times": [0],
              "representations": ["wavefunction"])"),
      "number state n=25");
  expect_config_error(
      with(st + R"(, "times": [0], "representations": ["wigner"],
                   "grids": {"state": {"min": -6.0, "max": 6.0, "points": 1024}})"),
      "q range must lie inside the state grid");
  expect_config_error(
      R"({"force": {"kind": "tabulated", "times": [0.0, 1.0], "values": [0.2, 0.4]}, )" + st +
          R"(, "times": [2.0], "representations": ["wavefunction"]})",
      "cover the latest requested time");
}

TEST_CASE("scenarios load from disk and unreadable paths are reported") {
  CHECK_THROWS_AS(cli::load_scenario("/nonexistent/tomosc.json"), ConfigError);
  try {
    cli::load_scenario("/nonexistent/tomosc.json");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cannot open config file") != std::string::npos);
  }

  const fs::path dir = fresh_dir("load");
  const fs::path cfg = dir / "scenario.json";
  io::atomic_write(cfg, smoke_config);
  const auto sc = cli::load_scenario(cfg);
  CHECK(sc.times == std::vector<double>{0.0});
  CHECK(sc.representations.size() == 4);
}

TEST_CASE("run_scenario emits sorted files and a faithful manifest") {
  const auto sc = cli::parse_scenario(smoke_config);
  const fs::path out = fresh_dir("run");
  const auto res = cli::run_scenario(sc, out);

  REQUIRE(res.files.size() == 4);
  CHECK(res.files[0].filename() == "optical_t0_th0.csv");
  CHECK(res.files[1].filename() == "symplectic_t0_mu1_nu0.csv");
  CHECK(res.files[2].filename() == "wavefunction_t0.csv");
  CHECK(res.files[3].filename() == "wigner_t0.csv");
  CHECK(res.manifest.filename() == "manifest.json");

  const auto manifest = nlohmann::json::parse(read_file(res.manifest));
  CHECK(manifest.at("generator") == "tomosc 0.1.0");
  CHECK(manifest.at("checksum_algorithm") == "fnv1a64");
  const auto& files = manifest.at("files");
  REQUIRE(files.size() == 4);
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& entry = files[i];
    const fs::path path = out / entry.at("name").get<std::string>();
    CHECK(path == res.files[i]);
    REQUIRE(fs::exists(path));
    CHECK(fs::file_size(path) == entry.at("bytes").get<std::uint64_t>());
    CHECK(hex16(io::fnv1a64_file(path)) == entry.at("fnv1a64").get<std::string>());
  }

  // The emitted quadrature histogram peaks on the coherent center X = x0 = 1,
  // which is grid point 275 of [-10, 10] with 501 points.
  const auto density = tomogram_column(res.files[1]);
  REQUIRE(density.size() == 501);
  CHECK(std::abs(density[275] - 0.56418958354775629) < 1e-12);
  int argmax = 0;
  for (int i = 0; i < 501; ++i)
    if (density[i] > density[argmax]) argmax = i;
  CHECK(argmax == 275);
}

TEST_CASE("identical scenarios produce byte-identical output") {
  const auto sc = cli::parse_scenario(smoke_config);
  const fs::path out_a = fresh_dir("det_a");
  const fs::path out_b = fresh_dir("det_b");
  const auto res_a = cli::run_scenario(sc, out_a);
  const auto res_b = cli::run_scenario(sc, out_b);
  REQUIRE(res_a.files.size() == res_b.files.size());
  for (std::size_t i = 0; i < res_a.files.size(); ++i)
    CHECK(read_file(res_a.files[i]) == read_file(res_b.files[i]));
  CHECK(read_file(res_a.manifest) == read_file(res_b.manifest));
}

TEST_CASE("emitted optical slices follow the phase-space rotation") {
  const auto sc = cli::parse_scenario(R"({
    "force": {"kind": "zero"},
    "state": {"kind": "coherent", "x0": 1.0, "p0": 0.0},
    "times": [0.0, 1.5707963267948966],
    "representations": ["optical"],
    "angles": [0.0],
    "grids": {"tomogram": {"min": -10.0, "max": 10.0, "points": 501}}
  })");
  const fs::path out = fresh_dir("rot");
  const auto res = cli::run_scenario(sc, out);
  REQUIRE(res.files.size() == 2);
  CHECK(res.files[0].filename() == "optical_t0_th0.csv");
  CHECK(res.files[1].filename() == "optical_t1.5708_th0.csv");

  auto argmax_of = [](const std::vector<double>& v) {
    int best = 0;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      if (v[i] > v[best]) best = i;
    return best;
  };
  // At t = 0 the theta = 0 quadrature peaks at X = x0 = 1 (index 275); a
  // quarter period later the marginal has rotated onto p0 = 0 (index 250).
  CHECK(argmax_of(tomogram_column(res.files[0])) == 275);
  CHECK(argmax_of(tomogram_column(res.files[1])) == 250);
}

TEST_CASE("the command line reports version, usage errors, and failures") {
  {
    CaptureStream cout_cap(std::cout);
    CHECK(cli::main_impl({"--version"}) == 0);
    CHECK(cout_cap.text().find("tomosc 0.1.0") != std::string::npos);
  }
  {
    CaptureStream cout_cap(std::cout);
    CHECK(cli::main_impl({"--help"}) == 0);
    CHECK(cout_cap.text().find("run") != std::string::npos);
    CHECK(cout_cap.text().find("verify") != std::string::npos);
  }
  {
    CaptureStream cout_cap(std::cout);
    CHECK(cli::main_impl({}) == 2);
  }
  {
    CaptureStream cerr_cap(std::cerr);
    CHECK(cli::main_impl({"run"}) == 2);
    CHECK(cli::main_impl({"frobnicate"}) == 2);
    CHECK(cli::main_impl({"verify", "--fast", "--full"}) == 2);
    CHECK(cli::main_impl({"run", "/nonexistent/config.json"}) == 2);
  }
}

TEST_CASE("the run subcommand writes output and maps failures to exit codes") {
  const fs::path dir = fresh_dir("cli_run");
  const fs::path cfg = dir / "scenario.json";
  io::atomic_write(cfg, R"({
    "force": {"kind": "zero"},
    "state": {"kind": "coherent", "x0": 1.0, "p0": 0.0},
    "times": [0.0],
    "representations": ["symplectic"],
    "frames": [[1.0, 0.0]],
    "grids": {"tomogram": {"min": -10.0, "max": 10.0, "points": 501}}
  })");
  const fs::path out = dir / "out";
  {
    CaptureStream cout_cap(std::cout);
    CHECK(cli::main_impl({"run", cfg.string(), "--out", out.string()}) == 0);
    CHECK(cout_cap.text().find("manifest.json") != std::string::npos);
  }
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "symplectic_t0_mu1_nu0.csv"));

  // A config that parses but cannot be integrated accurately exits with 1.
  const fs::path bad = dir / "coarse.json";
  io::atomic_write(bad, R"({
    "force": {"kind": "constant", "f0": 0.5},
    "state": {"kind": "coherent", "x0": 1.0, "p0": 0.0},
    "times": [0.5],
    "representations": ["wavefunction"],
    "grids": {"state": {"min": -12.0, "max": 12.0, "points": 128}}
  })");
  {
    CaptureStream cerr_cap(std::cerr);
    CHECK(cli::main_impl({"run", bad.string(), "--out", (dir / "out2").string()}) == 1);
    CHECK(cerr_cap.text().find("error") != std::string::npos);
  }
}
