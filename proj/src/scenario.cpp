#include "tomosc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tomosc/csv.hpp"
#include "tomosc/errors.hpp"
#include "tomosc/phasespace.hpp"
#include "tomosc/propagator.hpp"
#include "tomosc/verify.hpp"

namespace tomosc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ConfigError(where + ": missing key \"" + key + "\"");
  return obj.at(key);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) throw ConfigError(where + ": key \"" + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + ": key \"" + key + "\" must be finite");
  return d;
}

int require_integer(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer())
    throw ConfigError(where + ": key \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw ConfigError(where + ": key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

dynamics::ForceModel parse_force(const json& j) {
  const std::string where = "\"force\"";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::string kind = require_string(j, "kind", where);
  try {
    if (kind == "zero") {
      require_keys(j, where, {"kind"});
      return dynamics::ForceModel::zero();
    }
    if (kind == "constant") {
      require_keys(j, where, {"kind", "f0"});
      return dynamics::ForceModel::constant(require_number(j, "f0", where));
    }
    if (kind == "sinusoidal") {
      require_keys(j, where, {"kind", "amplitude", "frequency", "phase"});
      const double amp = require_number(j, "amplitude", where);
      const double freq = require_number(j, "frequency", where);
      const double phase = j.contains("phase") ? require_number(j, "phase", where) : 0.0;
      return dynamics::ForceModel::sinusoidal(amp, freq, phase);
    }
    if (kind == "tabulated") {
      require_keys(j, where, {"kind", "times", "values"});
      auto read_array = [&](const char* key) {
        const auto& a = require(j, key, where);
        if (!a.is_array())
          throw ConfigError(where + ": key \"" + std::string(key) + "\" must be an array");
        std::vector<double> out;
        for (const auto& v : a) {
          if (!v.is_number())
            throw ConfigError(where + ": key \"" + std::string(key) +
                              "\" must contain only numbers");
          out.push_back(v.get<double>());
        }
        return out;
      };
      return dynamics::ForceModel::tabulated(read_array("times"), read_array("values"));
    }
  } catch (const ValidationError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown kind \"" + kind + "\"");
}

tomography::StateSpec parse_state(const json& j) {
  const std::string where = "\"state\"";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::string kind = require_string(j, "kind", where);
  try {
    if (kind == "coherent") {
      require_keys(j, where, {"kind", "x0", "p0"});
      return states::CoherentParams{require_number(j, "x0", where),
                                    require_number(j, "p0", where)};
    }
    if (kind == "fock") {
      require_keys(j, where, {"kind", "n"});
      return states::FockIndex(require_integer(j, "n", where));
    }
  } catch (const ValidationError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown kind \"" + kind + "\"");
}

GridSpec1D parse_grid_1d(const json& j, const std::string& where, const GridSpec1D& fallback) {
  if (j.is_null()) return fallback;
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  require_keys(j, where, {"min", "max", "points"});
  GridSpec1D g{require_number(j, "min", where), require_number(j, "max", where),
               require_integer(j, "points", where)};
  try {
    g.validate(where.c_str());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return g;
}

GridSpec2D parse_grid_2d(const json& j, const std::string& where, const GridSpec2D& fallback) {
  if (j.is_null()) return fallback;
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  require_keys(j, where, {"q_min", "q_max", "p_min", "p_max", "n_q", "n_p"});
  GridSpec2D g{require_number(j, "q_min", where), require_number(j, "q_max", where),
               require_number(j, "p_min", where), require_number(j, "p_max", where),
               require_integer(j, "n_q", where),  require_integer(j, "n_p", where)};
  try {
    g.validate(where.c_str());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return g;
}

std::string describe_state(const tomography::StateSpec& state) {
  if (const auto* c = std::get_if<states::CoherentParams>(&state)) {
    std::ostringstream ss;
    ss << "coherent(x0=" << io::format_full(c->x0) << ", p0=" << io::format_full(c->p0) << ")";
    return ss.str();
  }
  return "fock(n=" + std::to_string(std::get<states::FockIndex>(state).n) + ")";
}

states::WaveFunctionGrid build_state(const tomography::StateSpec& state, const GridSpec1D& grid) {
  if (const auto* c = std::get_if<states::CoherentParams>(&state))
    return states::coherent_wavefunction(*c, grid);
  return states::fock_wavefunction(std::get<states::FockIndex>(state), grid);
}

bool wants(const Scenario& sc, Representation r) {
  return std::find(sc.representations.begin(), sc.representations.end(), r) !=
         sc.representations.end();
}

/// Short numeric label used in file names ("%.6g").
std::string label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string checksum_hex(std::uint64_t h) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  require_keys(root, "config",
               {"force", "state", "times", "representations", "frames", "angles", "grids",
                "output_dir"});

  Scenario sc;
  sc.force = parse_force(require(root, "force", "config"));
  sc.state = parse_state(require(root, "state", "config"));

  const auto& times = require(root, "times", "config");
  if (!times.is_array() || times.empty())
    throw ConfigError("\"times\" must be a non-empty array of numbers");
  for (const auto& v : times) {
    if (!v.is_number()) throw ConfigError("\"times\" must contain only numbers");
    const double t = v.get<double>();
    if (!std::isfinite(t) || t < 0.0)
      throw ConfigError("\"times\" entries must be finite and nonnegative");
    sc.times.push_back(t);
  }
  for (std::size_t i = 0; i < sc.times.size(); ++i)
    for (std::size_t j = i + 1; j < sc.times.size(); ++j)
      if (sc.times[i] == sc.times[j]) throw ConfigError("\"times\" contains duplicate entries");

  const auto& reps = require(root, "representations", "config");
  if (!reps.is_array() || reps.empty())
    throw ConfigError("\"representations\" must be a non-empty array");
  for (const auto& v : reps) {
    if (!v.is_string()) throw ConfigError("\"representations\" must contain only strings");
    const std::string s = v.get<std::string>();
    Representation r;
    if (s == "wavefunction") r = Representation::wavefunction;
    else if (s == "wigner") r = Representation::wigner;
    else if (s == "symplectic") r = Representation::symplectic;
    else if (s == "optical") r = Representation::optical;
    else throw ConfigError("\"representations\": unknown representation \"" + s + "\"");
    if (std::find(sc.representations.begin(), sc.representations.end(), r) !=
        sc.representations.end())
      throw ConfigError("\"representations\" contains duplicate entries");
    sc.representations.push_back(r);
  }

  if (root.contains("frames")) {
    const auto& frames = root.at("frames");
    if (!frames.is_array()) throw ConfigError("\"frames\" must be an array of [mu, nu] pairs");
    for (const auto& v : frames) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError("\"frames\" entries must be [mu, nu] number pairs");
      try {
        sc.frames.emplace_back(v[0].get<double>(), v[1].get<double>());
      } catch (const ValidationError& e) {
        throw ConfigError(std::string("\"frames\": ") + e.what());
      }
    }
  }
  if (root.contains("angles")) {
    const auto& angles = root.at("angles");
    if (!angles.is_array()) throw ConfigError("\"angles\" must be an array of numbers");
    for (const auto& v : angles) {
      if (!v.is_number()) throw ConfigError("\"angles\" must contain only numbers");
      const double a = v.get<double>();
      if (!std::isfinite(a)) throw ConfigError("\"angles\" entries must be finite");
      sc.angles.push_back(a);
    }
  }
  if (wants(sc, Representation::symplectic) && sc.frames.empty())
    throw ConfigError("\"frames\" is required when \"symplectic\" output is requested");
  if (wants(sc, Representation::optical) && sc.angles.empty())
    throw ConfigError("\"angles\" is required when \"optical\" output is requested");

  if (root.contains("grids")) {
    const auto& grids = root.at("grids");
    if (!grids.is_object()) throw ConfigError("\"grids\" must be an object");
    require_keys(grids, "\"grids\"", {"state", "wigner", "tomogram"});
    if (grids.contains("state"))
      sc.state_grid = parse_grid_1d(grids.at("state"), "\"grids.state\"", sc.state_grid);
    if (grids.contains("wigner"))
      sc.wigner_grid = parse_grid_2d(grids.at("wigner"), "\"grids.wigner\"", sc.wigner_grid);
    if (grids.contains("tomogram"))
      sc.tomogram_grid =
          parse_grid_1d(grids.at("tomogram"), "\"grids.tomogram\"", sc.tomogram_grid);
  }

  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string())
      throw ConfigError("\"output_dir\" must be a string");
    sc.output_dir = root.at("output_dir").get<std::string>();
  }

  // Cross-field requirements that would otherwise surface mid-run.
  if (const auto* n = std::get_if<states::FockIndex>(&sc.state)) {
    const double need = std::sqrt(2.0 * n->n + 1.0) + 5.0;
    if (sc.state_grid.x_max < need || -sc.state_grid.x_min < need)
      throw ConfigError("\"grids.state\": number state n=" + std::to_string(n->n) +
                        " needs the grid to reach at least |x| = " + label(need));
  }
  if (wants(sc, Representation::wigner)) {
    if (sc.wigner_grid.q_min < sc.state_grid.x_min || sc.wigner_grid.q_max > sc.state_grid.x_max)
      throw ConfigError("\"grids.wigner\": q range must lie inside the state grid");
  }
  const bool needs_propagation =
      wants(sc, Representation::wavefunction) || wants(sc, Representation::wigner);
  if (!sc.force.closed_form()) {
    const double t_max = *std::max_element(sc.times.begin(), sc.times.end());
    const auto& tab = std::get<dynamics::TabulatedForce>(sc.force.raw());
    if (tab.times.back() < t_max)
      throw ConfigError("\"force\": tabulated samples must cover the latest requested time " +
                        label(t_max));
  }
  (void)needs_propagation;
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

RunResult run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
  fs::create_directories(out_dir);

  const io::Metadata common{
      {"generator", "tomosc 0.1.0"},
      {"force", sc.force.describe()},
      {"state", describe_state(sc.state)},
  };

  const bool want_wf = wants(sc, Representation::wavefunction);
  const bool want_wig = wants(sc, Representation::wigner);

  std::optional<states::WaveFunctionGrid> psi0;
  if (want_wf || want_wig) psi0.emplace(build_state(sc.state, sc.state_grid));
  std::optional<phasespace::WignerGrid> w0;
  if (want_wig) w0.emplace(phasespace::wigner_from_wavefunction(*psi0, sc.wigner_grid));

  std::vector<std::pair<std::string, std::string>> outputs;  // file name -> bytes
  for (double t : sc.times) {
    io::Metadata meta = common;
    meta.emplace_back("time", io::format_full(t));
    for (Representation rep : sc.representations) {
      switch (rep) {
        case Representation::wavefunction: {
          const auto psi = (t == 0.0) ? *psi0 : propagator::propagate(*psi0, sc.force, t);
          io::Metadata m = meta;
          m.emplace_back("representation", "wavefunction");
          outputs.emplace_back("wavefunction_t" + label(t) + ".csv",
                               io::wavefunction_csv(psi, m));
          break;
        }
        case Representation::wigner: {
          const auto w = (t == 0.0) ? *w0
                                    : phasespace::sample_to_grid(
                                          phasespace::wigner_evolve(*w0, sc.force, t),
                                          sc.wigner_grid, 1e-3);
          io::Metadata m = meta;
          m.emplace_back("representation", "wigner");
          outputs.emplace_back("wigner_t" + label(t) + ".csv", io::wigner_csv(w, m));
          break;
        }
        case Representation::symplectic: {
          for (const auto& fr : sc.frames) {
            const auto slice =
                tomography::closed_form_tomogram(sc.state, sc.force, t, fr, sc.tomogram_grid);
            io::Metadata m = meta;
            m.emplace_back("representation", "symplectic");
            m.emplace_back("mu", io::format_full(fr.mu));
            m.emplace_back("nu", io::format_full(fr.nu));
            outputs.emplace_back("symplectic_t" + label(t) + "_mu" + label(fr.mu) + "_nu" +
                                     label(fr.nu) + ".csv",
                                 io::tomogram_csv(slice, m));
          }
          break;
        }
        case Representation::optical: {
          for (double a : sc.angles) {
            const tomography::OpticalAngle ang(a);
            const auto slice =
                tomography::closed_form_optical(sc.state, sc.force, t, ang, sc.tomogram_grid);
            io::Metadata m = meta;
            m.emplace_back("representation", "optical");
            m.emplace_back("theta", io::format_full(ang.theta));
            outputs.emplace_back("optical_t" + label(t) + "_th" + label(ang.theta) + ".csv",
                                 io::tomogram_csv(slice, m));
          }
          break;
        }
      }
    }
  }

  std::sort(outputs.begin(), outputs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < outputs.size(); ++i)
    if (outputs[i].first == outputs[i - 1].first)
      throw ConfigError("output file name collision: " + outputs[i].first +
                        " (labels use 6 significant digits)");

  RunResult result;
  nlohmann::ordered_json manifest;
  manifest["generator"] = "tomosc 0.1.0";
  manifest["checksum_algorithm"] = "fnv1a64";
  manifest["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, content] : outputs) {
    io::atomic_write(out_dir / name, content);
    result.files.push_back(out_dir / name);
    manifest["files"].push_back({{"name", name},
                                 {"bytes", content.size()},
                                 {"fnv1a64", checksum_hex(io::fnv1a64(content))}});
  }
  io::atomic_write(out_dir / "manifest.json", manifest.dump(2) + "\n");
  result.manifest = out_dir / "manifest.json";
  return result;
}

int main_impl(const std::vector<std::string>& args) {
  CLI::App app{"driven-oscillator states, Wigner functions, and tomograms"};
  app.set_version_flag("--version", "tomosc 0.1.0");

  std::string config_path;
  std::string out_override;
  auto* run = app.add_subcommand("run", "execute a scenario config and emit CSV files");
  run->add_option("config", config_path, "path to the scenario JSON file")->required();
  run->add_option("--out", out_override, "output directory (overrides the config)");

  bool fast = false;
  bool full = false;
  auto* ver = app.add_subcommand("verify", "run the numerical invariant checks");
  ver->add_flag("--fast", fast, "reduced grids and sample counts, tolerances x10");
  ver->add_flag("--full", full, "full resolution (the default)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (run->parsed()) {
    try {
      const Scenario sc = load_scenario(config_path);
      const fs::path out =
          !out_override.empty() ? fs::path(out_override) : fs::path(sc.output_dir.value_or("out"));
      const RunResult res = run_scenario(sc, out);
      std::cout << "wrote " << res.files.size() << " files and manifest.json to " << out.string()
                << "\n";
      return 0;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  if (ver->parsed()) {
    if (fast && full) {
      std::cerr << "verify: choose one of --fast or --full\n";
      return 2;
    }
    try {
      const auto results = verify::run_all({fast});
      verify::print_report(std::cout, results);
      return verify::all_passed(results) ? 0 : 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  std::cout << app.help();
  return 2;
}

}  // namespace tomosc::cli
