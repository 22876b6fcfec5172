#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tomosc/dynamics.hpp"
#include "tomosc/grid.hpp"
#include "tomosc/tomography.hpp"

namespace tomosc::cli {

enum class Representation { wavefunction, wigner, symplectic, optical };

/// A validated run request: force, initial state, output times, and which
/// representation grids/slices to emit.
struct Scenario {
  dynamics::ForceModel force = dynamics::ForceModel::zero();
  tomography::StateSpec state = states::CoherentParams{};
  std::vector<double> times;
  std::vector<Representation> representations;
  std::vector<tomography::SymplecticFrame> frames;
  std::vector<double> angles;
  GridSpec1D state_grid = states::default_state_grid();
  GridSpec2D wigner_grid = phasespace::default_wigner_grid();
  GridSpec1D tomogram_grid = tomography::default_tomogram_grid();
  std::optional<std::string> output_dir;
};

/// Parse and validate a scenario config. Throws ConfigError naming the
/// offending key.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

struct RunResult {
  std::vector<std::filesystem::path> files;  // emitted CSVs, sorted by name
  std::filesystem::path manifest;
};

/// Execute a scenario, emitting one CSV per (representation, time, frame/angle)
/// plus a manifest with checksums. Writes are atomic; output is deterministic.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Command-line entry point used by the binary and by tests.
/// Exit codes: 0 success, 1 numerical failure, 2 config/usage error.
int main_impl(const std::vector<std::string>& args);

}  // namespace tomosc::cli
