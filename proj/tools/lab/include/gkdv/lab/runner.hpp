#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gkdv/lab/config.hpp"

namespace gkdv::lab {

enum class ExitCode : int { Ok = 0, Io = 1, Config = 2, Blowup = 3, Domain = 4, Diagnostic = 5 };

struct RunOptions {
  bool diagnostics = true;     // false: evolve, snapshots and conservation only
  std::ostream* log = nullptr;
};

struct RunResult {
  ExitCode code = ExitCode::Ok;
  std::optional<Truncation> truncation;
  std::vector<std::string> diagnostic_errors;
  std::vector<std::filesystem::path> artifacts;
};

// Writes under c.output_dir: config.json, snapshots/, one CSV per time series, summary.json,
// optional SVG plots and a MANIFEST. Partial artifacts are kept on truncation or failure.
RunResult run_experiment(const ExperimentConfig& c, const RunOptions& opts = {});

// Canned scenarios, as config JSON text.
std::vector<std::string> scenario_names();
std::string scenario_config(const std::string& name);

int to_int(ExitCode code);

}  // namespace gkdv::lab
