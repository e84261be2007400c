#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/solver.hpp"

namespace gkdv::lab {

inline constexpr int kConfigFormatVersion = 1;

// A*exp(-((x - center)/width)^2): radiative test data.
struct GaussianData {
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
};

using LabInitial = std::variant<SolitonParams, BreatherParams, Superposition, FromFile, GaussianData>;

struct ConservationDiag {};
struct NondispersionDiag {
  double rho = 0.5;
  double R = 30.0;
};
struct ModulationDiag {
  ModulationMode mode = ModulationMode::Full;
  std::optional<double> nu;
};
// Partition midpoints come from a full modulation track of the same run.
struct MonotonicityDiag {
  double kappa = 0.1;
  double nu = 1.0;
  double c1 = 1.0;
};
struct MonotoneFunctionalDiag {
  double mtilde_slope = 0.5;
  double f_slope = 0.25;
  std::vector<double> x0s{-40.0, -20.0, 0.0};
  std::optional<double> kappa;
};
struct ConvergenceDiag {
  double behind = 5.0;
};
struct SpatialDecayDiag {
  int order = 0;
};
struct ScatteringDiag {};
struct CoercivityDiag {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  double nu = 1.0;
  double lambda_cap = 100.0;
};
struct CollisionDiag {};

using Diagnostic = std::variant<ConservationDiag, NondispersionDiag, ModulationDiag, MonotonicityDiag,
                                MonotoneFunctionalDiag, ConvergenceDiag, SpatialDecayDiag, ScatteringDiag,
                                CoercivityDiag, CollisionDiag>;

std::string diagnostic_name(const Diagnostic& d);

enum class SnapshotPolicy { Ends, Frames };

struct ExperimentConfig {
  int p = 2;
  double length = 128.0;
  std::size_t points = 1024;
  double dt = 1e-3;
  double T = 20.0;
  std::size_t frame_stride = 100;
  LabInitial initial = SolitonParams{};
  // Soliton count for modulation-type diagnostics when the initial data does not fix it.
  std::optional<std::size_t> soliton_count;
  std::vector<Diagnostic> diagnostics;
  SolverOptions solver;
  SnapshotPolicy snapshots = SnapshotPolicy::Ends;
  bool plots = false;
  std::filesystem::path output_dir = "out";
  std::string canonical;  // sorted-key JSON without output_dir; the hash is taken over it
  std::string hash;       // fnv1a64 of `canonical`, hex

  GridSpec grid() const { return GridSpec(length, points, dt); }
};

// JSON dialect, "format_version": 1. Relative paths resolve against `base_dir`.
// Throws ConfigError on syntax, unknown keys, or any violated precondition.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace gkdv::lab
