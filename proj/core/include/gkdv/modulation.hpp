#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gkdv/diagnostics.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/profiles.hpp"

namespace gkdv {

struct ModulationOptions {
  std::optional<double> min_separation;  // default 10 / sqrt(c_min)
  std::optional<double> closeness_cap;   // default 0.5 * min_i ||Q_{c_i}||_{H1}
  double tol_factor = 1e-10;
  int max_iterations = 50;
  double fd_step = 1e-6;
  double speed_gap = 1e-3;
};

struct ModulationFrame {
  double t = 0.0;
  std::vector<double> c;
  std::vector<double> center;
  std::vector<int> sign;
  double eps_l2 = 0.0;
  double eps_h1 = 0.0;
  std::vector<double> ortho_residuals;
  std::vector<double> tolerances;
  int iterations = 0;

  std::vector<SolitonParams> solitons() const;
};

// Centers only, speeds fixed: int eps d_x R_i = 0 for each i.
ModulationFrame decompose_translations(const Field& u, std::span<const double> c_fixed,
                                       std::span<const double> guesses, std::span<const int> signs = {},
                                       const ModulationOptions& opts = {});

// Speeds and centers: int eps d_x R_i = 0 and int eps R_i = 0 (int eps R_i^3 = 0 when p = 5).
ModulationFrame decompose_full(const Field& u, std::span<const SolitonParams> guesses,
                               const ModulationOptions& opts = {});

// eps = u - sum of profiles.
Field residual_field(const Field& u, std::span<const SolitonParams> solitons);

enum class ModulationMode { Translations, Full };

struct VelocityCheck {
  double t;
  std::size_t index;       // 0-based
  double lhs;              // |center' - c|
  double weighted_eps;     // (int eps^2 e^{-sqrt(c1)|x - center|})^{1/2}
  double exponential;      // e^{-nu^{3/2} t / 4}
};

struct ModulationTrack {
  std::vector<ModulationFrame> frames;
  std::vector<std::vector<double>> center_velocity;  // per frame, per soliton
  std::vector<std::vector<double>> speed_drift;      // c_i(t) - c_i(t_0)
  std::vector<VelocityCheck> checks;
  double velocity_constant = 0.0;  // smallest K with lhs <= K (weighted_eps + exponential)
  double separation_rate = 0.0;    // min over i, t > t_0 of (center_{i+1} - center_i) / (t - t_0)
  std::optional<std::string> failure;

  std::vector<std::vector<double>> midpoints() const;
};

struct TrackOptions {
  ModulationOptions modulation;
  std::optional<double> nu;  // default min c_i
};

ModulationTrack track(const Trajectory& traj, ModulationMode mode, std::span<const SolitonParams> guesses,
                      const TrackOptions& opts = {});

// ||u(t) - sum R_i(t)||_{H1} over x >= (leftmost center) - behind, with each profile carried from its
// asymptotic state at t_ref at its own speed.
std::vector<TimeValue> convergence_series(const Trajectory& traj, std::span<const SolitonParams> asymptotic,
                                          double t_ref, double behind = 5.0);

// Rate fit over the decay phase: from the largest value between the first local minimum and the global
// minimum, up to the first sample within twice the global minimum.
DecayFit fit_convergence_decay(std::span<const TimeValue> series, double trim = 0.1);

// Centers of the `count` highest local maxima of |u|, at least min_separation apart, sorted ascending.
std::vector<double> locate_peaks(const Field& u, std::size_t count, double min_separation);

}  // namespace gkdv
