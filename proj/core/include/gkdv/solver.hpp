#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gkdv/fourier.hpp"
#include "gkdv/grid.hpp"

namespace gkdv {

struct SolverOptions {
  double blowup_cap = 1e6;
  // Boundary watchdog: max|u| over the outer margin relative to max|u|.
  double boundary_threshold = 1e-8;
  double boundary_margin = 0.05;  // fraction of L on each side
  bool watch_boundary = true;
  std::size_t frame_stride = 1;  // store every k-th step
  std::size_t max_steps = 100'000'000;
};

struct Observer {
  std::size_t stride = 1;
  std::function<void(const Field&)> callback;
};

// ETDRK4 integrator for d_t u + d_x(d_x^2 u + u^p) = 0 on a periodic grid.
// Holds scratch buffers: one instance per thread.
class SpectralSolver {
 public:
  SpectralSolver(const GridSpec& grid, Exponent p, SolverOptions opts = {});
  ~SpectralSolver();
  SpectralSolver(SpectralSolver&&) noexcept;
  SpectralSolver& operator=(SpectralSolver&&) noexcept;

  const GridSpec& grid() const;
  Exponent exponent() const;
  const SolverOptions& options() const;

  // One step of size dt. Throws BlowupError.
  Field step(const Field& u);
  // Stores frames every frame_stride steps (and the final one). Never throws on
  // blow-up or boundary contact: the partial trajectory carries the truncation.
  Trajectory evolve(const Field& u0, double T, std::span<const Observer> observers = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Field step(const Field& u, const SolverOptions& opts = {});
Trajectory evolve(const Field& u0, double T, const SolverOptions& opts = {},
                  std::span<const Observer> observers = {});

double mass(const Field& u);
double energy(const Field& u);
// KdV second-level invariant; p = 2 only (WrongExponentError otherwise).
double h2_invariant(const Field& u);
double sobolev_norm(const Field& u, double s);
double sobolev_norm(std::span<const double> values, double length, double s);
// max|u| over the outer `margin` fraction of the domain on each side.
double boundary_amplitude(const Field& u, double margin = 0.05);
ConservedRecord conserved(const Field& u, double margin = 0.05);

}  // namespace gkdv
