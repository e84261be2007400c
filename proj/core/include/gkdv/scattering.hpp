#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/profiles.hpp"

namespace gkdv {

// Conventions fixed by single-soliton anchors.
struct Calibration {
  double potential_scale = 0.0;    // multiple of u0 entering the operator
  double eigenvalue_factor = 0.0;  // reported eigenvalue = factor * computed one
  double anchor_speed = 0.0;
  double anchor_error = 0.0;       // |predicted - anchor| after calibration
};

struct SpectrumResult {
  std::vector<std::complex<double>> eigenvalues;  // upper half-plane, reported convention
  std::vector<SolitonParams> predicted_solitons;  // speeds ascending, unit sign
  std::vector<BreatherParams> predicted_breathers;
  bool generic = true;
  std::string reason;
  Calibration calibration;
  std::size_t discarded_box_modes = 0;
  double max_refinement_shift = 0.0;
};

struct ScatteringOptions {
  double edge_tolerance = 1e-8;
  double cutoff_factor = 1e-4;
  double refine_tolerance = 1e-6;
  std::size_t max_points = 2048;
};

// Focusing Zakharov-Shabat problem (p = 3 data). Reported eigenvalue i*sqrt(c) <-> soliton of speed 2c,
// a + ib <-> breather (sqrt(2) a, sqrt(2) b).
SpectrumResult zs_spectrum(const Field& u0, const ScatteringOptions& opts = {});
// Schroedinger operator -d^2 - u0/3 (p = 2 data). Reported eigenvalue i*sqrt(c) <-> soliton of speed c.
SpectrumResult schrodinger_spectrum(const Field& u0, const ScatteringOptions& opts = {});

const Calibration& zs_calibration();
const Calibration& schrodinger_calibration();

struct Genericity {
  bool generic;
  std::string reason;
};

Genericity genericity_check(const SpectrumResult& spec, double tol = 1e-6);

}  // namespace gkdv
