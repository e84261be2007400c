#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gkdv/exponent.hpp"
#include "gkdv/grid.hpp"

namespace gkdv {

struct SolitonParams {
  double c = 1.0;
  double x0 = 0.0;
  int sign = 1;
};

// Throws ParameterError on c <= 0, sign not +-1, or sign -1 with even p.
void validate(const SolitonParams& s, Exponent p);

struct BreatherParams {
  double alpha = 1.0;
  double beta = 1.0;
  double x1 = 0.0;
  double x2 = 0.0;

  double gamma() const { return beta * beta - 3.0 * alpha * alpha; }
  double delta() const { return 3.0 * beta * beta - alpha * alpha; }
  // Time after which the breather repeats up to the translation gamma * period.
  double period() const;
};

void validate(const BreatherParams& b);

struct Superposition {
  std::vector<SolitonParams> solitons;
  std::optional<double> min_separation;
};

struct FromFile {
  std::filesystem::path path;
};

using InitialData = std::variant<SolitonParams, BreatherParams, Superposition, FromFile>;

double ground_state(Exponent p, double x);
// Q'(x) = -tanh((p-1)x/2) Q(x)
double ground_state_derivative(Exponent p, double x);
double soliton_profile(Exponent p, double c, double x);
// order 0, 1 or 2 derivative of Q_c.
double soliton_profile_derivative(Exponent p, double c, double x, int order);
double soliton(const SolitonParams& s, Exponent p, double t, double x);
double breather(const BreatherParams& b, double t, double x);

// Translation bound sqrt(||d^{s+1}Q_c||^2 + (r + 2 z_s) ||d^{s+1}Q_c||_inf^2) * r
// for ||d^s Q_c(.-r) - d^s Q_c||_{L2}, s in {0, 1}, r >= 0.
double translation_bound(Exponent p, double c, double r, int s);

// Closed-form integrals of Q (p >= 2), via Beta functions.
double ground_state_mass(Exponent p);
double ground_state_gradient_mass(Exponent p);

// Samples wrap the distance to the center onto the nearest periodic image.
Field sample_soliton(const SolitonParams& s, Exponent p, const GridSpec& grid, double t = 0.0);
Field sample_breather(const BreatherParams& b, const GridSpec& grid, double t = 0.0);

struct SuperposeOptions {
  std::optional<double> min_separation;  // default 20 / sqrt(c_min)
  std::optional<double> boundary_margin;  // default 20 / sqrt(c_min)
};

struct SuperposedField {
  Field field;
  // Sum over i != j of the quadrature of R_i R_j.
  double interaction;
};

SuperposedField superpose(std::span<const SolitonParams> solitons, Exponent p, const GridSpec& grid,
                          const SuperposeOptions& opts = {});

double wrap_distance(double x, double length);

}  // namespace gkdv
