#include "gkdv/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

// log sech(y), stable for large |y|.
double log_sech(double y) {
  const double a = std::abs(y);
  return std::numbers::ln2 - a - std::log1p(std::exp(-2.0 * a));
}

void check_speed(double c) {
  if (!(std::isfinite(c) && c > 0.0)) throw ParameterError("soliton speed must be positive, got " + std::to_string(c));
}

// Integral of sech^m(a x) over the line.
double sech_power_integral(double m, double a) {
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(0.5 * m) - std::lgamma(0.5 * (m + 1.0))) / a;
}

// Q, Q', Q'' of the unit ground state.
double ground_state_derivative_any(Exponent p, double x, int order) {
  const double q = ground_state(p, x);
  switch (order) {
    case 0:
      return q;
    case 1:
      return -std::tanh(0.5 * (p.value() - 1) * x) * q;
    case 2:
      return q - std::pow(q, p.value());
    default:
      throw ParameterError("profile derivative order must be 0, 1 or 2");
  }
}

struct NormPair {
  double l2_squared;
  double sup;
};

// Norms of Q^(k) on the line by a fine trapezoid rule; Q decays like e^{-|x|}.
NormPair ground_state_norms(Exponent p, int k) {
  const double h = 1e-3;
  const double span = 80.0;
  double sum = 0.0;
  double sup = 0.0;
  for (double x = -span; x <= span; x += h) {
    const double v = ground_state_derivative_any(p, x, k);
    sum += v * v;
    sup = std::max(sup, std::abs(v));
  }
  return {sum * h, sup};
}

}  // namespace

Exponent::Exponent(int p) : p_(p) {
  if (p < 2) throw ParameterError("exponent p must be >= 2, got " + std::to_string(p));
}

void validate(const SolitonParams& s, Exponent p) {
  check_speed(s.c);
  if (!std::isfinite(s.x0)) throw ParameterError("soliton center must be finite");
  if (s.sign != 1 && s.sign != -1) throw ParameterError("soliton sign must be +1 or -1");
  if (s.sign == -1 && !p.odd()) throw ParameterError("negative solitons need an odd exponent");
}

void validate(const BreatherParams& b) {
  if (!(std::isfinite(b.alpha) && b.alpha > 0.0)) throw ParameterError("breather alpha must be positive");
  if (!(std::isfinite(b.beta) && b.beta > 0.0)) throw ParameterError("breather beta must be positive");
  if (!std::isfinite(b.x1) || !std::isfinite(b.x2)) throw ParameterError("breather shifts must be finite");
}

double BreatherParams::period() const {
  return 2.0 * std::numbers::pi / (alpha * (delta() - gamma()));
}

double ground_state(Exponent p, double x) {
  const double a = 0.5 * (p.value() - 1);
  const double log_q = (std::log(0.5 * (p.value() + 1)) + 2.0 * log_sech(a * x)) / (p.value() - 1);
  return std::exp(log_q);
}

double ground_state_derivative(Exponent p, double x) { return ground_state_derivative_any(p, x, 1); }

double soliton_profile(Exponent p, double c, double x) {
  check_speed(c);
  return std::pow(c, 1.0 / (p.value() - 1)) * ground_state(p, std::sqrt(c) * x);
}

double soliton_profile_derivative(Exponent p, double c, double x, int order) {
  check_speed(c);
  const double rc = std::sqrt(c);
  return std::pow(c, 1.0 / (p.value() - 1)) * std::pow(rc, order) * ground_state_derivative_any(p, rc * x, order);
}

double soliton(const SolitonParams& s, Exponent p, double t, double x) {
  validate(s, p);
  return s.sign * soliton_profile(p, s.c, x - s.c * t - s.x0);
}

double breather(const BreatherParams& b, double t, double x) {
  validate(b);
  const double ax = b.alpha * (x - b.delta() * t - b.x1);
  const double by = b.beta * (x - b.gamma() * t - b.x2);
  const double ratio = b.beta / b.alpha;
  const double sech = std::exp(log_sech(by));
  const double th = std::tanh(by);
  const double s = std::sin(ax);
  const double num = std::cos(ax) * sech - ratio * s * th * sech;
  const double den = 1.0 + ratio * ratio * s * s * sech * sech;
  return 2.0 * std::numbers::sqrt2 * b.beta * num / den;
}

double ground_state_mass(Exponent p) {
  const double m = 4.0 / (p.value() - 1);
  const double a = 0.5 * (p.value() - 1);
  return std::pow(0.5 * (p.value() + 1), 2.0 / (p.value() - 1)) * sech_power_integral(m, a);
}

double ground_state_gradient_mass(Exponent p) {
  const double m = 4.0 / (p.value() - 1);
  const double a = 0.5 * (p.value() - 1);
  return std::pow(0.5 * (p.value() + 1), 2.0 / (p.value() - 1)) *
         (sech_power_integral(m, a) - sech_power_integral(m + 2.0, a));
}

double translation_bound(Exponent p, double c, double r, int s) {
  check_speed(c);
  if (s != 0 && s != 1) throw ParameterError("translation bound needs s in {0, 1}");
  if (!(r >= 0.0)) throw ParameterError("translation bound needs r >= 0");
  const int k = s + 1;
  const NormPair base = ground_state_norms(p, k);
  const double e = 1.0 / (p.value() - 1);
  const double l2_squared = std::pow(c, 2.0 * e + k - 0.5) * base.l2_squared;
  const double sup = std::pow(c, e + 0.5 * k) * base.sup;
  double z = 0.0;
  if (s == 1) z = 2.0 * e * std::acosh(std::sqrt(0.5 * (p.value() + 1))) / std::sqrt(c);
  return std::sqrt(l2_squared + (r + 2.0 * z) * sup * sup) * r;
}

double wrap_distance(double x, double length) { return x - length * std::round(x / length); }

Field sample_soliton(const SolitonParams& s, Exponent p, const GridSpec& grid, double t) {
  validate(s, p);
  std::vector<double> v(grid.points());
  const double center = s.x0 + s.c * t;
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = s.sign * soliton_profile(p, s.c, wrap_distance(grid.x(j) - center, grid.length()));
  return Field(grid, p, t, std::move(v));
}

Field sample_breather(const BreatherParams& b, const GridSpec& grid, double t) {
  validate(b);
  // Shift the envelope center to the origin so the wrap acts on the envelope.
  const double center = b.x2 + b.gamma() * t;
  std::vector<double> v(grid.points());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = center + wrap_distance(grid.x(j) - center, grid.length());
    v[j] = breather(b, t, x);
  }
  return Field(grid, Exponent(3), t, std::move(v));
}

SuperposedField superpose(std::span<const SolitonParams> solitons, Exponent p, const GridSpec& grid,
                          const SuperposeOptions& opts) {
  if (solitons.empty()) throw ParameterError("superposition needs at least one soliton");
  double c_min = solitons.front().c;
  for (const auto& s : solitons) {
    validate(s, p);
    c_min = std::min(c_min, s.c);
  }
  const double min_sep = opts.min_separation.value_or(20.0 / std::sqrt(c_min));
  const double margin = opts.boundary_margin.value_or(20.0 / std::sqrt(c_min));
  for (std::size_t i = 0; i + 1 < solitons.size(); ++i) {
    const double gap = solitons[i + 1].x0 - solitons[i].x0;
    if (!(gap > 0.0)) throw OverlapError("superposition centers must be strictly increasing");
    if (gap < min_sep)
      throw OverlapError("superposition gap " + std::to_string(gap) + " below minimum " + std::to_string(min_sep));
  }
  const double lo = grid.left() + margin;
  const double hi = -grid.left() - margin;
  for (const auto& s : solitons)
    if (s.x0 < lo || s.x0 > hi)
      throw DomainError("soliton center " + std::to_string(s.x0) + " within the boundary margin");

  const std::size_t n = grid.points();
  std::vector<std::vector<double>> parts;
  parts.reserve(solitons.size());
  for (const auto& s : solitons) {
    const Field f = sample_soliton(s, p, grid);
    parts.emplace_back(f.values().begin(), f.values().end());
  }
  std::vector<double> sum(n, 0.0);
  for (const auto& part : parts)
    for (std::size_t j = 0; j < n; ++j) sum[j] += part[j];
  double interaction = 0.0;
  for (std::size_t a = 0; a < parts.size(); ++a)
    for (std::size_t b = 0; b < parts.size(); ++b) {
      if (a == b) continue;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += parts[a][j] * parts[b][j];
      interaction += acc * grid.dx();
    }
  return {Field(grid, p, 0.0, std::move(sum)), interaction};
}

}  // namespace gkdv
