#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gkdv/exponent.hpp"
#include "gkdv/grid.hpp"

namespace gkdv {

// phi(x) = 1/2 - arctan(e^{kappa x}) / pi
class PhiWeight {
 public:
  explicit PhiWeight(double kappa);
  double kappa() const { return kappa_; }
  double operator()(double x) const;
  double d1(double x) const;
  double d3(double x) const;
  // Constants with lambda0 e^{-kappa|x|} < -phi' < e^{-kappa|x|} / lambda0
  // and phi(x) >= lambda1 e^{-kappa x} for x >= 0.
  double lambda0() const;
  static constexpr double lambda1() { return 0.25; }

 private:
  double kappa_;
};

// psi(x) = (2/pi) arctan(e^{-sqrt(nu) x / 2})
class PsiWeight {
 public:
  explicit PsiWeight(double nu);
  double nu() const { return nu_; }
  double operator()(double x) const;
  double d1(double x) const;
  double d3(double x) const;

 private:
  double nu_;
};

// psi_i = psi(. - m_i) for i < N, psi_N = 1, phi_i = psi_i - psi_{i-1}. Indices are 1-based.
class Partition {
 public:
  Partition(double nu, std::vector<double> midpoints);
  static Partition from_centers(double nu, std::span<const double> centers);

  std::size_t count() const { return midpoints_.size() + 1; }
  double nu() const { return psi_.nu(); }
  const std::vector<double>& midpoints() const { return midpoints_; }
  double psi(std::size_t i, double x) const;
  double phi(std::size_t i, double x) const;

 private:
  PsiWeight psi_;
  std::vector<double> midpoints_;
};

struct DecayFit {
  double rate = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::size_t samples = 0;
};

double tail_mass(const Field& u, double xstar);
double nondispersion_profile(const Trajectory& traj, double rho, double R);
double tilde_m(double a, double b);

// kappa = sqrt(eta / 2) with eta = margin * (mtilde_slope - f_slope).
double default_kappa(double mtilde_slope, double f_slope, double margin = 0.5);

struct MonotoneOptions {
  // DomainError when the weighted mass over the outer boundary cells exceeds this fraction of the mass.
  double boundary_fraction = 1e-8;
  double boundary_margin = 0.05;
};

struct TimeValue {
  double t;
  double value;
};

// I(t) = int u^2(t, x + mtilde(t)) phi(x - x0 + f(t) - f(t0)) dx for frames with t >= t0.
std::vector<TimeValue> monotone_functional(const Trajectory& traj, double t0, double x0, double kappa,
                                           double f_slope, const std::function<double(double)>& mtilde,
                                           const MonotoneOptions& opts = {});

struct MonotoneBoundFit {
  double kappa = 0.0;
  double c1 = 0.0;  // smallest C1 with I(t0) <= I(t) + C1 e^{kappa x0} over all sampled pairs
  std::size_t pairs = 0;
  double worst_margin = 0.0;  // max over pairs of I(t0) - I(t) - C1 e^{kappa x0} (<= 0)
};

MonotoneBoundFit fit_monotone_bound(const Trajectory& traj, std::span<const double> x0s, double kappa, double f_slope,
                                    const std::function<double(double)>& mtilde, const MonotoneOptions& opts = {});

double localized_mass(const Field& u, const Partition& part, std::size_t i);
// Requires 0 < kappa < c1 / 4 (KappaRangeError).
double localized_energy(const Field& u, const Partition& part, std::size_t i, double kappa, double c1);

struct DeficitSeries {
  std::size_t index = 0;               // 1-based soliton index
  std::vector<double> mass;            // M_i per frame
  std::vector<double> energy;          // modified energy per frame
  double max_mass_deficit = 0.0;       // max over t < t' of M_i(t) - M_i(t')
  double max_energy_deficit = 0.0;
};

struct MonotonicityViolation {
  std::size_t index;
  bool energy;  // false: mass
  double t;
  double t_later;
  double deficit;
  double allowance;
};

struct MonotonicityReport {
  std::vector<DeficitSeries> series;
  double rate = 0.0;          // nu^{3/2} / 4
  double k1 = 0.0;            // smallest K1 covering every pair
  double k1_early = 0.0;      // smallest K1 covering pairs whose first time lies in the first half
  double mass_floor = 0.0;    // 10x the conservation drift of the mass
  double energy_floor = 0.0;  // 10x the drift of energy + kappa mass
  double max_raw_deficit = 0.0;
  std::vector<MonotonicityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// midpoints[k] are the partition midpoints for frame k.
MonotonicityReport monotonicity_report(const Trajectory& traj, std::span<const std::vector<double>> midpoints,
                                       double kappa, double nu, double c1);

struct ProfileTerm {
  double c;
  double center;
  int sign = 1;
};

double weinstein_H(const Field& eps, std::span<const ProfileTerm> solitons, const Partition& part);

struct WeinsteinF {
  double direct = 0.0;
  double abel = 0.0;
  double relative_gap() const;
};

// Throws Error when direct and Abel forms disagree beyond tol (relative).
WeinsteinF weinstein_F(const Field& u, std::span<const ProfileTerm> solitons, const Partition& part, double kappa,
                       double tol = 1e-10);

struct CoercivityOptions {
  std::size_t samples = 200;
  double h1_norm = 1e-2;
  std::uint64_t seed = 1;
  int modes = 48;          // random Fourier modes per sample
  double lambda_cap = 100.0;
};

struct CoercivitySample {
  double norm2;     // ||eps||_{H1}^2
  double h;         // weinstein_H
  double overlap2;  // sum_i (int eps R_i)^2
};

struct CoercivityFit {
  std::vector<CoercivitySample> samples;
  // Smallest lambda in (0, cap] with norm2 <= lambda h + overlap2 / lambda for every sample.
  std::optional<double> lambda0;
  // Smallest lambda with norm2 <= lambda h + lambda^2 overlap2 for every sample.
  double lambda_quadratic = 0.0;
  double min_h_ratio = 0.0;  // min over samples of h / norm2
};

// Seeded random eps orthogonal to every d_x R_i, scaled to the requested H1 norm. Even samples are spread
// over the grid, odd ones are concentrated on the profiles.
CoercivityFit coercivity_sample(const GridSpec& grid, Exponent p, std::span<const ProfileTerm> solitons,
                                const Partition& part, const CoercivityOptions& opts = {});

DecayFit fit_exponential_decay(std::span<const TimeValue> series, double trim = 0.1);

enum class Side { Left, Right };

struct SpatialDecayOptions {
  double floor = 1e-11;       // window ends where |d^s u| drops below floor * max
  double skip = 2.0;          // minimum distance from the center before the window opens
  double tail_fraction = 1e-8;
  double trim = 0.1;
};

DecayFit fit_spatial_decay(const Field& u, int s, std::span<const double> centers, Side side,
                           const SpatialDecayOptions& opts = {});

}  // namespace gkdv
