#include "gkdv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "gkdv/errors.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

namespace {

constexpr double kPi = std::numbers::pi;

double sech(double y) {
  const double e = std::exp(-std::abs(y));
  return 2.0 * e / (1.0 + e * e);
}

// pi/2 - arctan(e^{y}) = arctan(e^{-y}), evaluated without overflow.
double atan_exp_complement(double y) {
  return y > 0.0 ? std::atan(std::exp(-y)) : 0.5 * kPi - std::atan(std::exp(y));
}

double ipow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

double weighted_sum(std::span<const double> f, const std::vector<double>& w, double dx) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += f[j] * w[j];
  return acc * dx;
}

std::vector<double> psi_samples(const Partition& part, std::size_t i, const GridSpec& grid) {
  std::vector<double> w(grid.points());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = part.psi(i, grid.x(j));
  return w;
}

std::vector<double> phi_samples(const Partition& part, std::size_t i, const GridSpec& grid) {
  std::vector<double> w(grid.points());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = part.phi(i, grid.x(j));
  return w;
}

// Energy density 1/2 u_x^2 - u^{p+1}/(p+1) on the grid.
std::vector<double> energy_density(const Field& u) {
  const auto ux = derivative(u, 1);
  const int p = u.exponent().value();
  std::vector<double> e(u.size());
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = 0.5 * ux[j] * ux[j] - ipow(u[j], p + 1) / (p + 1);
  return e;
}

std::vector<double> squares(const Field& u) {
  std::vector<double> s(u.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = u[j] * u[j];
  return s;
}

void check_index(const Partition& part, std::size_t i) {
  if (i < 1 || i > part.count())
    throw IndexError("partition index " + std::to_string(i) + " outside [1, " + std::to_string(part.count()) + "]");
}

void check_kappa(double kappa, double c1) {
  if (!(kappa > 0.0 && kappa < 0.25 * c1))
    throw KappaRangeError("kappa = " + std::to_string(kappa) + " outside (0, c1/4) with c1 = " + std::to_string(c1));
}

void check_profile_layout(std::span<const ProfileTerm> solitons, const Partition& part) {
  if (solitons.size() != part.count()) throw OrderingError("partition size does not match the soliton count");
  for (std::size_t i = 0; i + 1 < solitons.size(); ++i) {
    if (!(solitons[i].center < solitons[i + 1].center)) throw OrderingError("soliton centers must increase");
    const double m = part.midpoints()[i];
    if (!(m > solitons[i].center && m < solitons[i + 1].center))
      throw OrderingError("partition midpoint not between consecutive centers");
  }
  for (const auto& s : solitons)
    if (!(s.c > 0.0)) throw ParameterError("profile speeds must be positive");
}

std::vector<double> profile_samples(const ProfileTerm& s, Exponent p, const GridSpec& grid) {
  std::vector<double> r(grid.points());
  for (std::size_t j = 0; j < r.size(); ++j)
    r[j] = s.sign * soliton_profile(p, s.c, wrap_distance(grid.x(j) - s.center, grid.length()));
  return r;
}

struct LineFit {
  double slope;
  double intercept;
  double rms;
};

LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  double ss = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n)};
}

}  // namespace

PhiWeight::PhiWeight(double kappa) : kappa_(kappa) {
  if (!(kappa > 0.0)) throw ParameterError("phi weight needs kappa > 0");
}

double PhiWeight::operator()(double x) const { return atan_exp_complement(kappa_ * x) / kPi; }
double PhiWeight::d1(double x) const { return -kappa_ / (2.0 * kPi) * sech(kappa_ * x); }
double PhiWeight::d3(double x) const {
  const double th = std::tanh(kappa_ * x);
  return ipow(kappa_, 3) / (2.0 * kPi) * sech(kappa_ * x) * (1.0 - 2.0 * th * th);
}
double PhiWeight::lambda0() const {
  const double a = kappa_ / (2.0 * kPi);
  return 0.5 * std::min(a, 0.5 / a);
}

PsiWeight::PsiWeight(double nu) : nu_(nu) {
  if (!(nu > 0.0)) throw ParameterError("psi weight needs nu > 0");
}

double PsiWeight::operator()(double x) const {
  const double a = 0.5 * std::sqrt(nu_);
  return 2.0 / kPi * atan_exp_complement(a * x);
}
double PsiWeight::d1(double x) const {
  const double a = 0.5 * std::sqrt(nu_);
  return -a / kPi * sech(a * x);
}
double PsiWeight::d3(double x) const {
  const double a = 0.5 * std::sqrt(nu_);
  const double th = std::tanh(a * x);
  return ipow(a, 3) / kPi * sech(a * x) * (1.0 - 2.0 * th * th);
}

Partition::Partition(double nu, std::vector<double> midpoints) : psi_(nu), midpoints_(std::move(midpoints)) {
  for (std::size_t i = 0; i + 1 < midpoints_.size(); ++i)
    if (!(midpoints_[i] < midpoints_[i + 1])) throw OrderingError("partition midpoints must increase");
}

Partition Partition::from_centers(double nu, std::span<const double> centers) {
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < centers.size(); ++i) mids.push_back(0.5 * (centers[i] + centers[i + 1]));
  return Partition(nu, std::move(mids));
}

double Partition::psi(std::size_t i, double x) const {
  if (i == 0) return 0.0;
  check_index(*this, i);
  if (i == count()) return 1.0;
  return psi_(x - midpoints_[i - 1]);
}

double Partition::phi(std::size_t i, double x) const {
  check_index(*this, i);
  return psi(i, x) - psi(i - 1, x);
}

double tail_mass(const Field& u, double xstar) {
  const GridSpec& g = u.grid();
  if (!(xstar >= g.left() && xstar <= -g.left()))
    throw DomainError("tail cut " + std::to_string(xstar) + " outside the grid domain");
  const double dx = g.dx();
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double cover = std::clamp((xstar - (g.x(j) - 0.5 * dx)) / dx, 0.0, 1.0);
    if (cover == 0.0) break;
    acc += cover * u[j] * u[j];
  }
  return acc * dx;
}

double nondispersion_profile(const Trajectory& traj, double rho, double R) {
  if (!(rho > 0.0) || !(R > 0.0)) throw ParameterError("non-dispersion profile needs rho > 0 and R > 0");
  double eps = 0.0;
  for (const auto& f : traj.frames) eps = std::max(eps, tail_mass(f, rho * f.time() - R));
  return eps;
}

double tilde_m(double a, double b) {
  const double h = 0.5 * (b - a);
  return 1.0 + 0.5 * (a + b) - std::sqrt(1.0 + h * h);
}

double default_kappa(double mtilde_slope, double f_slope, double margin) {
  const double eta = margin * (mtilde_slope - f_slope);
  if (!(eta > 0.0)) throw ParameterError("mtilde slope must exceed the f slope");
  return std::sqrt(0.5 * eta);
}

std::vector<TimeValue> monotone_functional(const Trajectory& traj, double t0, double x0, double kappa,
                                           double f_slope, const std::function<double(double)>& mtilde,
                                           const MonotoneOptions& opts) {
  const PhiWeight phi(kappa);
  std::vector<TimeValue> out;
  for (const auto& f : traj.frames) {
    const double t = f.time();
    if (t < t0) continue;
    const GridSpec& g = f.grid();
    const double shift = mtilde(t) + x0 - f_slope * (t - t0);
    const std::size_t n = f.size();
    const auto edge = static_cast<std::size_t>(std::ceil(opts.boundary_margin * static_cast<double>(n)));
    double acc = 0.0, boundary = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double u2 = f[j] * f[j];
      const double w = u2 * phi(g.x(j) - shift);
      acc += w;
      total += u2;
      if (j < edge || j + edge >= n) boundary += w;
    }
    if (total > 0.0 && boundary > opts.boundary_fraction * total)
      throw DomainError("weighted mass near the boundary too large at t = " + std::to_string(t));
    out.push_back({t, acc * g.dx()});
  }
  return out;
}

MonotoneBoundFit fit_monotone_bound(const Trajectory& traj, std::span<const double> x0s, double kappa, double f_slope,
                                    const std::function<double(double)>& mtilde, const MonotoneOptions& opts) {
  MonotoneBoundFit fit;
  fit.kappa = kappa;
  struct Pair {
    double deficit, scale;
  };
  std::vector<Pair> pairs;
  for (double x0 : x0s) {
    for (const auto& start : traj.frames) {
      const auto series = monotone_functional(traj, start.time(), x0, kappa, f_slope, mtilde, opts);
      for (const auto& tv : series) pairs.push_back({series.front().value - tv.value, std::exp(kappa * x0)});
    }
  }
  for (const auto& pr : pairs) fit.c1 = std::max(fit.c1, pr.deficit / pr.scale);
  fit.pairs = pairs.size();
  fit.worst_margin = -std::numeric_limits<double>::infinity();
  for (const auto& pr : pairs) fit.worst_margin = std::max(fit.worst_margin, pr.deficit - fit.c1 * pr.scale);
  return fit;
}

double localized_mass(const Field& u, const Partition& part, std::size_t i) {
  check_index(part, i);
  return weighted_sum(squares(u), psi_samples(part, i, u.grid()), u.grid().dx());
}

namespace {

double modified_energy(const Field& u, const std::vector<double>& density, const std::vector<double>& w,
                       double kappa) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += (density[j] + kappa * u[j] * u[j]) * w[j];
  return acc * u.grid().dx();
}

}  // namespace

double localized_energy(const Field& u, const Partition& part, std::size_t i, double kappa, double c1) {
  check_index(part, i);
  check_kappa(kappa, c1);
  return modified_energy(u, energy_density(u), psi_samples(part, i, u.grid()), kappa);
}

MonotonicityReport monotonicity_report(const Trajectory& traj, std::span<const std::vector<double>> midpoints,
                                       double kappa, double nu, double c1) {
  check_kappa(kappa, c1);
  if (!(nu > 0.0)) throw ParameterError("nu must be positive");
  if (midpoints.size() != traj.frames.size()) throw ParameterError("one midpoint list per frame is required");
  MonotonicityReport rep;
  rep.rate = std::pow(nu, 1.5) / 4.0;
  const std::size_t frames = traj.frames.size();
  if (frames == 0) return rep;
  const std::size_t count = midpoints.front().size() + 1;
  for (const auto& m : midpoints)
    if (m.size() + 1 != count) throw ParameterError("midpoint lists must have equal length");

  rep.series.resize(count);
  for (std::size_t i = 0; i < count; ++i) rep.series[i].index = i + 1;
  std::vector<double> total_mass(frames), total_energy(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    const Field& u = traj.frames[k];
    const Partition part(nu, midpoints[k]);
    const auto u2 = squares(u);
    const auto dens = energy_density(u);
    for (std::size_t i = 1; i <= count; ++i) {
      const auto w = psi_samples(part, i, u.grid());
      rep.series[i - 1].mass.push_back(weighted_sum(u2, w, u.grid().dx()));
      rep.series[i - 1].energy.push_back(modified_energy(u, dens, w, kappa));
    }
    total_mass[k] = rep.series.back().mass.back();
    total_energy[k] = rep.series.back().energy.back();
  }
  for (std::size_t k = 0; k < frames; ++k) {
    rep.mass_floor = std::max(rep.mass_floor, 10.0 * std::abs(total_mass[k] - total_mass[0]));
    rep.energy_floor = std::max(rep.energy_floor, 10.0 * std::abs(total_energy[k] - total_energy[0]));
  }

  const double t_start = traj.frames.front().time();
  const double t_mid = 0.5 * (t_start + traj.frames.back().time());
  auto scan = [&](auto&& visit) {
    for (auto& s : rep.series)
      for (int kind = 0; kind < 2; ++kind) {
        const auto& v = kind == 0 ? s.mass : s.energy;
        for (std::size_t a = 0; a < frames; ++a)
          for (std::size_t b = a + 1; b < frames; ++b) visit(s, kind == 1, a, b, v[a] - v[b]);
      }
  };
  scan([&](DeficitSeries& s, bool en, std::size_t a, std::size_t, double d) {
    double& mx = en ? s.max_energy_deficit : s.max_mass_deficit;
    mx = std::max(mx, d);
    rep.max_raw_deficit = std::max(rep.max_raw_deficit, d);
    const double t = traj.frames[a].time();
    const double scaled = std::max(0.0, d) * std::exp(rep.rate * (t - t_start));
    rep.k1 = std::max(rep.k1, scaled);
    if (t <= t_mid) rep.k1_early = std::max(rep.k1_early, scaled);
  });
  scan([&](DeficitSeries& s, bool en, std::size_t a, std::size_t b, double d) {
    const double t = traj.frames[a].time();
    const double allowance = (en ? rep.energy_floor : rep.mass_floor) + rep.k1_early * std::exp(-rep.rate * (t - t_start));
    if (d > allowance && rep.violations.size() < 1000)
      rep.violations.push_back({s.index, en, t, traj.frames[b].time(), d, allowance});
  });
  return rep;
}

double weinstein_H(const Field& eps, std::span<const ProfileTerm> solitons, const Partition& part) {
  check_profile_layout(solitons, part);
  const GridSpec& g = eps.grid();
  const int p = eps.exponent().value();
  const auto ex = derivative(eps, 1);
  double h = 0.0;
  for (std::size_t i = 0; i < solitons.size(); ++i) {
    const auto r = profile_samples(solitons[i], eps.exponent(), g);
    const auto w = phi_samples(part, i + 1, g);
    const double c = solitons[i].c;
    double acc = 0.0;
    for (std::size_t j = 0; j < eps.size(); ++j) {
      const double e2 = eps[j] * eps[j];
      acc += (ex[j] * ex[j] + c * e2 - p * ipow(r[j], p - 1) * e2) * w[j];
    }
    h += acc * g.dx() / (c * c);
  }
  return h;
}

double WeinsteinF::relative_gap() const {
  const double scale = std::max(std::abs(direct), std::abs(abel));
  return scale > 0.0 ? std::abs(direct - abel) / scale : 0.0;
}

WeinsteinF weinstein_F(const Field& u, std::span<const ProfileTerm> solitons, const Partition& part, double kappa,
                       double tol) {
  check_profile_layout(solitons, part);
  const GridSpec& g = u.grid();
  const auto dens = energy_density(u);
  const auto u2 = squares(u);
  const std::size_t n = solitons.size();
  WeinsteinF f;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto w = phi_samples(part, i, g);
    const double c = solitons[i - 1].c;
    f.direct += (weighted_sum(dens, w, g.dx()) + 0.5 * c * weighted_sum(u2, w, g.dx())) / (c * c);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const auto w = psi_samples(part, i, g);
    const double e = modified_energy(u, dens, w, kappa);
    const double m = weighted_sum(u2, w, g.dx());
    const double ci = solitons[i - 1].c;
    if (i < n) {
      const double cn = solitons[i].c;
      f.abel += (1.0 / (ci * ci) - 1.0 / (cn * cn)) * e + (1.0 / ci - 1.0 / cn) * (0.5 - kappa * (1.0 / ci + 1.0 / cn)) * m;
    } else {
      f.abel += e / (ci * ci) + (0.5 - kappa / ci) * m / ci;
    }
  }
  if (f.relative_gap() > tol)
    throw Error("direct and Abel forms of F disagree: relative gap " + std::to_string(f.relative_gap()));
  return f;
}

CoercivityFit coercivity_sample(const GridSpec& grid, Exponent p, std::span<const ProfileTerm> solitons,
                                const Partition& part, const CoercivityOptions& opts) {
  check_profile_layout(solitons, part);
  if (opts.samples == 0 || !(opts.h1_norm > 0.0) || opts.modes < 1 || !(opts.lambda_cap > 0.0))
    throw ParameterError("coercivity sampling needs samples, modes, norm and cap positive");
  const std::size_t n = grid.points();
  const double dx = grid.dx();
  auto dot = [dx](const std::vector<double>& a, const std::vector<double>& b) {
    return weighted_sum(a, b, dx);
  };

  std::vector<std::vector<double>> profiles, basis;
  for (const auto& s : solitons) {
    profiles.push_back(profile_samples(s, p, grid));
    auto v = derivative(profiles.back(), grid.length(), 1);
    for (const auto& b : basis) {
      const double k = dot(v, b);
      for (std::size_t j = 0; j < n; ++j) v[j] -= k * b[j];
    }
    const double norm = std::sqrt(dot(v, v));
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  CoercivityFit fit;
  fit.min_h_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> eps(n);
  for (std::size_t k = 0; k < opts.samples; ++k) {
    std::fill(eps.begin(), eps.end(), 0.0);
    for (int m = 1; m <= opts.modes; ++m) {
      const double damp = 1.0 + m / 8.0;
      const double a = normal(rng) / damp, b = normal(rng) / damp;
      const double wk = 2.0 * kPi * m / grid.length();
      for (std::size_t j = 0; j < n; ++j) eps[j] += a * std::cos(wk * grid.x(j)) + b * std::sin(wk * grid.x(j));
    }
    if (k % 2 == 1) {
      for (std::size_t j = 0; j < n; ++j) {
        double env = 0.0;
        for (const auto& s : solitons) {
          const double z = wrap_distance(grid.x(j) - s.center, grid.length()) * std::sqrt(s.c) / 3.0;
          env += std::exp(-z * z);
        }
        eps[j] *= env;
      }
    }
    for (const auto& b : basis) {
      const double c = dot(eps, b);
      for (std::size_t j = 0; j < n; ++j) eps[j] -= c * b[j];
    }
    const double scale = opts.h1_norm / sobolev_norm(eps, grid.length(), 1.0);
    for (double& x : eps) x *= scale;

    const Field ef(grid, p, 0.0, eps);
    CoercivitySample cs{std::pow(sobolev_norm(ef, 1.0), 2), weinstein_H(ef, solitons, part), 0.0};
    for (const auto& r : profiles) cs.overlap2 += std::pow(dot(eps, r), 2);
    fit.min_h_ratio = std::min(fit.min_h_ratio, cs.h / cs.norm2);
    fit.samples.push_back(cs);
  }

  // Each sample admits lambda outside the roots of h l^2 - norm2 l + overlap2; test every root and the cap.
  auto admits = [](const CoercivitySample& cs, double l) {
    return cs.norm2 <= (l * cs.h + cs.overlap2 / l) * (1.0 + 1e-12);
  };
  std::vector<double> candidates{opts.lambda_cap};
  for (const auto& cs : fit.samples) {
    const double disc = cs.norm2 * cs.norm2 - 4.0 * cs.h * cs.overlap2;
    if (cs.h != 0.0 && disc >= 0.0) {
      for (double sg : {-1.0, 1.0}) {
        const double l = (cs.norm2 + sg * std::sqrt(disc)) / (2.0 * cs.h);
        if (l > 0.0 && l <= opts.lambda_cap) candidates.push_back(l);
      }
    } else if (cs.h == 0.0 && cs.overlap2 > 0.0) {
      candidates.push_back(std::min(cs.overlap2 / cs.norm2, opts.lambda_cap));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (double l : candidates)
    if (std::all_of(fit.samples.begin(), fit.samples.end(), [&](const auto& cs) { return admits(cs, l); })) {
      fit.lambda0 = l;
      break;
    }

  for (const auto& cs : fit.samples) {
    // overlap2 l^2 + h l - norm2 >= 0
    double l;
    if (cs.overlap2 > 0.0)
      l = (-cs.h + std::sqrt(cs.h * cs.h + 4.0 * cs.overlap2 * cs.norm2)) / (2.0 * cs.overlap2);
    else
      l = cs.h > 0.0 ? cs.norm2 / cs.h : std::numeric_limits<double>::infinity();
    fit.lambda_quadratic = std::max(fit.lambda_quadratic, l);
  }
  return fit;
}

DecayFit fit_exponential_decay(std::span<const TimeValue> series, double trim) {
  if (series.size() < 8) throw ParameterError("decay fit needs at least 8 samples");
  for (const auto& tv : series)
    if (!(tv.value > 0.0)) throw NonPositiveValueError("decay fit needs positive values");
  const double t_lo = series.front().t, t_hi = series.back().t;
  const double lo = t_lo + trim * (t_hi - t_lo), hi = t_hi - trim * (t_hi - t_lo);
  std::vector<double> ts, ls;
  for (const auto& tv : series)
    if (tv.t >= lo && tv.t <= hi) {
      ts.push_back(tv.t);
      ls.push_back(std::log(tv.value));
    }
  if (ts.size() < 2) throw ParameterError("decay fit window holds fewer than 2 samples");
  const LineFit lf = least_squares(ts, ls);
  return {-lf.slope, std::exp(lf.intercept), lf.rms, {ts.front(), ts.back()}, ts.size()};
}

DecayFit fit_spatial_decay(const Field& u, int s, std::span<const double> centers, Side side,
                           const SpatialDecayOptions& opts) {
  if (centers.empty()) throw ParameterError("spatial decay fit needs at least one center");
  const GridSpec& g = u.grid();
  const auto spec = half_spectrum(u.values());
  const double base = 2.0 * kPi / g.length();
  double total = 0.0, top = 0.0;
  const std::size_t cut = 2 * (spec.size() - 1) / 3;
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const double k = base * static_cast<double>(m);
    const double e = std::pow(k, 2 * s) * std::norm(spec[m]) * (m == 0 ? 0.5 : 1.0);
    total += e;
    if (m >= cut) top += e;
  }
  if (total > 0.0 && top > opts.tail_fraction * total)
    throw SpectralTailError("spectral tail holds " + std::to_string(top / total) + " of the derivative energy");

  const auto d = derivative(u, s);
  const double edge = side == Side::Right ? *std::max_element(centers.begin(), centers.end())
                                          : *std::min_element(centers.begin(), centers.end());
  // Walk outward from the edge center.
  std::vector<double> dist, logs;
  double peak = 0.0;
  for (double v : d) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw NonPositiveValueError("derivative vanishes identically");
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double r = side == Side::Right ? g.x(j) - edge : edge - g.x(j);
    if (r > 0.0) order.push_back(j);
  }
  if (side == Side::Left) std::reverse(order.begin(), order.end());
  bool started = false;
  for (std::size_t j : order) {
    const double a = std::abs(d[j]);
    const double r = std::abs(g.x(j) - edge);
    if (!started) {
      if (r >= opts.skip && a <= 1e-2 * peak) started = true;
      else continue;
    }
    if (a < opts.floor * peak) break;
    dist.push_back(r);
    logs.push_back(std::log(a));
  }
  if (dist.size() < 8) throw ParameterError("spatial decay window holds fewer than 8 samples");
  const double lo = dist.front() + opts.trim * (dist.back() - dist.front());
  const double hi = dist.back() - opts.trim * (dist.back() - dist.front());
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < dist.size(); ++k)
    if (dist[k] >= lo && dist[k] <= hi) {
      xs.push_back(dist[k]);
      ys.push_back(logs[k]);
    }
  const LineFit lf = least_squares(xs, ys);
  return {-lf.slope, std::exp(lf.intercept), lf.rms, {xs.front(), xs.back()}, xs.size()};
}

}  // namespace gkdv
