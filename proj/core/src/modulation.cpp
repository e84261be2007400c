#include "gkdv/modulation.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gkdv/errors.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

namespace {

struct Problem {
  const Field& u;
  bool full;
  std::vector<int> sign;
  std::vector<double> c_fixed;  // translations mode
  std::vector<double> tol;
};

// Unknown layout: translations [z_1..z_N]; full [c_1, z_1, ..., c_N, z_N].
std::size_t count_of(const Problem& pb, std::size_t unknowns) { return pb.full ? unknowns / 2 : unknowns; }
double speed_of(const Problem& pb, const std::vector<double>& x, std::size_t i) {
  return pb.full ? x[2 * i] : pb.c_fixed[i];
}
double center_of(const Problem& pb, const std::vector<double>& x, std::size_t i) {
  return pb.full ? x[2 * i + 1] : x[i];
}

std::vector<double> profile_sum(const Field& u, std::span<const SolitonParams> sols) {
  const GridSpec& g = u.grid();
  std::vector<double> sum(u.size(), 0.0);
  for (const auto& s : sols)
    for (std::size_t j = 0; j < sum.size(); ++j)
      sum[j] += s.sign * soliton_profile(u.exponent(), s.c, wrap_distance(g.x(j) - s.x0, g.length()));
  return sum;
}

std::vector<SolitonParams> to_solitons(const Problem& pb, const std::vector<double>& x) {
  std::vector<SolitonParams> out;
  for (std::size_t i = 0; i < count_of(pb, x.size()); ++i)
    out.push_back({speed_of(pb, x, i), center_of(pb, x, i), pb.sign[i]});
  return out;
}

// Orthogonality residuals for the current unknowns.
std::vector<double> residuals(const Problem& pb, const std::vector<double>& x) {
  const Field& u = pb.u;
  const GridSpec& g = u.grid();
  const Exponent p = u.exponent();
  const auto sols = to_solitons(pb, x);
  const auto sum = profile_sum(u, sols);
  std::vector<double> eps(u.size());
  for (std::size_t j = 0; j < eps.size(); ++j) eps[j] = u[j] - sum[j];
  std::vector<double> out;
  for (const auto& s : sols) {
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < eps.size(); ++j) {
      const double y = wrap_distance(g.x(j) - s.x0, g.length());
      a += eps[j] * s.sign * soliton_profile_derivative(p, s.c, y, 1);
      if (pb.full) {
        const double r = s.sign * soliton_profile(p, s.c, y);
        b += eps[j] * (p.value() == 5 ? r * r * r : r);
      }
    }
    out.push_back(a * g.dx());
    if (pb.full) out.push_back(b * g.dx());
  }
  return out;
}

double scaled_norm(const Problem& pb, const std::vector<double>& r) {
  double m = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) m = std::max(m, std::abs(r[k]) / pb.tol[k]);
  return m;
}

void solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  std::vector<lapack_int> piv(n);
  const lapack_int info = LAPACKE_dgesv(LAPACK_ROW_MAJOR, static_cast<lapack_int>(n), 1, a.data(),
                                        static_cast<lapack_int>(n), piv.data(), b.data(), 1);
  if (info != 0) throw NoConvergenceError("singular modulation Jacobian");
}

double profile_h1(Exponent p, double c) {
  const double e = 2.0 / (p.value() - 1);
  return std::sqrt(std::pow(c, e - 0.5) * ground_state_mass(p) + std::pow(c, e + 0.5) * ground_state_gradient_mass(p));
}

void check_layout(std::span<const SolitonParams> sols, Exponent p, const ModulationOptions& opts) {
  if (sols.empty()) throw ParameterError("modulation needs at least one soliton");
  double c_min = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) {
    if (!(s.c > 0.0)) throw SpeedRangeError("modulation speed must be positive");
    validate(s, p);
    c_min = std::min(c_min, s.c);
  }
  const double min_sep = opts.min_separation.value_or(10.0 / std::sqrt(c_min));
  for (std::size_t i = 0; i + 1 < sols.size(); ++i) {
    if (!(sols[i + 1].x0 - sols[i].x0 >= min_sep))
      throw SeparationError("soliton centers must increase by at least " + std::to_string(min_sep));
    if (std::abs(sols[i + 1].c - sols[i].c) < opts.speed_gap)
      throw SeparationError("near-degenerate soliton speeds");
  }
}

void check_closeness(const Field& u, std::span<const SolitonParams> sols, const ModulationOptions& opts) {
  double cap = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) cap = std::min(cap, 0.5 * profile_h1(u.exponent(), s.c));
  cap = opts.closeness_cap.value_or(cap);
  const double dist = sobolev_norm(residual_field(u, sols), 1.0);
  if (dist > cap)
    throw ClosenessError("distance " + std::to_string(dist) + " to the profile sum exceeds cap " + std::to_string(cap));
}

ModulationFrame newton(Problem& pb, std::vector<double> x, const ModulationOptions& opts) {
  const std::size_t n = x.size();
  const std::size_t count = count_of(pb, n);
  const Exponent p = pb.u.exponent();
  const GridSpec& g = pb.u.grid();

  double u_norm = 0.0;
  for (double v : pb.u.values()) u_norm += v * v;
  u_norm = std::sqrt(u_norm * g.dx());
  pb.tol.clear();
  for (std::size_t i = 0; i < count; ++i) {
    const double c = speed_of(pb, x, i);
    const double e = 2.0 / (p.value() - 1);
    const double dr = std::sqrt(std::pow(c, e + 0.5) * ground_state_gradient_mass(p));
    const double floor = std::numeric_limits<double>::min();
    pb.tol.push_back(std::max(opts.tol_factor * u_norm * dr, floor));
    if (pb.full) {
      double rr = 0.0;
      for (std::size_t j = 0; j < g.points(); ++j) {
        const double q = soliton_profile(p, c, g.x(j));
        const double w = p.value() == 5 ? q * q * q : q;
        rr += w * w;
      }
      pb.tol.push_back(std::max(opts.tol_factor * u_norm * std::sqrt(rr * g.dx()), floor));
    }
  }

  std::vector<double> r = residuals(pb, x);
  int it = 0;
  for (; it < opts.max_iterations && scaled_norm(pb, r) > 1.0; ++it) {
    std::vector<double> jac(n * n);
    for (std::size_t k = 0; k < n; ++k) {
      const bool is_speed = pb.full && k % 2 == 0;
      const std::size_t i = pb.full ? k / 2 : k;
      const double scale = is_speed ? speed_of(pb, x, i) : 1.0 / std::sqrt(speed_of(pb, x, i));
      const double h = opts.fd_step * scale;
      std::vector<double> xp = x;
      xp[k] += h;
      const auto rp = residuals(pb, xp);
      for (std::size_t row = 0; row < n; ++row) jac[row * n + k] = (rp[row] - r[row]) / h;
    }
    std::vector<double> delta(n);
    for (std::size_t k = 0; k < n; ++k) delta[k] = -r[k];
    solve_dense(jac, delta, n);
    // Backtrack on the scaled residual; keep speeds positive.
    double lambda = 1.0;
    const double before = scaled_norm(pb, r);
    std::vector<double> trial(n), rt;
    for (int bt = 0; bt < 30; ++bt, lambda *= 0.5) {
      for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] + lambda * delta[k];
      bool positive = true;
      if (pb.full)
        for (std::size_t i = 0; i < count; ++i) positive = positive && trial[2 * i] > 0.0;
      if (!positive) continue;
      rt = residuals(pb, trial);
      if (scaled_norm(pb, rt) < before) break;
    }
    if (rt.empty()) throw SpeedRangeError("Newton step drives a speed nonpositive");
    x = trial;
    r = rt;
  }
  if (scaled_norm(pb, r) > 1.0)
    throw NoConvergenceError("modulation Newton did not converge in " + std::to_string(opts.max_iterations) +
                             " iterations (scaled residual " + std::to_string(scaled_norm(pb, r)) + ")");

  ModulationFrame f;
  f.t = pb.u.time();
  for (std::size_t i = 0; i < count; ++i) {
    f.c.push_back(speed_of(pb, x, i));
    f.center.push_back(center_of(pb, x, i));
    f.sign.push_back(pb.sign[i]);
    if (!(f.c.back() > 0.0)) throw SpeedRangeError("fitted speed is nonpositive");
  }
  for (std::size_t i = 0; i + 1 < count; ++i)
    if (!(f.center[i] < f.center[i + 1])) throw SeparationError("fitted centers lost their ordering");
  const Field eps = residual_field(pb.u, f.solitons());
  f.eps_l2 = std::sqrt(mass(eps));
  f.eps_h1 = sobolev_norm(eps, 1.0);
  f.ortho_residuals = r;
  f.tolerances = pb.tol;
  f.iterations = it;
  return f;
}

}  // namespace

std::vector<SolitonParams> ModulationFrame::solitons() const {
  std::vector<SolitonParams> out;
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back({c[i], center[i], sign.empty() ? 1 : sign[i]});
  return out;
}

Field residual_field(const Field& u, std::span<const SolitonParams> solitons) {
  auto sum = profile_sum(u, solitons);
  for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = u[j] - sum[j];
  return u.with_values(std::move(sum));
}

ModulationFrame decompose_translations(const Field& u, std::span<const double> c_fixed,
                                       std::span<const double> guesses, std::span<const int> signs,
                                       const ModulationOptions& opts) {
  if (c_fixed.size() != guesses.size()) throw ParameterError("one speed per center guess is required");
  if (!signs.empty() && signs.size() != guesses.size()) throw ParameterError("one sign per center guess is required");
  std::vector<SolitonParams> sols;
  for (std::size_t i = 0; i < guesses.size(); ++i)
    sols.push_back({c_fixed[i], guesses[i], signs.empty() ? 1 : signs[i]});
  check_layout(sols, u.exponent(), opts);
  check_closeness(u, sols, opts);
  Problem pb{u, false, {}, {c_fixed.begin(), c_fixed.end()}, {}};
  for (const auto& s : sols) pb.sign.push_back(s.sign);
  return newton(pb, {guesses.begin(), guesses.end()}, opts);
}

ModulationFrame decompose_full(const Field& u, std::span<const SolitonParams> guesses, const ModulationOptions& opts) {
  check_layout(guesses, u.exponent(), opts);
  check_closeness(u, guesses, opts);
  Problem pb{u, true, {}, {}, {}};
  std::vector<double> x;
  for (const auto& s : guesses) {
    pb.sign.push_back(s.sign);
    x.push_back(s.c);
    x.push_back(s.x0);
  }
  ModulationFrame f = newton(pb, std::move(x), opts);
  for (std::size_t i = 0; i + 1 < f.c.size(); ++i)
    if (std::abs(f.c[i + 1] - f.c[i]) < opts.speed_gap) throw SeparationError("fitted speeds are near-degenerate");
  return f;
}

std::vector<std::vector<double>> ModulationTrack::midpoints() const {
  std::vector<std::vector<double>> out;
  for (const auto& f : frames) {
    std::vector<double> m;
    for (std::size_t i = 0; i + 1 < f.center.size(); ++i) m.push_back(0.5 * (f.center[i] + f.center[i + 1]));
    out.push_back(std::move(m));
  }
  return out;
}

ModulationTrack track(const Trajectory& traj, ModulationMode mode, std::span<const SolitonParams> guesses,
                      const TrackOptions& opts) {
  ModulationTrack tr;
  if (traj.frames.empty()) return tr;
  std::vector<SolitonParams> current(guesses.begin(), guesses.end());
  auto solve = [&](const Field& u, const std::vector<SolitonParams>& start) {
    if (mode == ModulationMode::Full) return decompose_full(u, start, opts.modulation);
    std::vector<double> cs, xs;
    std::vector<int> sg;
    for (const auto& s : start) {
      cs.push_back(s.c);
      xs.push_back(s.x0);
      sg.push_back(s.sign);
    }
    return decompose_translations(u, cs, xs, sg, opts.modulation);
  };
  for (const auto& u : traj.frames) {
    // Predict centers from the last two fits, else from the speeds.
    std::vector<SolitonParams> predicted = current;
    if (!tr.frames.empty()) {
      const ModulationFrame& last = tr.frames.back();
      const double dt = u.time() - last.t;
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        double v = last.c[i];
        if (tr.frames.size() >= 2) {
          const ModulationFrame& prev = tr.frames[tr.frames.size() - 2];
          v = (last.center[i] - prev.center[i]) / (last.t - prev.t);
        }
        predicted[i].x0 = last.center[i] + v * dt;
      }
    }
    try {
      ModulationFrame f;
      try {
        f = solve(u, predicted);
      } catch (const Error&) {
        try {
          f = solve(u, current);
        } catch (const Error&) {
          double c_min = std::numeric_limits<double>::infinity();
          for (const auto& s : current) c_min = std::min(c_min, s.c);
          const auto peaks = locate_peaks(u, current.size(), 5.0 / std::sqrt(c_min));
          if (peaks.size() != current.size()) throw;
          std::vector<SolitonParams> by_peak = current;
          for (std::size_t i = 0; i < by_peak.size(); ++i) by_peak[i].x0 = peaks[i];
          f = solve(u, by_peak);
        }
      }
      current = f.solitons();
      tr.frames.push_back(std::move(f));
    } catch (const Error& e) {
      tr.failure = "t = " + std::to_string(u.time()) + ": " + e.what();
      break;
    }
  }

  const std::size_t nf = tr.frames.size();
  if (nf == 0) return tr;
  const std::size_t count = tr.frames.front().c.size();
  double c_min = std::numeric_limits<double>::infinity();
  for (double c : tr.frames.front().c) c_min = std::min(c_min, c);
  const double nu = opts.nu.value_or(c_min);
  const double t0 = tr.frames.front().t;
  tr.center_velocity.assign(nf, std::vector<double>(count, 0.0));
  tr.speed_drift.assign(nf, std::vector<double>(count, 0.0));
  for (std::size_t k = 0; k < nf; ++k)
    for (std::size_t i = 0; i < count; ++i) {
      tr.speed_drift[k][i] = tr.frames[k].c[i] - tr.frames[0].c[i];
      if (nf < 2) continue;
      const std::size_t a = k == 0 ? 0 : k - 1;
      const std::size_t b = k + 1 == nf ? k : k + 1;
      tr.center_velocity[k][i] = (tr.frames[b].center[i] - tr.frames[a].center[i]) / (tr.frames[b].t - tr.frames[a].t);
    }

  if (nf >= 2) {
    const Field* f0 = &traj.frames.front();
    const GridSpec& g = f0->grid();
    const double rc1 = std::sqrt(c_min);
    for (std::size_t k = 0; k < nf; ++k) {
      const ModulationFrame& mf = tr.frames[k];
      const Field eps = residual_field(traj.frames[k], mf.solitons());
      for (std::size_t i = 0; i < count; ++i) {
        double w = 0.0;
        for (std::size_t j = 0; j < eps.size(); ++j)
          w += eps[j] * eps[j] * std::exp(-rc1 * std::abs(wrap_distance(g.x(j) - mf.center[i], g.length())));
        VelocityCheck vc{mf.t, i, std::abs(tr.center_velocity[k][i] - mf.c[i]), std::sqrt(w * g.dx()),
                         std::exp(-std::pow(nu, 1.5) * (mf.t - t0) / 4.0)};
        tr.velocity_constant = std::max(tr.velocity_constant, vc.lhs / (vc.weighted_eps + vc.exponential));
        tr.checks.push_back(vc);
      }
    }
  }

  tr.separation_rate = count >= 2 ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t k = 1; k < nf && count >= 2; ++k)
    for (std::size_t i = 0; i + 1 < count; ++i)
      tr.separation_rate = std::min(tr.separation_rate,
                                    (tr.frames[k].center[i + 1] - tr.frames[k].center[i]) / (tr.frames[k].t - t0));
  if (!std::isfinite(tr.separation_rate)) tr.separation_rate = 0.0;
  return tr;
}

std::vector<TimeValue> convergence_series(const Trajectory& traj, std::span<const SolitonParams> asymptotic,
                                          double t_ref, double behind) {
  if (asymptotic.empty()) throw ParameterError("convergence series needs at least one profile");
  std::vector<TimeValue> out;
  out.reserve(traj.frames.size());
  std::vector<SolitonParams> now(asymptotic.begin(), asymptotic.end());
  for (const Field& u : traj.frames) {
    double left = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < now.size(); ++i) {
      now[i].x0 = asymptotic[i].x0 + asymptotic[i].c * (u.time() - t_ref);
      left = std::min(left, now[i].x0 - behind);
    }
    const Field eps = residual_field(u, now);
    const auto d = derivative(eps, 1);
    const GridSpec& g = u.grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < eps.size(); ++j)
      if (g.x(j) >= left) acc += eps[j] * eps[j] + d[j] * d[j];
    out.push_back({u.time(), std::sqrt(acc * g.dx())});
  }
  return out;
}

DecayFit fit_convergence_decay(std::span<const TimeValue> series, double trim) {
  if (series.size() < 3) throw ParameterError("convergence fit needs at least 3 samples");
  std::size_t lo = 0;
  while (lo + 1 < series.size() && series[lo + 1].value <= series[lo].value) ++lo;
  std::size_t im = 0;
  for (std::size_t k = 0; k < series.size(); ++k)
    if (series[k].value < series[im].value) im = k;
  std::size_t a = std::min(lo, im);
  for (std::size_t k = a; k <= im; ++k)
    if (series[k].value > series[a].value) a = k;
  std::size_t b = a;
  while (b < im && series[b].value > 2.0 * series[im].value) ++b;
  return fit_exponential_decay(series.subspan(a, b - a + 1), trim);
}

std::vector<double> locate_peaks(const Field& u, std::size_t count, double min_separation) {
  const std::size_t n = u.size();
  const GridSpec& g = u.grid();
  std::vector<std::size_t> cand;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(u[j]);
    if (a >= std::abs(u[(j + n - 1) % n]) && a > std::abs(u[(j + 1) % n])) cand.push_back(j);
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return std::abs(u[a]) > std::abs(u[b]); });
  std::vector<double> picked;
  for (std::size_t j : cand) {
    if (picked.size() == count) break;
    // Parabolic refinement through the three neighbours.
    const double ym = std::abs(u[(j + n - 1) % n]), y0 = std::abs(u[j]), yp = std::abs(u[(j + 1) % n]);
    const double den = ym - 2.0 * y0 + yp;
    const double off = den != 0.0 ? 0.5 * (ym - yp) / den : 0.0;
    const double x = g.x(j) + off * g.dx();
    bool far = true;
    for (double q : picked) far = far && std::abs(wrap_distance(x - q, g.length())) >= min_separation;
    if (far) picked.push_back(x);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace gkdv
