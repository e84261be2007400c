// Desk-scale acceptance run: one PASS/FAIL line per criterion. Exit status is 0 unless --strict is
// given and a criterion fails, or a criterion cannot be evaluated at all.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gkdv/diagnostics.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/solver.hpp"

using namespace gkdv;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double l2_distance(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s * a.grid().dx());
}

double max_drift(const Trajectory& tr, auto get) {
  const double ref = get(tr.records.front());
  double worst = 0.0;
  for (const auto& r : tr.records) worst = std::max(worst, std::abs(get(r) - ref) / std::abs(ref));
  return worst;
}

double slope(const std::vector<double>& t, const std::vector<double>& y) {
  double mt = 0, my = 0;
  for (std::size_t k = 0; k < t.size(); ++k) mt += t[k], my += y[k];
  mt /= t.size(), my /= t.size();
  double num = 0, den = 0;
  for (std::size_t k = 0; k < t.size(); ++k) num += (t[k] - mt) * (y[k] - my), den += (t[k] - mt) * (t[k] - mt);
  return num / den;
}

// Single KdV soliton, shared by criteria 1 and 2.
const Trajectory& soliton_run() {
  static const Trajectory tr = [] {
    const GridSpec g(128, 1024, 1e-3);
    return evolve(sample_soliton({1.0, 0.0, 1}, Exponent(2), g), 20.0, SolverOptions{.frame_stride = 100});
  }();
  return tr;
}

Verdict conservation() {
  const auto& tr = soliton_run();
  if (tr.truncated()) return {false, "run truncated: " + tr.truncation->message};
  const double dm = max_drift(tr, [](const ConservedRecord& r) { return r.mass; });
  const double de = max_drift(tr, [](const ConservedRecord& r) { return r.energy; });
  const double dh = max_drift(tr, [](const ConservedRecord& r) { return *r.h2_invariant; });
  return {dm <= 1e-8 && de <= 1e-8 && dh <= 1e-6,
          fmt("mass drift %.2e, energy drift %.2e (<= 1e-8); H2-level drift %.2e (<= 1e-6)", dm, de, dh)};
}

Verdict traveling_wave() {
  const auto& tr = soliton_run();
  const double c[] = {1.0};
  double worst = 0.0;
  for (const auto& f : tr.frames) {
    const double guess[] = {f.time()};
    worst = std::max(worst, decompose_translations(f, c, guess).eps_l2);
  }
  const auto mt = track(tr, ModulationMode::Translations, std::vector<SolitonParams>{{1.0, 0.0, 1}});
  if (mt.failure) return {false, "tracking failed: " + *mt.failure};
  std::vector<double> t, x;
  for (const auto& f : mt.frames) t.push_back(f.t), x.push_back(f.center[0]);
  const double v = slope(t, x);
  return {worst <= 1e-6 && std::abs(v - 1.0) <= 1e-4,
          fmt("max min-over-shift L2 distance %.2e (<= 1e-6); center slope %.8f (1 +- 1e-4)", worst, v)};
}

double soliton_error(const GridSpec& g, double T) {
  const auto tr = evolve(sample_soliton({1.0, 0.0, 1}, Exponent(2), g), T, SolverOptions{.watch_boundary = false});
  return l2_distance(tr.frames.back(), sample_soliton({1.0, T, 1}, Exponent(2), g));
}

Verdict order() {
  const double e1 = soliton_error(GridSpec(128, 1024, 1e-2), 20.0);
  const double e2 = soliton_error(GridSpec(128, 1024, 5e-3), 20.0);
  const double r_dt = e1 / e2;
  const double n1 = soliton_error(GridSpec(64, 64, 1e-3), 1.0);
  const double n2 = soliton_error(GridSpec(64, 128, 1e-3), 1.0);
  const double r_n = n1 / n2;
  return {r_dt >= 12.0 && r_dt <= 20.0 && r_n >= 100.0,
          fmt("dt 1e-2 -> 5e-3 error ratio %.2f (in [12, 20]); N 64 -> 128 error drop %.3g (>= 100)", r_dt, r_n)};
}

struct CollisionOutcome {
  double speed_change = 0.0;
  double eps_l2 = 0.0;
};

// c = 4 at -80 overtakes c = 1 at -40 on L = 256.
CollisionOutcome collide(int p, double dt, double threshold) {
  const GridSpec g(256, 2048, dt);
  const Exponent e(p);
  const std::vector<SolitonParams> s{{4.0, -80.0, 1}, {1.0, -40.0, 1}};
  SolverOptions o{.boundary_threshold = threshold, .frame_stride = static_cast<std::size_t>(std::lround(30.0 / dt))};
  const auto tr = evolve(superpose(s, e, g).field, 30.0, o);
  tr.rethrow();
  const auto pre = decompose_full(tr.frames.front(), s);
  const Field& last = tr.frames.back();
  const auto peaks = locate_peaks(last, 2, 5.0);
  const auto post = decompose_full(last, std::vector<SolitonParams>{{1.0, peaks[0], 1}, {4.0, peaks[1], 1}});
  // pre is ordered by position (fast first), post by position after overtaking (slow first)
  return {std::max(std::abs(post.c[0] - pre.c[1]), std::abs(post.c[1] - pre.c[0])), post.eps_l2};
}

Verdict collisions() {
  const auto kdv = collide(2, 1e-3, 1e-8);
  // The quartic collision sheds radiation that reaches the boundary band; the watchdog is loosened.
  const auto quartic = collide(4, 5e-4, 1e-2);
  const bool ok = kdv.speed_change <= 1e-3 && kdv.eps_l2 <= 1e-4 && quartic.eps_l2 >= 10.0 * kdv.eps_l2;
  return {ok, fmt("p=2 speed change %.2e (<= 1e-3), residual %.2e (<= 1e-4); p=4 residual %.3e (%.3g x p=2, >= 10x)",
                  kdv.speed_change, kdv.eps_l2, quartic.eps_l2, quartic.eps_l2 / kdv.eps_l2)};
}

std::string monotonicity_run(int p, double dt, bool& ok) {
  const GridSpec g(256, 2048, dt);
  const std::vector<SolitonParams> s{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  const auto tr = evolve(superpose(s, Exponent(p), g).field, 20.0,
                         SolverOptions{.frame_stride = static_cast<std::size_t>(std::lround(0.1 / dt))});
  tr.rethrow();
  const auto mt = track(tr, ModulationMode::Full, s);
  if (mt.failure) {
    ok = false;
    return fmt("p=%d tracking failed", p);
  }
  const auto rep = monotonicity_report(tr, mt.midpoints(), 0.1, 1.0, 1.0);
  ok = ok && rep.ok() && std::isfinite(rep.k1);
  return fmt("p=%d: %zu violations, raw deficit %.2e, floors %.1e/%.1e, K1 %.3g", p, rep.violations.size(),
             rep.max_raw_deficit, rep.mass_floor, rep.energy_floor, rep.k1);
}

Verdict monotonicity() {
  bool ok = true;
  const std::string a = monotonicity_run(2, 1e-3, ok);
  const std::string b = monotonicity_run(3, 5e-4, ok);
  return {ok, a + "; " + b};
}

Verdict monotone_functional_bound() {
  const auto& tr = soliton_run();
  const double kappa = default_kappa(0.5, 0.25);
  const double x0s[] = {-40.0, -20.0, 0.0};
  const auto fit = fit_monotone_bound(tr, x0s, kappa, 0.25, [](double t) { return 0.5 * t; });
  return {std::isfinite(fit.c1) && fit.worst_margin <= 0.0 && fit.pairs > 0,
          fmt("kappa %.4f, one C1 = %.3e covers %zu pairs, worst margin %.2e", kappa, fit.c1, fit.pairs,
              fit.worst_margin)};
}

Verdict nondispersion() {
  const GridSpec g(256, 2048, 1e-3);
  const std::vector<SolitonParams> s{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  const auto two = evolve(superpose(s, Exponent(2), g).field, 20.0, SolverOptions{.frame_stride = 100});
  two.rethrow();
  const double cert = nondispersion_profile(two, 0.5, 30.0);

  // Negative Gaussian with the same mass (54): no bound states, so it all disperses.
  const GridSpec wide(512, 2048, 1e-3);
  const double w = 10.0, mass0 = 54.0;
  const double A = std::sqrt(mass0 / (w * std::sqrt(std::numbers::pi / 2.0)));
  std::vector<double> v(wide.points());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = -A * std::exp(-std::pow(wide.x(j) / w, 2));
  const Field gauss(wide, Exponent(2), 0.0, v);
  const auto tr = evolve(gauss, 20.0, SolverOptions{.watch_boundary = false, .frame_stride = 1000});
  const double tail = tail_mass(tr.frames.back(), 0.5 * 20.0 - 30.0);
  return {cert <= 1e-6 && tail > 1e-2,
          fmt("2-soliton certificate %.2e (<= 1e-6); Gaussian (mass %.2f) tail at T=20 %.3g (> 1e-2)", cert,
              mass(gauss), tail)};
}

Verdict decay_fits() {
  double worst = 0.0;
  const double center[] = {0.0};
  for (int p = 2; p <= 4; ++p)
    for (double c : {1.0, 4.0}) {
      const Field q = sample_soliton({c, 0.0, 1}, Exponent(p), GridSpec(128, 1024, 1e-3));
      for (Side side : {Side::Left, Side::Right})
        worst = std::max(worst, std::abs(fit_spatial_decay(q, 0, center, side).rate / std::sqrt(c) - 1.0));
    }

  const double L = 256.0, gap = 10.0;
  const GridSpec g(L, 2048, 1e-3);
  const std::vector<SolitonParams> s{{1.0, -gap / 2 - L / 4, 1}, {4.0, gap / 2 - L / 4, 1}};
  const auto u0 = superpose(s, Exponent(2), g, SuperposeOptions{.min_separation = 0.99 * gap}).field;
  const auto tr = evolve(u0, 20.0, SolverOptions{.boundary_threshold = 1e-2, .frame_stride = 250});
  tr.rethrow();
  const Field& last = tr.frames.back();
  const auto peaks = locate_peaks(last, 2, 5.0);
  const auto fin = decompose_full(last, std::vector<SolitonParams>{{1.0, peaks[0], 1}, {4.0, peaks[1], 1}});
  const auto series = convergence_series(tr, fin.solitons(), last.time());
  const auto fit = fit_convergence_decay(series);
  return {worst <= 0.02 && fit.rate > 0.0 && fit.residual < 0.1,
          fmt("spatial rate worst relative error %.2e (<= 2%%); temporal rate %.4f (> 0) over [%.2f, %.2f], "
              "log-residual %.3f (< 0.1)",
              worst, fit.rate, fit.window.first, fit.window.second, fit.residual)};
}

Verdict coercivity() {
  const GridSpec g(128, 1024, 1e-3);
  const std::vector<ProfileTerm> terms{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  CoercivityOptions o;
  o.samples = 200;
  const auto fit = coercivity_sample(g, Exponent(2), terms, Partition(1.0, {0.0}), o);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> n;
  double gap = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double c1 = 0.5 + U(rng), c2 = c1 + 0.5 + 2.0 * U(rng);
    const double x1 = -30.0 + 10.0 * U(rng), x2 = 15.0 + 10.0 * U(rng);
    std::vector<double> v(g.points());
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double x = g.x(j);
      v[j] = soliton_profile(Exponent(2), c1, x - x1) + soliton_profile(Exponent(2), c2, x - x2) +
             0.05 * n(rng) * std::exp(-x * x / 400.0);
    }
    const std::vector<ProfileTerm> q{{c1, x1, 1}, {c2, x2, 1}};
    const auto F = weinstein_F(Field(g, Exponent(2), 0.0, v), q, Partition(c1, {0.5 * (x1 + x2)}), 0.1 * c1, 1.0);
    gap = std::max(gap, F.relative_gap());
  }
  const bool ok = fit.lambda0 && *fit.lambda0 <= 100.0 && gap <= 1e-10;
  return {ok, fmt("%zu samples: lambda0 = %s (<= 100; quadratic-form constant %.3g, min H/|eps|^2 %.3f); "
                  "Abel relative gap %.2e over 100 fields (<= 1e-10)",
                  fit.samples.size(), fit.lambda0 ? fmt("%.4g", *fit.lambda0).c_str() : "none",
                  fit.lambda_quadratic, fit.min_h_ratio, gap)};
}

Verdict scattering() {
  std::vector<std::string> notes;
  bool ok = true;
  auto check = [&](bool cond, const std::string& what) {
    ok = ok && cond;
    if (!cond) notes.push_back(what);
  };
  const GridSpec g(64, 512, 1e-3);
  check(schrodinger_spectrum(Field::zeros(g, Exponent(2))).eigenvalues.empty() &&
            zs_spectrum(Field::zeros(g, Exponent(3))).eigenvalues.empty(),
        "zero data not empty");

  double anchor = 0.0;
  for (double c : {1.0, 2.0}) {
    const auto k = schrodinger_spectrum(sample_soliton({c, 0.0, 1}, Exponent(2), g));
    const auto z = zs_spectrum(sample_soliton({c, 0.0, 1}, Exponent(3), g));
    check(k.predicted_solitons.size() == 1 && z.predicted_solitons.size() == 1, "anchor count");
    if (k.predicted_solitons.size() == 1) anchor = std::max(anchor, std::abs(k.predicted_solitons[0].c - c));
    if (z.predicted_solitons.size() == 1) anchor = std::max(anchor, std::abs(z.predicted_solitons[0].c - c));
  }
  check(anchor <= 1e-3, "anchor error");

  const auto two = schrodinger_spectrum(
      superpose(std::vector<SolitonParams>{{1.0, -30.0, 1}, {4.0, 20.0, 1}}, Exponent(2), GridSpec(128, 512, 1e-3))
          .field);
  double pair = std::numeric_limits<double>::infinity();
  if (two.predicted_solitons.size() == 2)
    pair = std::max(std::abs(two.predicted_solitons[0].c - 1.0), std::abs(two.predicted_solitons[1].c - 4.0));
  check(pair <= 1e-2, "2-soliton speeds");

  const auto br = zs_spectrum(sample_breather({1.0, 1.0, 0.0, 0.0}, g));
  const bool one_pair = br.eigenvalues.size() == 2 && br.predicted_breathers.size() == 1 && br.predicted_solitons.empty();
  check(one_pair && genericity_check(br).generic, "breather pair");

  SpectrumResult coincide;
  coincide.predicted_solitons = {{1.0, 0.0, 1}};
  coincide.predicted_breathers = {{1.0, 2.0, 0.0, 0.0}};
  check(!genericity_check(coincide).generic, "coincidence accepted");

  std::string extra;
  for (const auto& s : notes) extra += " [" + s + "]";
  return {ok, fmt("zero -> empty; anchor speed error %.2e (<= 1e-3); pair speed error %.2e (<= 1e-2); breather "
                  "%zu eigenvalues, generic %d; coincidence flagged",
                  anchor, pair, br.eigenvalues.size(), int(genericity_check(br).generic)) +
              extra};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--strict") == 0) strict = true;

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"conservation", conservation},
      {"traveling-wave exactness", traveling_wave},
      {"order verification", order},
      {"elastic vs inelastic collision", collisions},
      {"monotonicity suite", monotonicity},
      {"monotone functional bound", monotone_functional_bound},
      {"non-dispersion certificate", nondispersion},
      {"decay fits", decay_fits},
      {"coercivity and Abel identity", coercivity},
      {"scattering", scattering},
  };

  int failed = 0, broken = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
      ++broken;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::printf("%s %zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return broken > 0 || (strict && failed > 0) ? 1 : 0;
}
