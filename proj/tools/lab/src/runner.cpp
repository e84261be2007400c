#include "gkdv/lab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include <json.hpp>

#include "gkdv/diagnostics.hpp"
#include "gkdv/lab/errors.hpp"
#include "gkdv/lab/initial.hpp"
#include "gkdv/lab/output.hpp"
#include "gkdv/lab/snapshot.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/solver.hpp"

namespace gkdv::lab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json solitons_json(std::span<const SolitonParams> s) {
  json out = json::array();
  for (const auto& x : s) out.push_back({{"c", x.c}, {"x0", x.x0}, {"sign", x.sign}});
  return out;
}

double relative_drift(const std::vector<double>& v) {
  double d = 0.0;
  const double ref = std::max(std::abs(v.front()), 1e-300);
  for (double x : v) d = std::max(d, std::abs(x - v.front()) / ref);
  return d;
}

Trajectory head(const Trajectory& tr, std::size_t n) {
  Trajectory out;
  out.frames.assign(tr.frames.begin(), tr.frames.begin() + static_cast<long>(n));
  out.records.assign(tr.records.begin(), tr.records.begin() + static_cast<long>(std::min(n, tr.records.size())));
  return out;
}

class Session {
 public:
  Session(const ExperimentConfig& c, const RunOptions& o) : c_(c), opts_(o) {}

  RunResult run();

 private:
  void note(const std::string& msg) {
    if (opts_.log) *opts_.log << msg << '\n';
  }
  fs::path file(const std::string& name) {
    const fs::path p = c_.output_dir / name;
    result_.artifacts.push_back(p);
    return p;
  }
  void csv(const std::string& stem, const std::vector<double>& t, const std::vector<Series>& cols, bool log_y) {
    write_csv(file(stem + ".csv"), c_.hash, t, cols);
    if (c_.plots) write_svg(file(stem + ".svg"), stem, t, cols, log_y);
  }

  const ModulationTrack& full_track();
  void conservation();
  void diagnose(const Diagnostic& d);
  void write_manifest();

  const ExperimentConfig& c_;
  RunOptions opts_;
  RunResult result_;
  Trajectory traj_;
  std::vector<SolitonParams> guesses_;
  std::optional<ModulationTrack> track_;
  json summary_;
};

const ModulationTrack& Session::full_track() {
  if (!track_) track_ = track(traj_, ModulationMode::Full, guesses_);
  return *track_;
}

void Session::conservation() {
  std::vector<double> t, m, e, h2, b;
  for (std::size_t k = 0; k < traj_.records.size(); ++k) {
    t.push_back(traj_.frames[k].time());
    m.push_back(traj_.records[k].mass);
    e.push_back(traj_.records[k].energy);
    b.push_back(traj_.records[k].boundary_amplitude);
    if (traj_.records[k].h2_invariant) h2.push_back(*traj_.records[k].h2_invariant);
  }
  std::vector<Series> cols{{"mass", m}, {"energy", e}};
  if (h2.size() == t.size()) cols.push_back({"h2_invariant", h2});
  cols.push_back({"boundary_amplitude", b});
  write_csv(file("conservation.csv"), c_.hash, t, cols);
  json s{{"mass_drift", relative_drift(m)}, {"energy_drift", relative_drift(e)}};
  if (h2.size() == t.size()) s["h2_drift"] = relative_drift(h2);
  summary_["conservation"] = s;
  if (c_.plots) {
    std::vector<Series> drift;
    for (const auto& col : cols) {
      if (col.name == "boundary_amplitude") continue;
      Series d{col.name, {}};
      for (double v : col.values) d.values.push_back(std::abs(v - col.values.front()) / std::abs(col.values.front()));
      drift.push_back(std::move(d));
    }
    write_svg(file("conservation.svg"), "relative drift", t, drift, true);
  }
}

void Session::diagnose(const Diagnostic& d) {
  const std::string name = diagnostic_name(d);
  const auto times = traj_.times();
  const Field& last = traj_.frames.back();

  if (std::holds_alternative<ConservationDiag>(d)) return;  // always written

  if (const auto* nd = std::get_if<NondispersionDiag>(&d)) {
    std::vector<double> tail;
    for (const auto& f : traj_.frames) tail.push_back(tail_mass(f, nd->rho * f.time() - nd->R));
    csv(name, times, {{"tail_mass", tail}}, true);
    summary_[name] = {{"rho", nd->rho}, {"R", nd->R}, {"profile", nondispersion_profile(traj_, nd->rho, nd->R)}};
    return;
  }

  if (const auto* md = std::get_if<ModulationDiag>(&d)) {
    TrackOptions to;
    to.nu = md->nu;
    const ModulationTrack tr = md->mode == ModulationMode::Full && !md->nu ? full_track()
                                                                            : track(traj_, md->mode, guesses_, to);
    std::vector<double> t, l2, h1;
    std::vector<Series> per(2 * guesses_.size());
    for (std::size_t i = 0; i < guesses_.size(); ++i) {
      per[2 * i].name = "c_" + std::to_string(i + 1);
      per[2 * i + 1].name = "x_" + std::to_string(i + 1);
    }
    for (const auto& f : tr.frames) {
      t.push_back(f.t);
      l2.push_back(f.eps_l2);
      h1.push_back(f.eps_h1);
      for (std::size_t i = 0; i < f.c.size(); ++i) {
        per[2 * i].values.push_back(f.c[i]);
        per[2 * i + 1].values.push_back(f.center[i]);
      }
    }
    std::vector<Series> cols{{"eps_l2", l2}, {"eps_h1", h1}};
    cols.insert(cols.end(), per.begin(), per.end());
    if (!t.empty()) csv(name, t, cols, false);
    json s{{"mode", md->mode == ModulationMode::Full ? "full" : "translations"},
           {"frames", tr.frames.size()},
           {"velocity_constant", tr.velocity_constant},
           {"separation_rate", tr.separation_rate}};
    if (!tr.frames.empty()) {
      s["initial"] = solitons_json(tr.frames.front().solitons());
      s["final"] = solitons_json(tr.frames.back().solitons());
    }
    if (tr.failure) {
      s["failure"] = *tr.failure;
      summary_[name] = s;
      throw NoConvergenceError(*tr.failure);
    }
    summary_[name] = s;
    return;
  }

  if (const auto* mo = std::get_if<MonotonicityDiag>(&d)) {
    const auto& tr = full_track();
    const Trajectory part = head(traj_, tr.frames.size());
    const auto mids = tr.midpoints();
    const MonotonicityReport rep = monotonicity_report(part, mids, mo->kappa, mo->nu, mo->c1);
    std::vector<Series> cols;
    for (const auto& s : rep.series) {
      cols.push_back({"M_" + std::to_string(s.index), s.mass});
      cols.push_back({"E_" + std::to_string(s.index), s.energy});
    }
    csv(name, part.times(), cols, false);
    summary_[name] = {{"K1", rep.k1},
                      {"K1_early", rep.k1_early},
                      {"rate", rep.rate},
                      {"mass_floor", rep.mass_floor},
                      {"energy_floor", rep.energy_floor},
                      {"max_raw_deficit", rep.max_raw_deficit},
                      {"violations", rep.violations.size()},
                      {"ok", rep.ok()}};
    if (tr.failure) throw NoConvergenceError("track ended early: " + *tr.failure);
    return;
  }

  if (const auto* mf = std::get_if<MonotoneFunctionalDiag>(&d)) {
    const double kappa = mf->kappa.value_or(default_kappa(mf->mtilde_slope, mf->f_slope));
    const double slope = mf->mtilde_slope;
    const auto mtilde = [slope](double t) { return slope * t; };
    const double t0 = traj_.frames.front().time();
    std::vector<Series> cols;
    for (double x0 : mf->x0s) {
      Series s{"I_x0=" + std::to_string(x0), {}};
      for (const auto& tv : monotone_functional(traj_, t0, x0, kappa, mf->f_slope, mtilde)) s.values.push_back(tv.value);
      cols.push_back(std::move(s));
    }
    csv(name, times, cols, true);
    const auto fit = fit_monotone_bound(traj_, mf->x0s, kappa, mf->f_slope, mtilde);
    summary_[name] = {{"kappa", kappa}, {"C1", fit.c1}, {"pairs", fit.pairs}, {"worst_margin", fit.worst_margin}};
    return;
  }

  if (const auto* cd = std::get_if<ConvergenceDiag>(&d)) {
    std::vector<SolitonParams> start = guesses_;
    const auto& tr = full_track();
    if (!tr.failure && !tr.frames.empty()) start = tr.frames.back().solitons();
    const ModulationFrame fin = decompose_full(last, start);
    const auto asym = fin.solitons();
    const auto series = convergence_series(traj_, asym, last.time(), cd->behind);
    std::vector<double> dist;
    for (const auto& tv : series) dist.push_back(tv.value);
    csv(name, times, {{"distance", dist}}, true);
    const DecayFit fit = fit_convergence_decay(series);
    summary_[name] = {{"theta", fit.rate},
                      {"amplitude", fit.amplitude},
                      {"log_residual", fit.residual},
                      {"window", {fit.window.first, fit.window.second}},
                      {"asymptotic", solitons_json(asym)}};
    return;
  }

  if (const auto* sd = std::get_if<SpatialDecayDiag>(&d)) {
    const auto centers = locate_peaks(last, std::max<std::size_t>(1, guesses_.size()),
                                      5.0 / std::sqrt(std::max(1e-12, guesses_.empty() ? 1.0 : guesses_.front().c)));
    const DecayFit left = fit_spatial_decay(last, sd->order, centers, Side::Left);
    const DecayFit right = fit_spatial_decay(last, sd->order, centers, Side::Right);
    summary_[name] = {{"order", sd->order},
                      {"left_rate", left.rate},
                      {"right_rate", right.rate},
                      {"left_residual", left.residual},
                      {"right_residual", right.residual}};
    return;
  }

  if (std::holds_alternative<ScatteringDiag>(d)) {
    const Field& u0 = traj_.frames.front();
    const SpectrumResult sp = c_.p == 3 ? zs_spectrum(u0) : schrodinger_spectrum(u0);
    json ev = json::array(), br = json::array();
    for (const auto& z : sp.eigenvalues) ev.push_back({z.real(), z.imag()});
    for (const auto& b : sp.predicted_breathers) br.push_back({{"alpha", b.alpha}, {"beta", b.beta}});
    summary_[name] = {{"operator", c_.p == 3 ? "zakharov-shabat" : "schroedinger"},
                      {"eigenvalues", ev},
                      {"solitons", solitons_json(sp.predicted_solitons)},
                      {"breathers", br},
                      {"generic", sp.generic},
                      {"reason", sp.reason},
                      {"calibration",
                       {{"potential_scale", sp.calibration.potential_scale},
                        {"eigenvalue_factor", sp.calibration.eigenvalue_factor},
                        {"anchor_error", sp.calibration.anchor_error}}},
                      {"discarded_box_modes", sp.discarded_box_modes},
                      {"max_refinement_shift", sp.max_refinement_shift}};
    return;
  }

  if (const auto* co = std::get_if<CoercivityDiag>(&d)) {
    const Field& u0 = traj_.frames.front();
    std::vector<ProfileTerm> terms;
    std::vector<double> mids;
    for (const auto& g : guesses_) terms.push_back({g.c, g.x0, g.sign});
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) mids.push_back(0.5 * (terms[i].center + terms[i + 1].center));
    const Partition part(co->nu, mids);
    CoercivityOptions o;
    o.samples = co->samples;
    o.seed = co->seed;
    o.lambda_cap = co->lambda_cap;
    const CoercivityFit fit = coercivity_sample(u0.grid(), u0.exponent(), terms, part, o);
    double cmin = terms.front().c;
    for (const auto& t : terms) cmin = std::min(cmin, t.c);
    const WeinsteinF F = weinstein_F(u0, terms, part, 0.1 * cmin, 1.0);
    summary_[name] = {{"lambda0", fit.lambda0 ? json(*fit.lambda0) : json(nullptr)},
                      {"lambda_quadratic", fit.lambda_quadratic},
                      {"min_h_ratio", fit.min_h_ratio},
                      {"samples", fit.samples.size()},
                      {"F_direct", F.direct},
                      {"F_abel", F.abel},
                      {"F_relative_gap", F.relative_gap()}};
    return;
  }

  if (std::holds_alternative<CollisionDiag>(d)) {
    const ModulationFrame pre = decompose_full(traj_.frames.front(), guesses_);
    const std::size_t n = guesses_.size();
    double cmin = pre.c.front();
    for (double c : pre.c) cmin = std::min(cmin, c);
    // After the interaction the solitons are ordered by speed.
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return pre.c[a] < pre.c[b]; });
    const auto peaks = locate_peaks(last, n, 5.0 / std::sqrt(cmin));
    std::vector<SolitonParams> post_guess;
    for (std::size_t k = 0; k < n; ++k) post_guess.push_back({pre.c[rank[k]], peaks[k], pre.sign[rank[k]]});
    const ModulationFrame post = decompose_full(last, post_guess);
    const double elapsed = last.time() - pre.t;
    json table = json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = rank[k];
      const double free_flight = pre.center[i] + pre.c[i] * elapsed;
      const double shift = wrap_distance(post.center[k] - free_flight, last.grid().length());
      worst = std::max(worst, std::abs(post.c[k] - pre.c[i]));
      table.push_back({{"c_pre", pre.c[i]},
                       {"c_post", post.c[k]},
                       {"x_pre", pre.center[i]},
                       {"x_post", post.center[k]},
                       {"phase_shift", shift}});
    }
    summary_[name] = {{"speeds", table},
                      {"max_speed_change", worst},
                      {"eps_l2_pre", pre.eps_l2},
                      {"eps_l2_post", post.eps_l2},
                      {"eps_h1_post", post.eps_h1}};
    return;
  }
}

void Session::write_manifest() {
  const fs::path path = c_.output_dir / "MANIFEST";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "config_hash " << c_.hash << '\n';
  if (result_.truncation) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", result_.truncation->time);
    out << "status truncated " << (result_.truncation->kind == TruncationKind::Blowup ? "blowup" : "domain") << " t="
        << buf << ": " << result_.truncation->message << '\n';
  } else {
    out << "status complete\n";
  }
  for (const auto& e : result_.diagnostic_errors) out << "diagnostic_error " << e << '\n';
  for (const auto& p : result_.artifacts) {
    std::error_code ec;
    const auto size = fs::file_size(p, ec);
    out << "file " << fs::relative(p, c_.output_dir).generic_string() << ' ' << (ec ? 0 : size) << '\n';
  }
}

RunResult Session::run() {
  fs::create_directories(c_.output_dir / "snapshots");
  {
    std::ofstream cfg(file("config.json"), std::ios::trunc);
    cfg << json::parse(c_.canonical).dump(2) << '\n';
    if (!cfg) throw IoError("cannot write config.json");
  }

  const Field u0 = initial_field(c_);
  guesses_ = soliton_guesses(c_, u0);
  note("evolving to T = " + std::to_string(c_.T));
  SpectralSolver solver(c_.grid(), Exponent(c_.p), c_.solver);
  traj_ = solver.evolve(u0, c_.T);
  result_.truncation = traj_.truncation;

  save_snapshot(traj_.frames.front(), file("snapshots/initial.gkdv"));
  save_snapshot(traj_.frames.back(), file("snapshots/final.gkdv"));
  if (c_.snapshots == SnapshotPolicy::Frames)
    for (std::size_t k = 0; k < traj_.frames.size(); ++k) {
      char name[48];
      std::snprintf(name, sizeof name, "snapshots/frame_%06zu.gkdv", k);
      save_snapshot(traj_.frames[k], file(name));
    }

  summary_["config_hash"] = c_.hash;
  summary_["frames"] = traj_.frames.size();
  summary_["t_final"] = traj_.frames.back().time();
  summary_["initial_solitons"] = solitons_json(guesses_);
  if (traj_.truncation)
    summary_["truncation"] = {{"kind", traj_.truncation->kind == TruncationKind::Blowup ? "blowup" : "domain"},
                              {"t", traj_.truncation->time},
                              {"message", traj_.truncation->message}};
  conservation();

  if (opts_.diagnostics) {
    json errors = json::object();
    for (const auto& d : c_.diagnostics) {
      const std::string name = diagnostic_name(d);
      note("diagnostic " + name);
      try {
        diagnose(d);
      } catch (const IoError&) {
        throw;
      } catch (const Error& e) {
        errors[name] = e.what();
        result_.diagnostic_errors.push_back(name + ": " + e.what());
      }
    }
    if (!errors.empty()) summary_["diagnostic_errors"] = errors;
  }

  {
    std::ofstream s(file("summary.json"), std::ios::trunc);
    s << summary_.dump(2) << '\n';
    if (!s) throw IoError("cannot write summary.json");
  }
  write_manifest();

  if (traj_.truncation)
    result_.code = traj_.truncation->kind == TruncationKind::Blowup ? ExitCode::Blowup : ExitCode::Domain;
  else if (!result_.diagnostic_errors.empty())
    result_.code = ExitCode::Diagnostic;
  return result_;
}

}  // namespace

int to_int(ExitCode code) { return static_cast<int>(code); }

RunResult run_experiment(const ExperimentConfig& c, const RunOptions& opts) {
  Session s(c, opts);
  try {
    return s.run();
  } catch (const fs::filesystem_error& e) {
    throw IoError(e.what());
  }
}

std::vector<std::string> scenario_names() { return {"soliton-sanity", "kdv-collision"}; }

std::string scenario_config(const std::string& name) {
  static const std::map<std::string, std::string> table{
      {"soliton-sanity", R"({
  "format_version": 1,
  "p": 2,
  "grid": {"L": 128, "N": 1024, "dt": 0.001},
  "T": 20,
  "frame_stride": 100,
  "initial": {"type": "soliton", "c": 1, "x0": 0},
  "diagnostics": [
    {"kind": "conservation"},
    {"kind": "modulation", "mode": "translations"},
    {"kind": "nondispersion", "rho": 0.5, "R": 30},
    {"kind": "spatial_decay"}
  ],
  "output_dir": "soliton-sanity"
})"},
      {"kdv-collision", R"({
  "format_version": 1,
  "p": 2,
  "grid": {"L": 256, "N": 2048, "dt": 0.001},
  "T": 30,
  "frame_stride": 1000,
  "initial": {"type": "superposition", "solitons": [{"c": 4, "x0": -80}, {"c": 1, "x0": -40}]},
  "diagnostics": [
    {"kind": "conservation"},
    {"kind": "collision"}
  ],
  "output_dir": "kdv-collision"
})"},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown scenario '" + name + "'");
  return it->second;
}

}  // namespace gkdv::lab
