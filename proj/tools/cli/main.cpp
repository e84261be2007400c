// gkdv-lab: experiment driver. Exit codes: 0 ok, 1 I/O or other, 2 config, 3 blow-up, 4 domain, 5 diagnostic.
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gkdv/diagnostics.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/lab/config.hpp"
#include "gkdv/lab/errors.hpp"
#include "gkdv/lab/initial.hpp"
#include "gkdv/lab/runner.hpp"
#include "gkdv/lab/snapshot.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gkdv;

namespace {

int report(const lab::RunResult& r, const fs::path& dir) {
  std::cout << "artifacts in " << dir.string() << '\n';
  if (r.truncation) std::cerr << "truncated at t = " << r.truncation->time << ": " << r.truncation->message << '\n';
  for (const auto& e : r.diagnostic_errors) std::cerr << "diagnostic failed: " << e << '\n';
  return lab::to_int(r.code);
}

lab::ExperimentConfig load(const std::string& config, const std::string& scenario, const std::string& out) {
  lab::ExperimentConfig c = scenario.empty() ? lab::load_config(config) : lab::parse_config(lab::scenario_config(scenario));
  if (!out.empty()) c.output_dir = out;
  return c;
}

std::vector<SolitonParams> guesses_for(const Field& u, std::size_t count) {
  lab::ExperimentConfig c;
  c.p = u.exponent().value();
  c.initial = FromFile{};
  c.soliton_count = count;
  return lab::soliton_guesses(c, u);
}

json frame_json(const ModulationFrame& f) {
  json s = json::array();
  for (std::size_t i = 0; i < f.c.size(); ++i) s.push_back({{"c", f.c[i]}, {"x0", f.center[i]}, {"sign", f.sign[i]}});
  return {{"t", f.t}, {"solitons", s}, {"eps_l2", f.eps_l2}, {"eps_h1", f.eps_h1}, {"iterations", f.iterations}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gKdV numerical laboratory"};
  app.require_subcommand(1);

  std::string config, scenario, out;
  auto* run = app.add_subcommand("run", "Evolve a configured experiment and run its diagnostics");
  run->add_option("config", config, "Config file (JSON, format_version 1)");
  run->add_option("--scenario", scenario, "Canned scenario instead of a config file");
  run->add_option("--out", out, "Override output_dir");
  auto* list = run->add_flag("--list", "List canned scenarios");

  auto* simulate = app.add_subcommand("simulate", "Evolve only: snapshots and conservation CSV");
  simulate->add_option("config", config, "Config file")->required();
  simulate->add_option("--out", out, "Override output_dir");

  std::vector<std::string> snaps;
  double rho = 0.5, R = 30.0, dt = 1e-3;
  auto* diagnose = app.add_subcommand("diagnose", "Conserved quantities and tail masses of stored snapshots");
  diagnose->add_option("snapshots", snaps, "Snapshot files")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--rho", rho, "Tail cut speed");
  diagnose->add_option("--R", R, "Tail cut offset");

  std::string snap;
  std::size_t count = 1;
  bool translations = false;
  auto* modulate = app.add_subcommand("modulate", "Decompose a snapshot into solitons plus remainder");
  modulate->add_option("snapshot", snap, "Snapshot file")->required()->check(CLI::ExistingFile);
  modulate->add_option("--count", count, "Number of solitons")->check(CLI::PositiveNumber);
  modulate->add_flag("--translations", translations, "Fit centers only, speeds from peak heights");

  auto* scatter = app.add_subcommand("scatter", "Discrete scattering spectrum of a snapshot (p = 2 or 3)");
  scatter->add_option("snapshot", snap, "Snapshot file")->required()->check(CLI::ExistingFile);

  int p = 2;
  std::vector<double> speeds{1.0, 4.0};
  double length = 256.0, T = 30.0;
  std::size_t points = 2048;
  auto* collide = app.add_subcommand("collide", "Two-soliton overtaking collision with a pre/post speed table");
  collide->add_option("--p", p, "Exponent")->check(CLI::Range(2, 5));
  collide->add_option("--speeds", speeds, "Slow and fast speeds")->expected(2);
  collide->add_option("--L", length, "Domain length");
  collide->add_option("--N", points, "Grid points");
  collide->add_option("--dt", dt, "Time step");
  collide->add_option("--T", T, "Final time");
  collide->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (*list) {
        for (const auto& n : lab::scenario_names()) std::cout << n << '\n';
        return 0;
      }
      if (config.empty() == scenario.empty()) {
        std::cerr << "give either a config file or --scenario\n";
        return lab::to_int(lab::ExitCode::Config);
      }
      const auto c = load(config, scenario, out);
      return report(lab::run_experiment(c, {true, &std::cerr}), c.output_dir);
    }
    if (simulate->parsed()) {
      const auto c = load(config, "", out);
      return report(lab::run_experiment(c, {false, &std::cerr}), c.output_dir);
    }
    if (diagnose->parsed()) {
      Trajectory tr;
      for (const auto& s : snaps) tr.frames.push_back(lab::load_snapshot(s, dt));
      std::sort(tr.frames.begin(), tr.frames.end(), [](const Field& a, const Field& b) { return a.time() < b.time(); });
      json rows = json::array();
      for (const auto& f : tr.frames) {
        json r{{"t", f.time()}, {"mass", mass(f)}, {"energy", energy(f)}, {"h1_norm", sobolev_norm(f, 1.0)},
               {"boundary_amplitude", boundary_amplitude(f)}, {"tail_mass", tail_mass(f, rho * f.time() - R)}};
        if (f.exponent().value() == 2) r["h2_invariant"] = h2_invariant(f);
        rows.push_back(r);
      }
      std::cout << json{{"frames", rows}, {"nondispersion_profile", nondispersion_profile(tr, rho, R)}}.dump(2) << '\n';
      return 0;
    }
    if (modulate->parsed()) {
      const Field u = lab::load_snapshot(snap);
      const auto g = guesses_for(u, count);
      if (translations) {
        std::vector<double> c, x;
        std::vector<int> s;
        for (const auto& q : g) {
          c.push_back(q.c);
          x.push_back(q.x0);
          s.push_back(q.sign);
        }
        std::cout << frame_json(decompose_translations(u, c, x, s)).dump(2) << '\n';
      } else {
        std::cout << frame_json(decompose_full(u, g)).dump(2) << '\n';
      }
      return 0;
    }
    if (scatter->parsed()) {
      const Field u = lab::load_snapshot(snap);
      const int pv = u.exponent().value();
      if (pv != 2 && pv != 3) {
        std::cerr << "scattering needs p = 2 or p = 3\n";
        return lab::to_int(lab::ExitCode::Config);
      }
      const SpectrumResult sp = pv == 3 ? zs_spectrum(u) : schrodinger_spectrum(u);
      json ev = json::array(), sol = json::array(), br = json::array();
      for (const auto& z : sp.eigenvalues) ev.push_back({z.real(), z.imag()});
      for (const auto& s : sp.predicted_solitons) sol.push_back(s.c);
      for (const auto& b : sp.predicted_breathers) br.push_back({{"alpha", b.alpha}, {"beta", b.beta}});
      std::cout << json{{"eigenvalues", ev}, {"soliton_speeds", sol}, {"breathers", br},
                        {"generic", genericity_check(sp).generic}, {"reason", genericity_check(sp).reason}}
                       .dump(2)
                << '\n';
      return 0;
    }
    if (collide->parsed()) {
      const double slow = std::min(speeds[0], speeds[1]), fast = std::max(speeds[0], speeds[1]);
      json cfg = json::parse(lab::scenario_config("kdv-collision"));
      cfg["p"] = p;
      cfg["grid"] = {{"L", length}, {"N", points}, {"dt", dt}};
      cfg["T"] = T;
      cfg["frame_stride"] = std::max<long>(1, std::lround(1.0 / dt));
      cfg["initial"]["solitons"] = {{{"c", fast}, {"x0", -0.3125 * length}}, {{"c", slow}, {"x0", -0.15625 * length}}};
      cfg["output_dir"] = out;
      const auto c = lab::parse_config(cfg.dump());
      return report(lab::run_experiment(c, {true, &std::cerr}), c.output_dir);
    }
  } catch (const lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lab::to_int(lab::ExitCode::Config);
  } catch (const BlowupError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return lab::to_int(lab::ExitCode::Blowup);
  } catch (const DomainError& e) {
    std::cerr << "domain: " << e.what() << '\n';
    return lab::to_int(lab::ExitCode::Domain);
  } catch (const lab::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return lab::to_int(lab::ExitCode::Io);
  } catch (const lab::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return lab::to_int(lab::ExitCode::Io);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lab::to_int(lab::ExitCode::Diagnostic);
  }
  return 0;
}
