#include "gkdv/lab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gkdv/lab/errors.hpp"
#include "gkdv/lab/initial.hpp"
#include "gkdv/scattering.hpp"

namespace gkdv::lab {

namespace {

using nlohmann::json;

// Rejects keys outside `allowed` so typos do not pass silently.
void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T optional_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? required<T>(obj, key, where) : fallback;
}

double positive(double v, const std::string& what) {
  if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(what + " must be positive");
  return v;
}

SolitonParams parse_soliton(const json& j, const std::string& where) {
  check_keys(j, where, {"type", "c", "x0", "sign"});
  return {required<double>(j, "c", where), optional_or<double>(j, "x0", 0.0, where),
          optional_or<int>(j, "sign", 1, where)};
}

LabInitial parse_initial(const json& j, const std::filesystem::path& base) {
  const std::string where = "initial";
  const auto type = required<std::string>(j, "type", where);
  if (type == "soliton") return parse_soliton(j, where);
  if (type == "breather") {
    check_keys(j, where, {"type", "alpha", "beta", "x1", "x2"});
    return BreatherParams{required<double>(j, "alpha", where), required<double>(j, "beta", where),
                          optional_or<double>(j, "x1", 0.0, where), optional_or<double>(j, "x2", 0.0, where)};
  }
  if (type == "superposition") {
    check_keys(j, where, {"type", "solitons", "min_separation"});
    Superposition s;
    const auto& list = j.at("solitons");
    if (!list.is_array() || list.empty()) throw ConfigError("initial.solitons must be a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i)
      s.solitons.push_back(parse_soliton(list[i], "initial.solitons[" + std::to_string(i) + "]"));
    if (j.contains("min_separation"))
      s.min_separation = positive(required<double>(j, "min_separation", where), "initial.min_separation");
    return s;
  }
  if (type == "file") {
    check_keys(j, where, {"type", "path"});
    std::filesystem::path path = required<std::string>(j, "path", where);
    if (path.is_relative() && !base.empty()) path = base / path;
    return FromFile{path};
  }
  if (type == "gaussian") {
    check_keys(j, where, {"type", "amplitude", "width", "center"});
    GaussianData g{required<double>(j, "amplitude", where), required<double>(j, "width", where),
                   optional_or<double>(j, "center", 0.0, where)};
    if (!std::isfinite(g.amplitude) || !std::isfinite(g.center)) throw ConfigError("gaussian parameters must be finite");
    positive(g.width, "initial.width");
    return g;
  }
  throw ConfigError("unknown initial type '" + type + "'");
}

Diagnostic parse_diagnostic(const json& j, std::size_t index) {
  const std::string where = "diagnostics[" + std::to_string(index) + "]";
  const auto kind = required<std::string>(j, "kind", where);
  if (kind == "conservation") {
    check_keys(j, where, {"kind"});
    return ConservationDiag{};
  }
  if (kind == "nondispersion") {
    check_keys(j, where, {"kind", "rho", "R"});
    NondispersionDiag d{optional_or<double>(j, "rho", 0.5, where), optional_or<double>(j, "R", 30.0, where)};
    positive(d.rho, where + ".rho");
    positive(d.R, where + ".R");
    return d;
  }
  if (kind == "modulation") {
    check_keys(j, where, {"kind", "mode", "nu"});
    ModulationDiag d;
    const auto mode = optional_or<std::string>(j, "mode", "full", where);
    if (mode == "translations")
      d.mode = ModulationMode::Translations;
    else if (mode != "full")
      throw ConfigError(where + ".mode must be 'full' or 'translations'");
    if (j.contains("nu")) d.nu = positive(required<double>(j, "nu", where), where + ".nu");
    return d;
  }
  if (kind == "monotonicity") {
    check_keys(j, where, {"kind", "kappa", "nu", "c1"});
    MonotonicityDiag d{optional_or<double>(j, "kappa", 0.1, where), optional_or<double>(j, "nu", 1.0, where),
                       optional_or<double>(j, "c1", 1.0, where)};
    positive(d.nu, where + ".nu");
    positive(d.c1, where + ".c1");
    if (!(d.kappa > 0.0 && d.kappa < 0.25 * d.c1)) throw ConfigError(where + ".kappa must lie in (0, c1/4)");
    return d;
  }
  if (kind == "monotone_functional") {
    check_keys(j, where, {"kind", "mtilde_slope", "f_slope", "x0s", "kappa"});
    MonotoneFunctionalDiag d;
    d.mtilde_slope = optional_or<double>(j, "mtilde_slope", d.mtilde_slope, where);
    d.f_slope = optional_or<double>(j, "f_slope", d.f_slope, where);
    d.x0s = optional_or<std::vector<double>>(j, "x0s", d.x0s, where);
    if (j.contains("kappa")) d.kappa = positive(required<double>(j, "kappa", where), where + ".kappa");
    if (!(d.f_slope < d.mtilde_slope)) throw ConfigError(where + ": f_slope must be below mtilde_slope");
    if (d.x0s.empty()) throw ConfigError(where + ".x0s must not be empty");
    return d;
  }
  if (kind == "convergence") {
    check_keys(j, where, {"kind", "behind"});
    ConvergenceDiag d{optional_or<double>(j, "behind", 5.0, where)};
    if (!(d.behind >= 0.0)) throw ConfigError(where + ".behind must be non-negative");
    return d;
  }
  if (kind == "spatial_decay") {
    check_keys(j, where, {"kind", "order"});
    SpatialDecayDiag d{optional_or<int>(j, "order", 0, where)};
    if (d.order < 0 || d.order > 2) throw ConfigError(where + ".order must be 0, 1 or 2");
    return d;
  }
  if (kind == "scattering") {
    check_keys(j, where, {"kind"});
    return ScatteringDiag{};
  }
  if (kind == "coercivity") {
    check_keys(j, where, {"kind", "samples", "seed", "nu", "lambda_cap"});
    CoercivityDiag d;
    d.samples = optional_or<std::size_t>(j, "samples", d.samples, where);
    d.seed = optional_or<std::uint64_t>(j, "seed", d.seed, where);
    d.nu = positive(optional_or<double>(j, "nu", d.nu, where), where + ".nu");
    d.lambda_cap = positive(optional_or<double>(j, "lambda_cap", d.lambda_cap, where), where + ".lambda_cap");
    if (d.samples == 0) throw ConfigError(where + ".samples must be positive");
    return d;
  }
  if (kind == "collision") {
    check_keys(j, where, {"kind"});
    return CollisionDiag{};
  }
  throw ConfigError("unknown diagnostic kind '" + kind + "'");
}

bool needs_solitons(const Diagnostic& d) {
  return std::holds_alternative<ModulationDiag>(d) || std::holds_alternative<MonotonicityDiag>(d) ||
         std::holds_alternative<ConvergenceDiag>(d) || std::holds_alternative<CoercivityDiag>(d) ||
         std::holds_alternative<CollisionDiag>(d);
}

void validate(const ExperimentConfig& c) {
  try {
    const Exponent p(c.p);
    (void)c.grid();  // grid preconditions
    positive(c.T, "T");
    const double steps = c.T / c.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      throw ConfigError("T must be a whole number of time steps");
    if (c.frame_stride == 0) throw ConfigError("frame_stride must be positive");
    positive(c.solver.blowup_cap, "solver.blowup_cap");
    positive(c.solver.boundary_threshold, "solver.boundary_threshold");
    if (!(c.solver.boundary_margin > 0.0 && c.solver.boundary_margin < 0.5))
      throw ConfigError("solver.boundary_margin must lie in (0, 0.5)");

    const Field u0 = initial_field(c);  // every initial-data precondition
    const auto guesses = soliton_guesses(c, u0);
    for (const auto& d : c.diagnostics) {
      if (needs_solitons(d) && guesses.empty())
        throw ConfigError(diagnostic_name(d) + " needs solitons: set soliton_count or use soliton initial data");
      if (std::holds_alternative<CollisionDiag>(d) && guesses.size() < 2)
        throw ConfigError("collision needs at least two solitons");
      if (std::holds_alternative<ScatteringDiag>(d) && c.p != 2 && c.p != 3)
        throw ConfigError("scattering is defined for p = 2 and p = 3 only");
      if (std::holds_alternative<ScatteringDiag>(d) && 2 * c.points > ScatteringOptions{}.max_points)
        throw ConfigError("scattering needs N <= " + std::to_string(ScatteringOptions{}.max_points / 2));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::string diagnostic_name(const Diagnostic& d) {
  static const char* names[] = {"conservation", "nondispersion", "modulation",     "monotonicity",
                                "monotone_functional", "convergence", "spatial_decay", "scattering",
                                "coercivity", "collision"};
  return names[d.index()];
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  check_keys(doc, "config", {"format_version", "p", "grid", "T", "frame_stride", "initial", "soliton_count",
                             "diagnostics", "solver", "snapshots", "plots", "output_dir"});
  const std::string root = "config";
  const int version = required<int>(doc, "format_version", root);
  if (version != kConfigFormatVersion)
    throw ConfigError("unsupported format_version " + std::to_string(version));

  ExperimentConfig c;
  c.p = required<int>(doc, "p", root);
  const auto& grid = doc.contains("grid") ? doc.at("grid") : throw ConfigError("config is missing 'grid'");
  check_keys(grid, "grid", {"L", "N", "dt"});
  c.length = required<double>(grid, "L", "grid");
  c.points = required<std::size_t>(grid, "N", "grid");
  c.dt = required<double>(grid, "dt", "grid");
  c.T = required<double>(doc, "T", root);
  c.frame_stride = optional_or<std::size_t>(doc, "frame_stride", c.frame_stride, root);
  if (!doc.contains("initial")) throw ConfigError("config is missing 'initial'");
  c.initial = parse_initial(doc.at("initial"), base_dir);
  if (doc.contains("soliton_count")) c.soliton_count = required<std::size_t>(doc, "soliton_count", root);

  if (doc.contains("diagnostics")) {
    const auto& list = doc.at("diagnostics");
    if (!list.is_array()) throw ConfigError("diagnostics must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) c.diagnostics.push_back(parse_diagnostic(list[i], i));
  }
  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    check_keys(s, "solver", {"blowup_cap", "boundary_threshold", "boundary_margin", "watch_boundary", "max_steps"});
    c.solver.blowup_cap = optional_or<double>(s, "blowup_cap", c.solver.blowup_cap, "solver");
    c.solver.boundary_threshold = optional_or<double>(s, "boundary_threshold", c.solver.boundary_threshold, "solver");
    c.solver.boundary_margin = optional_or<double>(s, "boundary_margin", c.solver.boundary_margin, "solver");
    c.solver.watch_boundary = optional_or<bool>(s, "watch_boundary", c.solver.watch_boundary, "solver");
    c.solver.max_steps = optional_or<std::size_t>(s, "max_steps", c.solver.max_steps, "solver");
  }
  c.solver.frame_stride = c.frame_stride;
  const auto snaps = optional_or<std::string>(doc, "snapshots", "ends", root);
  if (snaps == "frames")
    c.snapshots = SnapshotPolicy::Frames;
  else if (snaps != "ends")
    throw ConfigError("snapshots must be 'ends' or 'frames'");
  c.plots = optional_or<bool>(doc, "plots", false, root);
  std::filesystem::path out = optional_or<std::string>(doc, "output_dir", "out", root);
  c.output_dir = out.is_relative() && !base_dir.empty() ? base_dir / out : out;

  char hex[17];
  // Where results land is not part of the experiment's identity.
  json ident = doc;
  ident.erase("output_dir");
  c.canonical = ident.dump();
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(c.canonical)));
  c.hash = hex;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace gkdv::lab
