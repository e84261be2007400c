#include "gkdv/lab/initial.hpp"

#include <algorithm>
#include <cmath>

#include "gkdv/lab/errors.hpp"
#include "gkdv/lab/snapshot.hpp"

namespace gkdv::lab {

namespace {

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

}  // namespace

Field initial_field(const ExperimentConfig& c) {
  const Exponent p(c.p);
  const GridSpec g = c.grid();
  return std::visit(
      overloaded{
          [&](const SolitonParams& s) { return sample_soliton(s, p, g); },
          [&](const BreatherParams& b) {
            if (c.p != 3) throw ConfigError("breather data requires p = 3");
            return sample_breather(b, g);
          },
          [&](const Superposition& s) {
            SuperposeOptions o;
            o.min_separation = s.min_separation;
            return superpose(s.solitons, p, g, o).field;
          },
          [&](const FromFile& f) {
            Field u = load_snapshot(f.path, c.dt);
            if (!(u.exponent() == p)) throw ConfigError("snapshot exponent differs from p");
            if (u.grid().length() != c.length || u.grid().points() != c.points)
              throw ConfigError("snapshot grid differs from the configured grid");
            return u;
          },
          [&](const GaussianData& gd) {
            std::vector<double> v(g.points());
            for (std::size_t j = 0; j < v.size(); ++j) {
              const double z = wrap_distance(g.x(j) - gd.center, g.length()) / gd.width;
              v[j] = gd.amplitude * std::exp(-z * z);
            }
            return Field(g, p, 0.0, std::move(v));
          },
      },
      c.initial);
}

double speed_from_height(Exponent p, double height) {
  return std::pow(std::abs(height) / ground_state(p, 0.0), p.value() - 1);
}

std::vector<SolitonParams> soliton_guesses(const ExperimentConfig& c, const Field& u0) {
  if (const auto* s = std::get_if<SolitonParams>(&c.initial)) return {*s};
  if (const auto* s = std::get_if<Superposition>(&c.initial)) {
    auto out = s->solitons;
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.x0 < b.x0; });
    return out;
  }
  if (!c.soliton_count || *c.soliton_count == 0) return {};
  // Peaks at least two widths of the tallest profile apart.
  double top = 0.0;
  for (double v : u0.values()) top = std::max(top, std::abs(v));
  const double cmax = speed_from_height(u0.exponent(), top);
  const auto centers = locate_peaks(u0, *c.soliton_count, 10.0 / std::sqrt(std::max(cmax, 1e-12)));
  std::vector<SolitonParams> out;
  for (double x : centers) {
    const auto j = static_cast<std::size_t>(std::lround((x - u0.grid().left()) / u0.grid().dx())) % u0.size();
    const double h = u0[j];
    out.push_back({speed_from_height(u0.exponent(), h), x, h < 0.0 ? -1 : 1});
  }
  return out;
}

}  // namespace gkdv::lab
