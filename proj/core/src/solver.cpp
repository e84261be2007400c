#include "gkdv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

constexpr int kContourPoints = 64;

double ipow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

struct EtdCoefficients {
  std::vector<cplx> e, e2, q, f1, f2, f3;
};

// Cox-Matthews coefficients by contour averaging around each z = h * L_k.
EtdCoefficients etd_coefficients(std::span<const double> k, double h) {
  EtdCoefficients c;
  const std::size_t n = k.size();
  for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) v->resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const cplx z{0.0, h * k[m] * k[m] * k[m]};
    cplx q{}, f1{}, f2{}, f3{};
    for (int j = 0; j < kContourPoints; ++j) {
      const double theta = 2.0 * std::numbers::pi * (j + 0.5) / kContourPoints;
      const cplx r = z + std::polar(1.0, theta);
      const cplx er = std::exp(r);
      const cplx r3 = r * r * r;
      q += (std::exp(0.5 * r) - 1.0) / r;
      f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
      f2 += (2.0 + r + er * (r - 2.0)) / r3;
      f3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
    }
    const double w = h / kContourPoints;
    c.e[m] = std::exp(z);
    c.e2[m] = std::exp(0.5 * z);
    c.q[m] = q * w;
    c.f1[m] = f1 * w;
    c.f2[m] = f2 * w;
    c.f3[m] = f3 * w;
  }
  return c;
}

std::size_t padded_size(std::size_t n, int p) { return static_cast<std::size_t>((p + 2) / 2) * n; }

}  // namespace

struct SpectralSolver::Impl {
  GridSpec grid;
  Exponent p;
  SolverOptions opts;
  std::size_t n;
  std::size_t modes;
  std::size_t padded;
  RealFft fft;
  RealFft fft_pad;
  std::vector<double> k;
  EtdCoefficients coef;
  std::vector<cplx> pad_spec;
  std::vector<double> pad_real;
  std::vector<cplx> v, nv, a, na, b, nb, c, nc;
  std::vector<double> phys;
  double last_max = 0.0;

  Impl(const GridSpec& g, Exponent pe, SolverOptions o)
      : grid(g),
        p(pe),
        opts(o),
        n(g.points()),
        modes(g.points() / 2 + 1),
        padded(padded_size(g.points(), pe.value())),
        fft(g.points()),
        fft_pad(padded),
        k(wavenumbers(g)),
        coef(etd_coefficients(k, g.dt())),
        pad_spec(padded / 2 + 1),
        pad_real(padded),
        phys(g.points()) {
    for (auto* w : {&v, &nv, &a, &na, &b, &nb, &c, &nc}) w->resize(modes);
  }

  // out = -ik * P[u^p], u given by normalized coefficients in.
  void nonlinear(const std::vector<cplx>& in, std::vector<cplx>& out) {
    std::fill(pad_spec.begin(), pad_spec.end(), cplx{});
    std::copy(in.begin(), in.end() - 1, pad_spec.begin());
    fft_pad.inverse(pad_spec, pad_real);
    double mx = 0.0;
    const int pw = p.value();
    for (double& x : pad_real) {
      mx = std::max(mx, std::abs(x));
      x = ipow(x, pw);
    }
    if (!std::isfinite(mx)) mx = std::numeric_limits<double>::infinity();
    last_max = mx;
    fft_pad.forward(pad_real, pad_spec);
    const double scale = 1.0 / static_cast<double>(padded);
    for (std::size_t m = 0; m + 1 < modes; ++m) out[m] = cplx{0.0, -k[m]} * pad_spec[m] * scale;
    out[modes - 1] = 0.0;
  }

  void load(const Field& u) {
    fft.forward(u.values(), v);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& z : v) z *= scale;
    v[modes - 1] = 0.0;
  }

  std::vector<double> physical() {
    fft.inverse(v, phys);
    return phys;
  }

  void check_amplitude(double t) const {
    if (!(last_max <= opts.blowup_cap))
      throw BlowupError("max|u| = " + num(last_max) + " exceeds cap " + num(opts.blowup_cap) + " at t = " + num(t));
  }

  void advance(double t) {
    nonlinear(v, nv);
    check_amplitude(t);
    for (std::size_t m = 0; m < modes; ++m) a[m] = coef.e2[m] * v[m] + coef.q[m] * nv[m];
    nonlinear(a, na);
    for (std::size_t m = 0; m < modes; ++m) b[m] = coef.e2[m] * v[m] + coef.q[m] * na[m];
    nonlinear(b, nb);
    for (std::size_t m = 0; m < modes; ++m) c[m] = coef.e2[m] * a[m] + coef.q[m] * (2.0 * nb[m] - nv[m]);
    nonlinear(c, nc);
    for (std::size_t m = 0; m < modes; ++m)
      v[m] = coef.e[m] * v[m] + coef.f1[m] * nv[m] + 2.0 * coef.f2[m] * (na[m] + nb[m]) + coef.f3[m] * nc[m];
  }

  Field to_field(double t) {
    std::vector<double> vals = physical();
    double mx = 0.0;
    for (double x : vals) mx = std::isfinite(x) ? std::max(mx, std::abs(x)) : std::numeric_limits<double>::infinity();
    last_max = mx;
    check_amplitude(t);
    return Field(grid, p, t, std::move(vals));
  }
};

SpectralSolver::SpectralSolver(const GridSpec& grid, Exponent p, SolverOptions opts)
    : impl_(std::make_unique<Impl>(grid, p, opts)) {
  if (opts.frame_stride == 0) throw ParameterError("frame stride must be positive");
  if (!(opts.boundary_margin > 0.0 && opts.boundary_margin < 0.5))
    throw ParameterError("boundary margin must lie in (0, 0.5)");
}

SpectralSolver::~SpectralSolver() = default;
SpectralSolver::SpectralSolver(SpectralSolver&&) noexcept = default;
SpectralSolver& SpectralSolver::operator=(SpectralSolver&&) noexcept = default;

const GridSpec& SpectralSolver::grid() const { return impl_->grid; }
Exponent SpectralSolver::exponent() const { return impl_->p; }
const SolverOptions& SpectralSolver::options() const { return impl_->opts; }

namespace {

void check_compatible(const Field& u, const GridSpec& grid, Exponent p) {
  if (!(u.grid() == grid)) throw ParameterError("field grid does not match the solver grid");
  if (!(u.exponent() == p)) throw ParameterError("field exponent does not match the solver exponent");
}

}  // namespace

Field SpectralSolver::step(const Field& u) {
  check_compatible(u, impl_->grid, impl_->p);
  impl_->load(u);
  impl_->advance(u.time());
  return impl_->to_field(u.time() + impl_->grid.dt());
}

Trajectory SpectralSolver::evolve(const Field& u0, double T, std::span<const Observer> observers) {
  check_compatible(u0, impl_->grid, impl_->p);
  const double dt = impl_->grid.dt();
  if (!(T >= 0.0)) throw ParameterError("evolution time must be nonnegative");
  const double steps_real = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * std::max(1.0, T))
    throw ParameterError("evolution time must be a multiple of dt");
  if (steps > impl_->opts.max_steps) throw ParameterError("evolution exceeds the step budget");
  for (const auto& o : observers)
    if (o.stride == 0) throw ParameterError("observer stride must be positive");

  const SolverOptions& o = impl_->opts;
  Trajectory traj;
  auto record = [&](const Field& f) {
    ConservedRecord r = conserved(f, o.boundary_margin);
    traj.frames.push_back(f);
    traj.records.push_back(r);
    if (o.watch_boundary) {
      const auto vals = f.values();
      double mx = 0.0;
      for (double x : vals) mx = std::max(mx, std::abs(x));
      if (mx > 0.0 && r.boundary_amplitude > o.boundary_threshold * mx)
        throw DomainError("boundary amplitude " + num(r.boundary_amplitude) + " exceeds " + num(o.boundary_threshold) +
                          " * max|u| = " + num(o.boundary_threshold * mx) + " at t = " + num(f.time()));
    }
  };
  auto notify = [&](std::size_t step_index, const Field& f) {
    for (const auto& ob : observers)
      if (step_index % ob.stride == 0 && ob.callback) ob.callback(f);
  };

  const double t0 = u0.time();
  try {
    record(u0);
    notify(0, u0);
    impl_->load(u0);
    for (std::size_t s = 1; s <= steps; ++s) {
      const double t_prev = t0 + static_cast<double>(s - 1) * dt;
      impl_->advance(t_prev);
      const bool store = (s % o.frame_stride == 0) || s == steps;
      bool observe = false;
      for (const auto& ob : observers) observe = observe || (s % ob.stride == 0);
      if (!store && !observe) continue;
      const Field f = impl_->to_field(t0 + static_cast<double>(s) * dt);
      if (store) record(f);
      notify(s, f);
    }
  } catch (const BlowupError& e) {
    traj.truncation = Truncation{TruncationKind::Blowup, traj.frames.empty() ? t0 : traj.frames.back().time(), e.what()};
  } catch (const DomainError& e) {
    traj.truncation = Truncation{TruncationKind::Domain, traj.frames.back().time(), e.what()};
  }
  return traj;
}

Field step(const Field& u, const SolverOptions& opts) {
  SpectralSolver solver(u.grid(), u.exponent(), opts);
  return solver.step(u);
}

Trajectory evolve(const Field& u0, double T, const SolverOptions& opts, std::span<const Observer> observers) {
  SpectralSolver solver(u0.grid(), u0.exponent(), opts);
  return solver.evolve(u0, T, observers);
}

double mass(const Field& u) {
  double acc = 0.0;
  for (double x : u.values()) acc += x * x;
  return acc * u.grid().dx();
}

double energy(const Field& u) {
  const auto ux = derivative(u, 1);
  const int p = u.exponent().value();
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += 0.5 * ux[j] * ux[j] - ipow(u[j], p + 1) / (p + 1);
  return acc * u.grid().dx();
}

double h2_invariant(const Field& u) {
  if (u.exponent().value() != 2) throw WrongExponentError("the H2-level invariant is defined for p = 2 only");
  const auto ux = derivative(u, 1);
  const auto uxx = derivative(u, 2);
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    acc += uxx[j] * uxx[j] - (10.0 / 3.0) * ux[j] * ux[j] * u[j] + (5.0 / 9.0) * ipow(u[j], 4);
  return acc * u.grid().dx();
}

double sobolev_norm(std::span<const double> values, double length, double s) {
  if (!(s >= 0.0)) throw ParameterError("Sobolev index must be nonnegative");
  const auto spec = half_spectrum(values);
  const std::size_t n = values.size();
  const double base = 2.0 * std::numbers::pi / length;
  double acc = 0.0;
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const double k = base * static_cast<double>(m);
    const double w = (m == 0 || m == n / 2) ? 1.0 : 2.0;
    acc += w * std::pow(1.0 + k * k, s) * std::norm(spec[m]);
  }
  return std::sqrt(acc * length);
}

double sobolev_norm(const Field& u, double s) { return sobolev_norm(u.values(), u.grid().length(), s); }

double boundary_amplitude(const Field& u, double margin) {
  const std::size_t n = u.size();
  const auto cells = static_cast<std::size_t>(std::ceil(margin * static_cast<double>(n)));
  double mx = 0.0;
  for (std::size_t j = 0; j < std::min(cells, n); ++j) {
    mx = std::max(mx, std::abs(u[j]));
    mx = std::max(mx, std::abs(u[n - 1 - j]));
  }
  return mx;
}

ConservedRecord conserved(const Field& u, double margin) {
  ConservedRecord r;
  r.mass = mass(u);
  r.energy = energy(u);
  if (u.exponent().value() == 2) r.h2_invariant = h2_invariant(u);
  r.boundary_amplitude = boundary_amplitude(u, margin);
  return r;
}

}  // namespace gkdv
