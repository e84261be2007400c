#include "gkdv/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <numbers>

#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  std::size_t n = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::size_t RealFft::size() const { return impl_->n; }

void RealFft::forward(std::span<const double> in, std::span<cplx> out) {
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->fwd);
  const auto* spec = reinterpret_cast<const cplx*>(impl_->spec);  // layout-compatible with fftw_complex
  std::copy(spec, spec + modes(), out.begin());
}

void RealFft::inverse(std::span<const cplx> in, std::span<double> out) {
  // c2r destroys its input, so always work on the internal copy.
  std::memcpy(impl_->spec, in.data(), sizeof(fftw_complex) * modes());
  fftw_execute(impl_->inv);
  std::copy(impl_->real, impl_->real + impl_->n, out.begin());
}

std::vector<double> wavenumbers(const GridSpec& grid) {
  const std::size_t n = grid.points();
  std::vector<double> k(n / 2 + 1);
  const double base = 2.0 * std::numbers::pi / grid.length();
  for (std::size_t m = 0; m < k.size(); ++m) k[m] = base * static_cast<double>(m);
  k.back() = 0.0;
  return k;
}

std::vector<cplx> half_spectrum(std::span<const double> values) {
  RealFft fft(values.size());
  std::vector<cplx> out(fft.modes());
  fft.forward(values, out);
  const double scale = 1.0 / static_cast<double>(values.size());
  for (auto& z : out) z *= scale;
  return out;
}

std::vector<double> from_half_spectrum(std::span<const cplx> coeffs, std::size_t n) {
  RealFft fft(n);
  std::vector<cplx> padded(fft.modes(), cplx{});
  const std::size_t m = std::min(coeffs.size(), padded.size());
  std::copy(coeffs.begin(), coeffs.begin() + static_cast<long>(m), padded.begin());
  std::vector<double> out(n);
  fft.inverse(padded, out);
  return out;
}

std::vector<double> derivative(std::span<const double> values, double length, int order) {
  if (order < 0) throw ParameterError("derivative order must be nonnegative");
  const std::size_t n = values.size();
  RealFft fft(n);
  std::vector<cplx> spec(fft.modes());
  fft.forward(values, spec);
  const double base = 2.0 * std::numbers::pi / length;
  const cplx i{0.0, 1.0};
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const cplx ik = i * (base * static_cast<double>(m));
    spec[m] *= std::pow(ik, order) / static_cast<double>(n);
  }
  if (order > 0) spec.back() = 0.0;
  std::vector<double> out(n);
  fft.inverse(spec, out);
  return out;
}

std::vector<double> derivative(const Field& u, int order) {
  return derivative(u.values(), u.grid().length(), order);
}

std::vector<double> resample(std::span<const double> values, std::size_t m) {
  const std::size_t n = values.size();
  std::vector<cplx> spec = half_spectrum(values);
  const std::size_t keep = std::min(n, m) / 2;
  // The shared Nyquist mode is ambiguous between sizes; drop it.
  spec.resize(keep + 1, cplx{});
  spec[keep] = 0.0;
  return from_half_spectrum(spec, m);
}

}  // namespace gkdv
