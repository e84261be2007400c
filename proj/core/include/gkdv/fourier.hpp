#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "gkdv/grid.hpp"

namespace gkdv {

using cplx = std::complex<double>;

// Real-to-complex transform pair of fixed size n (unnormalized, FFTW sign convention).
// Plans are created under a process-wide lock; execution is thread-safe per instance only.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const;
  std::size_t modes() const { return size() / 2 + 1; }

  void forward(std::span<const double> in, std::span<cplx> out);
  void inverse(std::span<const cplx> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Physical wavenumbers 2*pi*m/L for m = 0..N/2, Nyquist entry set to zero.
std::vector<double> wavenumbers(const GridSpec& grid);

// Normalized half spectrum: u_j = sum_k uhat_k e^{i k (x_j - x_0)}.
std::vector<cplx> half_spectrum(std::span<const double> values);
std::vector<double> from_half_spectrum(std::span<const cplx> coeffs, std::size_t n);

// d^order u / dx^order by Fourier multiplication.
std::vector<double> derivative(const Field& u, int order);
std::vector<double> derivative(std::span<const double> values, double length, int order);

// Trigonometric interpolation of u onto m points of the same domain (zero-padding or truncation).
std::vector<double> resample(std::span<const double> values, std::size_t m);

}  // namespace gkdv
