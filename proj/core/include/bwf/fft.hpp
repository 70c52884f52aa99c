#pragma once

#include <complex>
#include <vector>

#include "bwf/grid.hpp"

namespace bwf {

// Thin FFTW wrapper for one horizontal plane size. Forward is unnormalized,
// inverse divides by nx*ny. Plan creation is mutex-guarded (FFTW planning is
// not thread-safe); execution copies through instance-owned aligned buffers,
// so distinct instances may run concurrently.
class Fft2 {
 public:
  Fft2(int nx, int ny);
  ~Fft2();
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  // complex spectrum size (r2c layout): (nx/2 + 1) * ny
  std::size_t spec_size() const { return static_cast<std::size_t>(nx_ / 2 + 1) * ny_; }

  void forward(const double* real_in, std::complex<double>* spec_out) const;
  void inverse(const std::complex<double>* spec_in, double* real_out) const;

 private:
  int nx_, ny_;
  void* plan_fwd_;
  void* plan_inv_;
  double* rbuf_;
  void* cbuf_;
};

// Signed integer mode index for FFT bin m of an n-point transform.
inline int fft_mode(int m, int n) { return m <= n / 2 ? m : m - n; }

// d/dX and d/dY multipliers for the r2c bin (mx, my): i * (m1 r1 + m2 r2).
// Nyquist rows/columns carry no sign information and are zeroed — everywhere,
// including |k|^2 work, so no operator ever divides by their vanishing k.
struct SpectralXY {
  explicit SpectralXY(const Grid& g);

  int nx, ny, nkx;
  std::vector<double> kx, ky;  // per r2c bin, 0 on Nyquist
  std::size_t bin(int mx, int my) const { return static_cast<std::size_t>(my) * nkx + mx; }
};

// In-place-safe spectral derivatives of one plane of scalar samples.
void plane_derivatives(const Grid& g, const double* plane, double* ddx, double* ddy);

// All-levels convenience: applies plane_derivatives level by level.
void horizontal_derivatives(const Grid& g, const std::vector<double>& samples,
                            std::vector<double>& ddx, std::vector<double>& ddy);

// Zero-padded resampling of one plane onto an (rx*nx, ry*ny) grid shifted by
// half a fine cell in each direction (the staggered Biot-Savart source
// lattice). Nyquist modes of the input are dropped, matching the derivative
// convention.
void plane_resample_staggered(const Grid& g, const double* plane, int rx, int ry, double* out);

}  // namespace bwf
