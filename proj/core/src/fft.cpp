#include "bwf/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "bwf/errors.hpp"

namespace bwf {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2::Fft2(int nx, int ny) : nx_(nx), ny_(ny) {
  const std::size_t nreal = static_cast<std::size_t>(nx) * ny;
  const std::size_t nspec = spec_size();
  rbuf_ = fftw_alloc_real(nreal);
  auto* cb = fftw_alloc_complex(nspec);
  cbuf_ = cb;
  std::lock_guard<std::mutex> lock(plan_mutex());
  // FFTW's r2c wants the last dimension contiguous; our planes are x-fastest,
  // so transform as (ny, nx) row-major.
  plan_fwd_ = fftw_plan_dft_r2c_2d(ny, nx, rbuf_, cb, FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_2d(ny, nx, cb, rbuf_, FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_inv_)
    throw Error(ErrorKind::solver_failure, "fft", "FFTW plan creation failed");
}

Fft2::~Fft2() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(rbuf_);
  fftw_free(static_cast<fftw_complex*>(cbuf_));
}

void Fft2::forward(const double* real_in, std::complex<double>* spec_out) const {
  const std::size_t nreal = static_cast<std::size_t>(nx_) * ny_;
  std::memcpy(rbuf_, real_in, nreal * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(spec_out, cbuf_, spec_size() * sizeof(std::complex<double>));
}

void Fft2::inverse(const std::complex<double>* spec_in, double* real_out) const {
  auto* cb = static_cast<fftw_complex*>(cbuf_);
  std::memcpy(cb, spec_in, spec_size() * sizeof(std::complex<double>));
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  const std::size_t nreal = static_cast<std::size_t>(nx_) * ny_;
  const double scale = 1.0 / static_cast<double>(nreal);
  for (std::size_t i = 0; i < nreal; ++i) real_out[i] = rbuf_[i] * scale;
}

SpectralXY::SpectralXY(const Grid& g) : nx(g.nx), ny(g.ny), nkx(g.nx / 2 + 1) {
  kx.assign(static_cast<std::size_t>(nkx) * ny, 0.0);
  ky.assign(static_cast<std::size_t>(nkx) * ny, 0.0);
  for (int my = 0; my < ny; ++my) {
    const int m2 = fft_mode(my, ny);
    for (int mx = 0; mx < nkx; ++mx) {
      const int m1 = fft_mode(mx, nx);
      // Nyquist bins are unsigned; their derivative multiplier is defined 0.
      const bool nyq = (2 * mx == nx) || (2 * std::abs(m2) == ny);
      if (nyq) continue;
      const Vec2 k = g.lat.wavevector(m1, m2);
      kx[bin(mx, my)] = k.x;
      ky[bin(mx, my)] = k.y;
    }
  }
}

void plane_derivatives(const Grid& g, const double* plane, double* ddx, double* ddy) {
  Fft2 fft(g.nx, g.ny);
  const SpectralXY sp(g);
  std::vector<std::complex<double>> spec(fft.spec_size());
  std::vector<std::complex<double>> tmp(fft.spec_size());
  fft.forward(plane, spec.data());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t b = 0; b < spec.size(); ++b) tmp[b] = I * sp.kx[b] * spec[b];
  fft.inverse(tmp.data(), ddx);
  for (std::size_t b = 0; b < spec.size(); ++b) tmp[b] = I * sp.ky[b] * spec[b];
  fft.inverse(tmp.data(), ddy);
}

void horizontal_derivatives(const Grid& g, const std::vector<double>& samples,
                            std::vector<double>& ddx, std::vector<double>& ddy) {
  if (samples.size() % g.plane() != 0)
    throw Error(ErrorKind::contract_violation, "fft", "sample count is not a plane multiple");
  const std::size_t nlev = samples.size() / g.plane();
  ddx.resize(samples.size());
  ddy.resize(samples.size());
  Fft2 fft(g.nx, g.ny);
  const SpectralXY sp(g);
  std::vector<std::complex<double>> spec(fft.spec_size()), tmp(fft.spec_size());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t k = 0; k < nlev; ++k) {
    const double* in = samples.data() + k * g.plane();
    fft.forward(in, spec.data());
    for (std::size_t b = 0; b < spec.size(); ++b) tmp[b] = I * sp.kx[b] * spec[b];
    fft.inverse(tmp.data(), ddx.data() + k * g.plane());
    for (std::size_t b = 0; b < spec.size(); ++b) tmp[b] = I * sp.ky[b] * spec[b];
    fft.inverse(tmp.data(), ddy.data() + k * g.plane());
  }
}

void plane_resample_staggered(const Grid& g, const double* plane, int rx, int ry, double* out) {
  const int fx = g.nx * rx, fy = g.ny * ry;
  Fft2 coarse(g.nx, g.ny);
  Fft2 fine(fx, fy);
  std::vector<std::complex<double>> cs(coarse.spec_size());
  std::vector<std::complex<double>> fs(fine.spec_size(), std::complex<double>(0.0, 0.0));
  coarse.forward(plane, cs.data());
  const int nkxc = g.nx / 2 + 1;
  const int nkxf = fx / 2 + 1;
  const double renorm = static_cast<double>(rx) * ry;  // inverse scales by 1/(fx*fy)
  for (int my = 0; my < g.ny; ++my) {
    const int m2 = fft_mode(my, g.ny);
    if (2 * std::abs(m2) == g.ny) continue;  // drop Nyquist rows
    const int fmy = m2 >= 0 ? m2 : m2 + fy;
    for (int mx = 0; mx < nkxc; ++mx) {
      if (2 * mx == g.nx) continue;
      // half-fine-cell shift: phase exp(i k . (0.5/fx, 0.5/fy)) in lattice coords
      const double ph = M_PI * (static_cast<double>(mx) / fx +
                                static_cast<double>(m2) / fy);
      const std::complex<double> shift =
          std::complex<double>(std::cos(ph), std::sin(ph)) * renorm;
      fs[static_cast<std::size_t>(fmy) * nkxf + mx] =
          cs[static_cast<std::size_t>(my) * nkxc + mx] * shift;
    }
  }
  fine.inverse(fs.data(), out);
}

}  // namespace bwf
