#include "bwf/domain_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "bwf/fft.hpp"

namespace bwf {

double eta_eval(const std::vector<EtaMode>& modes, int dx, int dy, double X, double Y) {
  double acc = 0.0;
  for (const EtaMode& m : modes) {
    // each derivative brings down a wavenumber factor and advances the phase
    double fac = m.amp;
    for (int q = 0; q < dx; ++q) fac *= m.k.x;
    for (int q = 0; q < dy; ++q) fac *= m.k.y;
    const double ph = m.k.x * X + m.k.y * Y + m.phase + 0.5 * M_PI * (dx + dy);
    acc += fac * std::cos(ph);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// graph lift

Vec3 GraphLiftMap::value(const Vec3& X) const {
  const double e = eta(0, 0, X.x, X.y);
  return {X.x, X.y, X.z + (1.0 + X.z / depth()) * e};
}

Mat3 GraphLiftMap::jacobian(const Vec3& X) const {
  const double w = 1.0 + X.z / depth();
  Mat3 J = Mat3::identity();
  J(2, 0) = w * eta(1, 0, X.x, X.y);
  J(2, 1) = w * eta(0, 1, X.x, X.y);
  J(2, 2) = 1.0 + eta(0, 0, X.x, X.y) / depth();
  return J;
}

std::array<Mat3, 3> GraphLiftMap::hessian(const Vec3& X) const {
  std::array<Mat3, 3> H{};
  const double w = 1.0 + X.z / depth();
  const double exx = eta(2, 0, X.x, X.y);
  const double exy = eta(1, 1, X.x, X.y);
  const double eyy = eta(0, 2, X.x, X.y);
  const double ex = eta(1, 0, X.x, X.y);
  const double ey = eta(0, 1, X.x, X.y);
  Mat3& h = H[2];
  h(0, 0) = w * exx;
  h(0, 1) = h(1, 0) = w * exy;
  h(1, 1) = w * eyy;
  h(0, 2) = h(2, 0) = ex / depth();
  h(1, 2) = h(2, 1) = ey / depth();
  return H;
}

std::array<Ten3, 3> GraphLiftMap::third(const Vec3& X) const {
  std::array<Ten3, 3> T{};
  const double w = 1.0 + X.z / depth();
  Ten3& t = T[2];
  // purely horizontal indices: w * d^3 eta; exactly one Z index: d^2 eta / d
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const int dx = (i == 0) + (j == 0) + (k == 0);
        const int dy = 3 - dx;
        t(i, j, k) = w * eta(dx, dy, X.x, X.y);
      }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const int dx = (i == 0) + (j == 0);
      const double v = eta(dx, 2 - dx, X.x, X.y) / depth();
      t(i, j, 2) = t(i, 2, j) = t(2, i, j) = v;
    }
  return T;
}

// ---------------------------------------------------------------------------
// shear

Vec3 ShearMap::value(const Vec3& X) const {
  const double w = 1.0 + X.z / depth();
  const double s = amp_ * w * w;
  return {X.x + s * dir_.x, X.y + s * dir_.y, X.z};
}

Mat3 ShearMap::jacobian(const Vec3& X) const {
  const double sp = 2.0 * amp_ * (1.0 + X.z / depth()) / depth();
  Mat3 J = Mat3::identity();
  J(0, 2) = sp * dir_.x;
  J(1, 2) = sp * dir_.y;
  return J;
}

std::array<Mat3, 3> ShearMap::hessian(const Vec3&) const {
  std::array<Mat3, 3> H{};
  const double spp = 2.0 * amp_ / (depth() * depth());
  H[0](2, 2) = spp * dir_.x;
  H[1](2, 2) = spp * dir_.y;
  return H;
}

// ---------------------------------------------------------------------------
// sampled displacement

SampledDisplacementMap::SampledDisplacementMap(const Lattice& lat, double depth, int mx,
                                               int my, int levels,
                                               const std::vector<double>& disp)
    : DomainMap(depth), lat_(lat), mx_(mx), my_(my), levels_(levels) {
  if (mx < 2 || my < 2 || levels < 2)
    throw Error(ErrorKind::config, "map", "sampled displacement grid too small");
  const std::size_t need = 3u * static_cast<std::size_t>(mx) * my * levels;
  if (disp.size() != need)
    throw Error(ErrorKind::config, "map", "sampled displacement size mismatch");

  spectra_re_.assign(need, 0.0);
  spectra_im_.assign(need, 0.0);
  Fft2 fft(mx, my);
  std::vector<std::complex<double>> cs(fft.spec_size());
  const int nkx = mx / 2 + 1;
  const std::size_t plane = static_cast<std::size_t>(mx) * my;
  for (int c = 0; c < 3; ++c)
    for (int lev = 0; lev < levels; ++lev) {
      if (lev == 0) continue;  // flat bottom: displacement forced to zero
      const double* samples =
          disp.data() + (static_cast<std::size_t>(c) * levels + lev) * plane;
      fft.forward(samples, cs.data());
      for (int j = 0; j < my; ++j)
        for (int i = 0; i < nkx; ++i) {
          if (2 * i == mx || 2 * ((j <= my / 2) ? j : my - j) == my) continue;
          const std::complex<double> v = cs[static_cast<std::size_t>(j) * nkx + i];
          spectra_re_[cidx(c, lev, i, j)] = v.real();
          spectra_im_[cidx(c, lev, i, j)] = v.imag();
          if (i > 0) {  // Hermitian mirror
            const int im = mx - i, jm = (my - j) % my;
            spectra_re_[cidx(c, lev, im, jm)] = v.real();
            spectra_im_[cidx(c, lev, im, jm)] = -v.imag();
          }
        }
    }
}

namespace {

// Lagrange basis values/derivatives on integer nodes 0..nw-1 at parameter t.
void lagrange_basis(int nw, double t, double* w, double* dw, double* ddw) {
  for (int q = 0; q < nw; ++q) {
    // expand prod_{r != q} (t - r) / (q - r) into coefficients, then Horner
    double coef[8] = {1.0};
    int deg = 0;
    double den = 1.0;
    for (int r = 0; r < nw; ++r) {
      if (r == q) continue;
      den *= q - r;
      for (int p = deg + 1; p > 0; --p) coef[p] = coef[p - 1] - r * coef[p];
      coef[0] *= -static_cast<double>(r);
      ++deg;
    }
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
    for (int p = deg; p >= 0; --p) {
      p2 = p2 * t + 2.0 * p1;
      p1 = p1 * t + p0;
      p0 = p0 * t + coef[p];
    }
    w[q] = p0 / den;
    dw[q] = p1 / den;
    ddw[q] = p2 / den;
  }
}

}  // namespace

template <int ORDER>
void SampledDisplacementMap::accumulate(const Vec3& X, Vec3& F, Mat3& J,
                                        std::array<Mat3, 3>& H) const {
  const double h = depth() / (levels_ - 1);
  const int nw = std::min(6, levels_);
  int kb = static_cast<int>(std::floor((X.z + depth()) / h)) - nw / 2 + 1;
  kb = std::clamp(kb, 0, levels_ - nw);
  const double t = (X.z + depth()) / h - kb;

  double w[6], dw[6], ddw[6];
  lagrange_basis(nw, t, w, dw, ddw);

  double val[3] = {0, 0, 0}, gx[3] = {0, 0, 0}, gy[3] = {0, 0, 0}, gz[3] = {0, 0, 0};
  double hxx[3] = {0, 0, 0}, hxy[3] = {0, 0, 0}, hyy[3] = {0, 0, 0};
  double hxz[3] = {0, 0, 0}, hyz[3] = {0, 0, 0}, hzz[3] = {0, 0, 0};

  const double norm = 1.0 / (static_cast<double>(mx_) * my_);
  for (int j = 0; j < my_; ++j) {
    const int m2 = fft_mode(j, my_);
    for (int i = 0; i < mx_; ++i) {
      const int m1 = fft_mode(i, mx_);
      const Vec2 k{m1 * lat_.recip1.x + m2 * lat_.recip2.x,
                   m1 * lat_.recip1.y + m2 * lat_.recip2.y};
      const double th = k.x * X.x + k.y * X.y;
      const double ct = std::cos(th), st = std::sin(th);
      for (int c = 0; c < 3; ++c) {
        const std::size_t base = cidx(c, kb, i, j);
        const std::size_t stride = static_cast<std::size_t>(my_) * mx_;
        double r0 = 0.0, i0 = 0.0, r1 = 0.0, i1 = 0.0, r2 = 0.0, i2 = 0.0;
        for (int q = 0; q < nw; ++q) {
          const double re = spectra_re_[base + q * stride];
          const double im = spectra_im_[base + q * stride];
          r0 += re * w[q];
          i0 += im * w[q];
          if constexpr (ORDER >= 1) {
            r1 += re * dw[q];
            i1 += im * dw[q];
          }
          if constexpr (ORDER >= 2) {
            r2 += re * ddw[q];
            i2 += im * ddw[q];
          }
        }
        // c0 = Re(Â e^{i th}), c1 = Re(i Â e^{i th}) = -Im(Â e^{i th})
        const double s0 = r0 * ct - i0 * st;
        val[c] += s0;
        if constexpr (ORDER >= 1) {
          const double c1 = -(r0 * st + i0 * ct);
          gx[c] += c1 * k.x;
          gy[c] += c1 * k.y;
          gz[c] += (r1 * ct - i1 * st) / h;
        }
        if constexpr (ORDER >= 2) {
          const double c1z = -(r1 * st + i1 * ct) / h;
          hxx[c] += -s0 * k.x * k.x;
          hxy[c] += -s0 * k.x * k.y;
          hyy[c] += -s0 * k.y * k.y;
          hxz[c] += c1z * k.x;
          hyz[c] += c1z * k.y;
          hzz[c] += (r2 * ct - i2 * st) / (h * h);
        }
      }
    }
  }

  F = {X.x + val[0] * norm, X.y + val[1] * norm, X.z + val[2] * norm};
  if constexpr (ORDER >= 1) {
    J = Mat3::identity();
    for (int c = 0; c < 3; ++c) {
      J(c, 0) += gx[c] * norm;
      J(c, 1) += gy[c] * norm;
      J(c, 2) += gz[c] * norm;
    }
  }
  if constexpr (ORDER >= 2) {
    for (int c = 0; c < 3; ++c) {
      Mat3& m = H[static_cast<std::size_t>(c)];
      m(0, 0) = hxx[c] * norm;
      m(0, 1) = m(1, 0) = hxy[c] * norm;
      m(1, 1) = hyy[c] * norm;
      m(0, 2) = m(2, 0) = hxz[c] * norm;
      m(1, 2) = m(2, 1) = hyz[c] * norm;
      m(2, 2) = hzz[c] * norm;
    }
  }
}

Vec3 SampledDisplacementMap::value(const Vec3& X) const {
  Vec3 F;
  Mat3 J;
  std::array<Mat3, 3> H{};
  accumulate<0>(X, F, J, H);
  return F;
}

Mat3 SampledDisplacementMap::jacobian(const Vec3& X) const {
  Vec3 F;
  Mat3 J;
  std::array<Mat3, 3> H{};
  accumulate<1>(X, F, J, H);
  return J;
}

std::array<Mat3, 3> SampledDisplacementMap::hessian(const Vec3& X) const {
  Vec3 F;
  Mat3 J;
  std::array<Mat3, 3> H{};
  accumulate<2>(X, F, J, H);
  return H;
}

}  // namespace bwf
