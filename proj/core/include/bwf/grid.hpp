#pragma once

#include <cstddef>
#include <vector>

#include "bwf/errors.hpp"
#include "bwf/lattice.hpp"

namespace bwf {

// Uniform reference grid over one periodic cell of D = R^2 x (-d, 0):
// lattice coordinates a1 = i/nx, a2 = j/ny (periodic, node 0 duplicated
// nowhere), z_k = -d + k*d/nz with k = 0..nz (bottom..top, both walls kept).
// Scalar sample layout is x-fastest: s[(k*ny + j)*nx + i].
struct Grid {
  Lattice lat;
  int nx = 0, ny = 0, nz = 0;
  double d = 0.0;

  static Grid make(const Lattice& lat, int nx, int ny, int nz, double d) {
    if (nx < 4 || ny < 4 || nz < 4)
      throw Error(ErrorKind::config, "grid", "nx, ny, nz must all be >= 4");
    if (nx % 2 || ny % 2)
      throw Error(ErrorKind::config, "grid", "nx and ny must be even (spectral Nyquist handling)");
    if (nz % 2)
      throw Error(ErrorKind::config, "grid", "nz must be even (composite Simpson in z)");
    if (!(d > 0.0)) throw Error(ErrorKind::config, "grid", "depth d must be positive");
    return Grid{lat, nx, ny, nz, d};
  }

  int nlev() const { return nz + 1; }
  std::size_t plane() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t nnode() const { return plane() * static_cast<std::size_t>(nlev()); }

  std::size_t sidx(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nx + i;
  }
  std::size_t pidx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

  double a1(int i) const { return static_cast<double>(i) / nx; }
  double a2(int j) const { return static_cast<double>(j) / ny; }
  double zlev(int k) const { return -d + static_cast<double>(k) * d / nz; }
  double hz() const { return d / nz; }

  Vec3 ref_point(int i, int j, int k) const {
    const Vec2 xy = lat.point(a1(i), a2(j));
    return {xy.x, xy.y, zlev(k)};
  }

  // Composite Simpson weights over the nz+1 levels.
  std::vector<double> simpson_wz() const {
    std::vector<double> w(static_cast<std::size_t>(nlev()), 0.0);
    const double h3 = hz() / 3.0;
    w.front() = w.back() = h3;
    for (int k = 1; k < nz; ++k) w[static_cast<std::size_t>(k)] = (k % 2 ? 4.0 : 2.0) * h3;
    return w;
  }

  // Trapezoid weight per horizontal node (uniform for periodic data).
  double horizontal_weight() const { return lat.cell_area / static_cast<double>(plane()); }
};

}  // namespace bwf
