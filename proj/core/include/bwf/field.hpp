#pragma once

#include <cstddef>
#include <vector>

#include "bwf/errors.hpp"
#include "bwf/grid.hpp"
#include "bwf/vec.hpp"

namespace bwf {

// Scalar samples over the cell grid, x-fastest layout (Grid::sidx).
struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), v(g.nnode(), 0.0) {}

  double& at(int i, int j, int k) { return v[grid.sidx(i, j, k)]; }
  double at(int i, int j, int k) const { return v[grid.sidx(i, j, k)]; }

  double inf_norm() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
};

// Vector samples: values live at the physical points F(node) but are indexed
// by reference nodes (pullback indexing). Component-major storage, so each
// component is one contiguous scalar block — the dump format's layout.
struct VectorField {
  Grid grid;
  bool periodic = true;
  std::vector<double> v;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g), v(3 * g.nnode(), 0.0) {}

  std::size_t cidx(int c, int i, int j, int k) const {
    return static_cast<std::size_t>(c) * grid.nnode() + grid.sidx(i, j, k);
  }
  double& at(int c, int i, int j, int k) { return v[cidx(c, i, j, k)]; }
  double at(int c, int i, int j, int k) const { return v[cidx(c, i, j, k)]; }

  double* component(int c) { return v.data() + static_cast<std::size_t>(c) * grid.nnode(); }
  const double* component(int c) const {
    return v.data() + static_cast<std::size_t>(c) * grid.nnode();
  }

  Vec3 vec_at(int i, int j, int k) const {
    const std::size_t s = grid.sidx(i, j, k), n = grid.nnode();
    return {v[s], v[n + s], v[2 * n + s]};
  }
  void set_vec(int i, int j, int k, const Vec3& w) {
    const std::size_t s = grid.sidx(i, j, k), n = grid.nnode();
    v[s] = w.x;
    v[n + s] = w.y;
    v[2 * n + s] = w.z;
  }

  double inf_norm() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
};

// Periodic scalar samples on the horizontal chart (one z-level / the surface).
struct SurfaceScalar {
  int nx = 0, ny = 0;
  std::vector<double> v;

  SurfaceScalar() = default;
  SurfaceScalar(int nx_, int ny_) : nx(nx_), ny(ny_), v(static_cast<std::size_t>(nx_) * ny_, 0.0) {}

  double& at(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
  double at(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }

  double inf_norm() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  double mean() const {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* stage) {
  if (a.nx != b.nx || a.ny != b.ny || a.nz != b.nz)
    throw Error(ErrorKind::contract_violation, stage, "sample counts do not match the grid");
}

}  // namespace bwf
