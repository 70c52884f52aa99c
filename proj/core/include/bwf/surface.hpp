#pragma once

#include <vector>

#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"
#include "bwf/vec.hpp"

namespace bwf {

// Pointwise data of the top surface S(X,Y) = F(X,Y,0).
// a, b are the dual vectors of (S_X, S_Y) within the tangent plane:
// a.S_X = 1, a.S_Y = 0, b.S_X = 0, b.S_Y = 1.
struct SurfaceFrame {
  Vec3 S;
  Vec3 S_X, S_Y;
  Vec3 n;         // unit outward (upward) normal
  Vec3 a, b;      // dual tangent vectors
  Vec3 n_X, n_Y;  // derivatives of the unit normal (shape-operator columns)
  double area_element = 0.0;  // |S_X x S_Y|
  double K_M = 0.0;           // mean curvature, 2 K_M = -div n
};

SurfaceFrame build_frame(const DomainMap& map, double X, double Y);
double mean_curvature(const DomainMap& map, double X, double Y);

// g_X a + g_Y b for chart partials of a scalar on the surface; tangent to S.
Vec3 surface_gradient(const SurfaceFrame& frame, double g_X, double g_Y);

// Frames at all horizontal grid nodes (z = 0 level), plus the surface
// calculus that needs chart derivatives across nodes.
struct SurfaceGrid {
  Grid grid;
  std::vector<SurfaceFrame> frames;  // plane() entries, Grid::pidx order

  SurfaceGrid(const Grid& g, const DomainMap& map);
  const SurfaceFrame& at(int i, int j) const { return frames[grid.pidx(i, j)]; }
};

// Conservative surface divergence of a tangent field V (3-vector samples in
// pidx order): div V = (1/|N|) [ d_X(|N| v1) + d_Y(|N| v2) ] with (v1, v2)
// the contravariant chart components V = v1 S_X + v2 S_Y. This is the exact
// discrete adjoint of surface_gradient under the trapezoid surface
// quadrature. Inputs with |V.n| > tangency_tol are rejected.
std::vector<double> surface_divergence(const SurfaceGrid& sg, const std::vector<Vec3>& tangent,
                                       double tangency_tol = 1e-8);

// Quadrature weights bound to (grid, map): volume weights carry det DF,
// surface weights carry |S_X x S_Y|. Horizontal rule is the trapezoid
// (spectrally accurate for periodic data), vertical rule composite Simpson.
struct Quadrature {
  Grid grid;
  std::vector<double> vol_w;   // nnode()
  std::vector<double> surf_w;  // plane(), top surface

  Quadrature(const Grid& g, const DomainMap& map);
};

double integrate_volume(const Quadrature& q, const std::vector<double>& samples);
double integrate_surface(const Quadrature& q, const std::vector<double>& samples);

}  // namespace bwf
