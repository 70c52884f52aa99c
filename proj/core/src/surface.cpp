#include "bwf/surface.hpp"

#include <cmath>
#include <cstddef>

#include "bwf/fft.hpp"

namespace bwf {

namespace {

Vec3 hess_col(const std::array<Mat3, 3>& H, int i, int j) {
  return {H[0](i, j), H[1](i, j), H[2](i, j)};
}

}  // namespace

SurfaceFrame build_frame(const DomainMap& map, double X, double Y) {
  const Vec3 xi{X, Y, 0.0};
  const Mat3 J = map.jacobian(xi);

  SurfaceFrame f;
  f.S = map.value(xi);
  f.S_X = J.col(0);
  f.S_Y = J.col(1);

  const Vec3 N = cross(f.S_X, f.S_Y);
  const double nn = N.norm();
  if (!(nn > 1e-14))
    throw Error(ErrorKind::geometry_degenerate, "surface", "degenerate tangent plane");
  f.area_element = nn;
  f.n = N * (1.0 / nn);
  f.a = cross(f.S_Y, f.n) * (1.0 / nn);
  f.b = cross(f.n, f.S_X) * (1.0 / nn);

  const std::array<Mat3, 3> H = map.hessian(xi);
  const Vec3 S_XX = hess_col(H, 0, 0);
  const Vec3 S_XY = hess_col(H, 0, 1);
  const Vec3 S_YY = hess_col(H, 1, 1);
  const Vec3 N_X = cross(S_XX, f.S_Y) + cross(f.S_X, S_XY);
  const Vec3 N_Y = cross(S_XY, f.S_Y) + cross(f.S_X, S_YY);
  f.n_X = (N_X - f.n * dot(N_X, f.n)) * (1.0 / nn);
  f.n_Y = (N_Y - f.n * dot(N_Y, f.n)) * (1.0 / nn);
  f.K_M = -0.5 * (dot(f.a, f.n_X) + dot(f.b, f.n_Y));
  return f;
}

double mean_curvature(const DomainMap& map, double X, double Y) {
  return build_frame(map, X, Y).K_M;
}

Vec3 surface_gradient(const SurfaceFrame& frame, double g_X, double g_Y) {
  return frame.a * g_X + frame.b * g_Y;
}

SurfaceGrid::SurfaceGrid(const Grid& g, const DomainMap& map) : grid(g) {
  frames.reserve(g.plane());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 xy = g.lat.point(g.a1(i), g.a2(j));
      frames.push_back(build_frame(map, xy.x, xy.y));
    }
}

std::vector<double> surface_divergence(const SurfaceGrid& sg, const std::vector<Vec3>& tangent,
                                       double tangency_tol) {
  const Grid& g = sg.grid;
  if (tangent.size() != g.plane())
    throw Error(ErrorKind::contract_violation, "surface", "sample count mismatch");

  std::vector<double> u1(g.plane()), u2(g.plane());
  for (std::size_t p = 0; p < g.plane(); ++p) {
    const SurfaceFrame& f = sg.frames[p];
    const Vec3& V = tangent[p];
    if (std::abs(dot(V, f.n)) > tangency_tol * (1.0 + V.norm()))
      throw Error(ErrorKind::contract_violation, "surface", "field is not tangent to the surface");
    u1[p] = f.area_element * dot(V, f.a);
    u2[p] = f.area_element * dot(V, f.b);
  }

  std::vector<double> d1x(g.plane()), d1y(g.plane()), d2x(g.plane()), d2y(g.plane());
  plane_derivatives(g, u1.data(), d1x.data(), d1y.data());
  plane_derivatives(g, u2.data(), d2x.data(), d2y.data());

  std::vector<double> div(g.plane());
  for (std::size_t p = 0; p < g.plane(); ++p)
    div[p] = (d1x[p] + d2y[p]) / sg.frames[p].area_element;
  return div;
}

Quadrature::Quadrature(const Grid& g, const DomainMap& map) : grid(g) {
  const std::vector<double> wz = g.simpson_wz();
  const double hw = g.horizontal_weight();
  vol_w.resize(g.nnode());
  surf_w.resize(g.plane());
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double det = map.jacobian(g.ref_point(i, j, k)).det();
        if (!(det > 0.0))
          throw Error(ErrorKind::geometry_degenerate, "quadrature",
                      "map Jacobian is not orientation-preserving");
        vol_w[g.sidx(i, j, k)] = hw * wz[static_cast<std::size_t>(k)] * det;
      }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 xy = g.lat.point(g.a1(i), g.a2(j));
      const Mat3 J = map.jacobian({xy.x, xy.y, 0.0});
      surf_w[g.pidx(i, j)] = hw * cross(J.col(0), J.col(1)).norm();
    }
}

double integrate_volume(const Quadrature& q, const std::vector<double>& samples) {
  if (samples.size() != q.vol_w.size())
    throw Error(ErrorKind::contract_violation, "quadrature", "volume sample count mismatch");
  double acc = 0.0;
  for (std::size_t p = 0; p < samples.size(); ++p) acc += q.vol_w[p] * samples[p];
  return acc;
}

double integrate_surface(const Quadrature& q, const std::vector<double>& samples) {
  if (samples.size() != q.surf_w.size())
    throw Error(ErrorKind::contract_violation, "quadrature", "surface sample count mismatch");
  double acc = 0.0;
  for (std::size_t p = 0; p < samples.size(); ++p) acc += q.surf_w[p] * samples[p];
  return acc;
}

}  // namespace bwf
