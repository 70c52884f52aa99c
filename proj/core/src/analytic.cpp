#include "bwf/analytic.hpp"

#include <cmath>

#include "bwf/errors.hpp"

namespace bwf {

AnalyticBeltrami AnalyticBeltrami::shear(double alpha, double amplitude) {
  if (alpha == 0.0)
    throw Error(ErrorKind::config, "field", "shear family needs alpha != 0");
  AnalyticBeltrami f;
  f.family = Family::shear;
  f.alpha = alpha;
  f.amplitude = amplitude;
  return f;
}

AnalyticBeltrami AnalyticBeltrami::modal(const Vec2& k, int m, double d, double amplitude) {
  if (!(k.norm() > 0.0))
    throw Error(ErrorKind::config, "field", "modal family needs a nonzero wavevector");
  if (m < 1) throw Error(ErrorKind::config, "field", "modal family needs m >= 1");
  if (!(d > 0.0)) throw Error(ErrorKind::config, "field", "modal family needs d > 0");
  AnalyticBeltrami f;
  f.family = Family::modal;
  f.k = k;
  f.m = m;
  f.d = d;
  f.amplitude = amplitude;
  const double kappa = m * M_PI / d;
  f.alpha = std::sqrt(k.dot(k) + kappa * kappa);
  return f;
}

Vec3 AnalyticBeltrami::u(const Vec3& x) const {
  if (family == Family::shear)
    return {amplitude * std::cos(alpha * x.z), -amplitude * std::sin(alpha * x.z), 0.0};

  const double kappa = m * M_PI / d;
  const double A0 = amplitude / alpha;
  const double th = k.x * x.x + k.y * x.y;
  const double ze = x.z + d;
  const double st = std::sin(th), ct = std::cos(th);
  const double sz = std::sin(kappa * ze), cz = std::cos(kappa * ze);
  return {-A0 * alpha * k.y * st * sz - A0 * kappa * k.x * st * cz,
          A0 * alpha * k.x * st * sz - A0 * kappa * k.y * st * cz,
          A0 * k.dot(k) * ct * sz};
}

Mat3 AnalyticBeltrami::grad_u(const Vec3& x) const {
  Mat3 G;
  if (family == Family::shear) {
    G(0, 2) = -amplitude * alpha * std::sin(alpha * x.z);
    G(1, 2) = -amplitude * alpha * std::cos(alpha * x.z);
    return G;
  }

  const double kappa = m * M_PI / d;
  const double A0 = amplitude / alpha;
  const double th = k.x * x.x + k.y * x.y;
  const double ze = x.z + d;
  const double st = std::sin(th), ct = std::cos(th);
  const double sz = std::sin(kappa * ze), cz = std::cos(kappa * ze);
  const double k2 = k.dot(k);

  // d/dx' turns sin(th) into k_c cos(th); d/dz acts on the kappa profile
  const double p1 = -A0 * alpha * k.y, q1 = -A0 * kappa * k.x;  // u1 = p1 st sz + q1 st cz
  const double p2 = A0 * alpha * k.x, q2 = -A0 * kappa * k.y;
  G(0, 0) = (p1 * sz + q1 * cz) * ct * k.x;
  G(0, 1) = (p1 * sz + q1 * cz) * ct * k.y;
  G(0, 2) = (p1 * cz - q1 * sz) * st * kappa;
  G(1, 0) = (p2 * sz + q2 * cz) * ct * k.x;
  G(1, 1) = (p2 * sz + q2 * cz) * ct * k.y;
  G(1, 2) = (p2 * cz - q2 * sz) * st * kappa;
  G(2, 0) = -A0 * k2 * st * sz * k.x;
  G(2, 1) = -A0 * k2 * st * sz * k.y;
  G(2, 2) = A0 * k2 * ct * cz * kappa;
  return G;
}

Vec3 AnalyticBeltrami::potential(const Vec3& x) const {
  if (family == Family::shear) {
    const double c = amplitude / alpha;
    return {c * (std::cos(alpha * x.z) - 1.0), -c * std::sin(alpha * x.z), 0.0};
  }

  const double kappa = m * M_PI / d;
  const double A0 = amplitude / alpha;
  const double kn = std::sqrt(k.dot(k));
  const double th = k.x * x.x + k.y * x.y;
  const double ze = x.z + d;
  const double st = std::sin(th), ct = std::cos(th);

  // A = u/alpha - grad(g(ze) cos th); g matches the horizontal part of
  // u/alpha at both walls, so A x n = 0 on top and A' = 0 at the bottom.
  const double cb = A0 * kappa / alpha;
  const double ctop = A0 * kappa * ((m % 2) ? -1.0 : 1.0) / alpha;
  const double P = cb;
  const double Q = (ctop - cb * std::cosh(kn * d)) / std::sinh(kn * d);
  const double gz = P * std::cosh(kn * ze) + Q * std::sinh(kn * ze);
  const double gzp = kn * (P * std::sinh(kn * ze) + Q * std::cosh(kn * ze));

  const Vec3 uu = u(x);
  return {uu.x / alpha + gz * k.x * st, uu.y / alpha + gz * k.y * st,
          uu.z / alpha - gzp * ct};
}

VectorField evaluate_analytic(const AnalyticBeltrami& fam, const Grid& grid,
                              const DomainMap& map) {
  VectorField f(grid);
  for (int k = 0; k <= grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        f.set_vec(i, j, k, fam.u(map.value(grid.ref_point(i, j, k))));
  return f;
}

VectorField evaluate_analytic_potential(const AnalyticBeltrami& fam, const Grid& grid,
                                        const DomainMap& map) {
  VectorField f(grid);
  for (int k = 0; k <= grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        f.set_vec(i, j, k, fam.potential(map.value(grid.ref_point(i, j, k))));
  return f;
}

}  // namespace bwf
