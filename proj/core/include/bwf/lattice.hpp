#pragma once

#include <cmath>

#include "bwf/errors.hpp"
#include "bwf/vec.hpp"

namespace bwf {

// Horizontal period lattice: generators lambda1, lambda2 and the reciprocal
// pair with recip_i . lambda_j = 2*pi*delta_ij. Everything downstream works
// in lattice coordinates (a1, a2) in [0,1)^2 and uses the reciprocal vectors
// for the chain rule, so oblique cells need no special cases.
struct Lattice {
  Vec2 lambda1, lambda2;
  Vec2 recip1, recip2;
  double cell_area = 0.0;

  static Lattice make(const Vec2& l1, const Vec2& l2) {
    const double det = cross_z(l1, l2);
    if (std::fabs(det) < 1e-14 * (l1.norm() * l2.norm() + 1e-300))
      throw Error(ErrorKind::config, "lattice", "generators are linearly dependent");
    Lattice lat;
    lat.lambda1 = l1;
    lat.lambda2 = l2;
    const double f = 2.0 * M_PI / det;
    lat.recip1 = Vec2{l2.y, -l2.x} * f;
    lat.recip2 = Vec2{-l1.y, l1.x} * f;
    lat.cell_area = std::fabs(det);
    return lat;
  }

  static Lattice square(double period) {
    return make(Vec2{period, 0.0}, Vec2{0.0, period});
  }

  // lattice coordinates -> physical horizontal point
  Vec2 point(double a1, double a2) const { return lambda1 * a1 + lambda2 * a2; }

  // physical wavevector of the integer mode (m1, m2)
  Vec2 wavevector(int m1, int m2) const {
    return recip1 * static_cast<double>(m1) + recip2 * static_cast<double>(m2);
  }
};

}  // namespace bwf
