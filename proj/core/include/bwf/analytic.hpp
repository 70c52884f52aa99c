#pragma once

#include <string>

#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"
#include "bwf/vec.hpp"

namespace bwf {

// Closed-form Beltrami families on the flat slab.
//
// shear:  u = amp (cos(alpha z), -sin(alpha z), 0)
// modal:  psi = cos(k.x') sin(kappa (z+d)), kappa = m pi / d,
//         u = (amp/alpha) [ alpha curl(psi e3) + curl curl(psi e3) ],
//         alpha^2 = |k|^2 + kappa^2 (alpha > 0 branch)
// Both satisfy curl u = alpha u, div u = 0, u.e3 = 0 at z = 0 and z = -d.
struct AnalyticBeltrami {
  enum class Family { shear, modal };

  Family family = Family::shear;
  double alpha = 1.0;
  double amplitude = 1.0;
  Vec2 k;      // modal: horizontal wavevector (on the reciprocal lattice)
  int m = 1;   // modal: vertical mode index >= 1
  double d = 1.0;

  static AnalyticBeltrami shear(double alpha, double amplitude = 1.0);
  static AnalyticBeltrami modal(const Vec2& k, int m, double d, double amplitude = 1.0);

  Vec3 u(const Vec3& x) const;
  Mat3 grad_u(const Vec3& x) const;  // du_r/dx_c, exact

  // The boundary-adapted closed-form potential: curl A = u, A x n = 0 on the
  // top, bottom tangential part constant (shear) / zero (modal).
  Vec3 potential(const Vec3& x) const;

  std::string family_name() const { return family == Family::shear ? "shear" : "modal"; }
};

// Sample u (or the potential) at the mapped nodes F(node). The closed forms
// are defined on the whole slab; whether the boundary conditions survive a
// given map is the caller's concern (the residual diagnostics expose it).
VectorField evaluate_analytic(const AnalyticBeltrami& fam, const Grid& grid,
                              const DomainMap& map);
VectorField evaluate_analytic_potential(const AnalyticBeltrami& fam, const Grid& grid,
                                        const DomainMap& map);

}  // namespace bwf
