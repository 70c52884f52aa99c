/// @file test_fields.cpp
/// @brief Analytic Beltrami families and discrete derivative exactness
///
/// PURPOSE: Verifies the closed-form field families against their defining
/// PDE and the discrete derivative stack against fields it must reproduce
/// exactly:
///
///   1. shear/modal families: curl u = alpha u, div u = 0, u.n = 0 at walls
///   2. closed-form potentials: curl A = u and the wall conditions A x n
///   3. spectral horizontal derivatives are exact on band-limited data and
///      kill the Nyquist bin; the vertical stencil is exact on polynomials
///   4. textbook sanity: u = (0,0,sin x) has curl (0, cos x, 0)
///
/// Residual oracles are independent closed forms (hand calculus), evaluated
/// pointwise; no tolerance is borrowed from the code under test.

#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"

#include "bwf/analytic.hpp"
#include "bwf/domain_map.hpp"
#include "bwf/fft.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"
#include "bwf/lattice.hpp"
#include "bwf/operators.hpp"
#include "bwf/rng.hpp"

using namespace bwf;

namespace {
const double PI = M_PI;
}

TEST_SUITE("fields") {

TEST_CASE("analytic families satisfy the Beltrami system discretely") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 24, 24, 24, 1.0);
  const IdentityMap flat(1.0);

  const AnalyticBeltrami shear = AnalyticBeltrami::shear(2.0);
  const AnalyticBeltrami modal = AnalyticBeltrami::modal(lat.wavevector(1, 0), 1, 1.0);
  CHECK(modal.alpha == doctest::Approx(std::sqrt(1.0 + PI * PI)).epsilon(1e-14));

  for (const AnalyticBeltrami& fam : {shear, modal}) {
    const VectorField u = evaluate_analytic(fam, g, flat);
    const BeltramiResiduals r = beltrami_residuals(u, flat, fam.alpha);
    std::printf("  %s: curl-alpha %.3e div %.3e un_top %.3e un_bot %.3e\n",
                fam.family_name().c_str(), r.curl_minus_alpha_u, r.div_u, r.un_top, r.un_bottom);
    CHECK(r.curl_minus_alpha_u < 1e-4);
    CHECK(r.div_u < 1e-4);
    // wall tangency holds exactly in the closed forms
    CHECK(r.un_top < 1e-14);
    CHECK(r.un_bottom < 1e-14);
  }
}

TEST_CASE("pointwise closed forms: grad_u consistency") {
  // grad_u is advertised as exact; check against centered differences
  const Lattice lat = Lattice::square(2.0 * PI);
  const AnalyticBeltrami modal = AnalyticBeltrami::modal(lat.wavevector(1, 1), 2, 1.0, 0.7);
  Rng rng(3);
  const double h = 1e-6;
  double err = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Vec3 x{rng.uniform(0.0, 2.0 * PI), rng.uniform(0.0, 2.0 * PI), rng.uniform(-1.0, 0.0)};
    const Mat3 G = modal.grad_u(x);
    for (int c = 0; c < 3; ++c) {
      Vec3 xp = x, xm = x;
      (c == 0 ? xp.x : c == 1 ? xp.y : xp.z) += h;
      (c == 0 ? xm.x : c == 1 ? xm.y : xm.z) -= h;
      const Vec3 d = (modal.u(xp) - modal.u(xm)) * (0.5 / h);
      err = std::max({err, std::fabs(d.x - G.m[0 * 3 + c]), std::fabs(d.y - G.m[1 * 3 + c]),
                      std::fabs(d.z - G.m[2 * 3 + c])});
    }
  }
  CHECK(err < 1e-8);
}

TEST_CASE("closed-form potentials: curl A = u and wall conditions") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 24, 24, 24, 1.0);
  const IdentityMap flat(1.0);

  for (const AnalyticBeltrami& fam :
       {AnalyticBeltrami::shear(2.0), AnalyticBeltrami::modal(lat.wavevector(1, 0), 1, 1.0)}) {
    const VectorField u = evaluate_analytic(fam, g, flat);
    const VectorField A = evaluate_analytic_potential(fam, g, flat);
    const VectorField cu = mapped_curl(A, flat);
    double cerr = 0.0;
    for (std::size_t s = 0; s < cu.v.size(); ++s)
      cerr = std::max(cerr, std::fabs(cu.v[s] - u.v[s]));

    // top wall: A x e3 = 0 means the horizontal components vanish at k = nz
    double top = 0.0, bottom_dev = 0.0;
    const Vec3 ab = A.vec_at(0, 0, 0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        top = std::max({top, std::fabs(A.at(0, i, j, g.nz)), std::fabs(A.at(1, i, j, g.nz))});
        bottom_dev = std::max({bottom_dev, std::fabs(A.at(0, i, j, 0) - ab.x),
                               std::fabs(A.at(1, i, j, 0) - ab.y)});
      }
    std::printf("  %s potential: |curl A - u| %.3e top %.3e bottom dev %.3e\n",
                fam.family_name().c_str(), cerr, top, bottom_dev);
    CHECK(cerr < 1e-4);
    CHECK(top < 1e-14);
    CHECK(bottom_dev < 1e-14);
  }
}

TEST_CASE("textbook curl: u = (0,0,sin x)") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 8, 1.0);
  const IdentityMap flat(1.0);
  VectorField u(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        u.set_vec(i, j, k, {0.0, 0.0, std::sin(g.ref_point(i, j, k).x)});
  const VectorField c = mapped_curl(u, flat);
  double err = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 want{0.0, -std::cos(g.ref_point(i, j, k).x), 0.0};
        err = std::max(err, (c.vec_at(i, j, k) - want).norm());
      }
  CHECK(err < 1e-12);
}

TEST_CASE("spectral derivatives are exact on band-limited data") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 8, 1.0);

  // modes up to N/4 horizontally, cubic in z: inside the exactness envelope
  std::vector<double> f(g.nnode()), want_dx(g.nnode()), want_dy(g.nnode());
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 X = g.ref_point(i, j, k);
        const double pz = 1.0 + X.z + 0.5 * X.z * X.z * X.z;
        f[g.sidx(i, j, k)] = std::cos(3.0 * X.x + 2.0 * X.y + 0.3) * pz;
        want_dx[g.sidx(i, j, k)] = -3.0 * std::sin(3.0 * X.x + 2.0 * X.y + 0.3) * pz;
        want_dy[g.sidx(i, j, k)] = -2.0 * std::sin(3.0 * X.x + 2.0 * X.y + 0.3) * pz;
      }
  std::vector<double> dx(g.nnode()), dy(g.nnode());
  horizontal_derivatives(g, f, dx, dy);
  double ex = 0.0, ey = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s) {
    ex = std::max(ex, std::fabs(dx[s] - want_dx[s]));
    ey = std::max(ey, std::fabs(dy[s] - want_dy[s]));
  }
  std::printf("  band-limited derivative err (%.3e, %.3e)\n", ex, ey);
  CHECK(ex < 1e-10);
  CHECK(ey < 1e-10);
}

TEST_CASE("Nyquist bin is annihilated") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 4, 1.0);
  std::vector<double> f(g.nnode());
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        f[g.sidx(i, j, k)] = (i % 2 == 0 ? 1.0 : -1.0);  // pure Nyquist in x
  std::vector<double> dx(g.nnode()), dy(g.nnode());
  horizontal_derivatives(g, f, dx, dy);
  double m = 0.0;
  for (double v : dx) m = std::max(m, std::fabs(v));
  for (double v : dy) m = std::max(m, std::fabs(v));
  CHECK(m < 1e-12);
}

TEST_CASE("fft mode bookkeeping") {
  CHECK(fft_mode(0, 16) == 0);
  CHECK(fft_mode(3, 16) == 3);
  CHECK(fft_mode(8, 16) == 8);    // Nyquist index stays put...
  CHECK(fft_mode(9, 16) == -7);   // ...and the upper half wraps negative
  CHECK(fft_mode(15, 16) == -1);
}

}  // TEST_SUITE
