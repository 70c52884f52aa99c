/// @file test_functionals.cpp
/// @brief Energy/helicity/volume functionals, transport, first variation
///
/// PURPOSE: Verify the variational layer against values that can be written
/// down in closed form, and cross-check every derivative formula against an
/// independent evaluation:
///
///   1. Geometric functional values on the unit slab (gravity 4 pi^2,
///      surface -0.4 pi^2 at sigma = 0.1, volume 4 pi^2) — quadrature-exact.
///   2. Shear closed forms: kinetic energy 4 pi^2 exactly, helicity
///      K = 2 pi^2 (1 - sin 2 / 2) from the z-line integral of A.u.
///   3. Transport is the identity on the flat slab, invertible on curved
///      maps, and carries reference-tangential walls to A x n = 0 walls.
///   4. make_admissible realizes the requested surface perturbation and
///      satisfies the admissibility residuals it reports.
///   5. First-variation bookkeeping against independent quadrature on an
///      interior (dF = 0) pair, and the zero-field surface variation where
///      every term vanishes by symmetry.
///   6. finite_difference_dJ: zero along a frozen curve, rejects bad steps,
///      converts diffeomorphism loss into a step_size error.
///   7. Euler-Lagrange residuals: the critical shear state passes at
///      mu = -1, an off-critical modal state shows an O(1) boundary defect.
///   8. Helicity is invariant under divergence cleaning (gauge shift with
///      zero wall trace).

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "doctest.h"

#include "bwf/analytic.hpp"
#include "bwf/domain_map.hpp"
#include "bwf/errors.hpp"
#include "bwf/field.hpp"
#include "bwf/functionals.hpp"
#include "bwf/grid.hpp"
#include "bwf/lattice.hpp"
#include "bwf/operators.hpp"
#include "bwf/potential.hpp"
#include "bwf/surface.hpp"
#include "bwf/transport.hpp"

using namespace bwf;

namespace {
const double PI = M_PI;
const double PI2 = M_PI * M_PI;
}

TEST_SUITE("functionals") {

TEST_CASE("geometric functional values on the unit slab") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 12, 1.0);
  const IdentityMap flat(1.0);
  PhysicalParams p;
  p.mu = 0.3;
  const VectorField zero(g);
  const FunctionalReport rep = evaluate_functionals(zero, zero, flat, g, p);
  std::printf("  kinetic %.3e gravity %.12f surface %.12f M %.12f\n", rep.kinetic, rep.gravity,
              rep.surface, rep.M);
  CHECK(rep.kinetic == 0.0);
  CHECK(rep.gravity == doctest::Approx(4.0 * PI2).epsilon(1e-12));
  CHECK(rep.surface == doctest::Approx(-0.4 * PI2).epsilon(1e-12));
  CHECK(rep.M == doctest::Approx(4.0 * PI2).epsilon(1e-12));
  CHECK(rep.E == doctest::Approx(rep.kinetic + rep.gravity + rep.surface).epsilon(1e-14));
  CHECK(rep.J == doctest::Approx(rep.E - p.alpha * rep.K - p.mu * rep.M).epsilon(1e-14));
}

TEST_CASE("shear closed forms: kinetic energy and helicity") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 16, 1.0);
  const IdentityMap flat(1.0);
  const AnalyticBeltrami fam = AnalyticBeltrami::shear(2.0);
  const VectorField u = evaluate_analytic(fam, g, flat);
  const VectorField A = evaluate_analytic_potential(fam, g, flat);
  PhysicalParams p;
  p.alpha = 2.0;
  p.mu = -1.0;
  const FunctionalReport rep = evaluate_functionals(A, u, flat, g, p);

  // helicity line integral in closed form: K = 2 pi^2 (2 - sin 2)
  const double Kx = 2.0 * PI2 * (2.0 - std::sin(2.0)) / 2.0 * 1.0;  // == 2 pi^2 (1 - sin2/2)
  std::printf("  kinetic %.12f (4pi^2 %.12f)\n", rep.kinetic, 4.0 * PI2);
  std::printf("  K %.9f (exact %.9f, gap %.3e)\n", rep.K, Kx, std::fabs(rep.K - Kx));
  CHECK(rep.kinetic == doctest::Approx(4.0 * PI2).epsilon(1e-12));
  CHECK(std::fabs(rep.K - Kx) < 1e-4);
  CHECK(rep.J == doctest::Approx(rep.E - 2.0 * rep.K + rep.M).epsilon(1e-12));
}

TEST_CASE("transport: identity slab, curved round trip, wall equivalence") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 12, 12, 8, 1.0);
  const IdentityMap flat(1.0);
  const GraphLiftMap lift(1.0, {{0.08, lat.wavevector(1, 0), 0.0}, {0.05, lat.wavevector(1, 1), 0.4}});

  VectorField Ahat(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 X = g.ref_point(i, j, k);
        // reference-tangential components vanish on the top wall (Z = 0)
        Ahat.set_vec(i, j, k,
                     {std::sin(X.x) * X.z, std::cos(X.y) * X.z, 0.3 + 0.2 * std::cos(X.x + X.y)});
      }

  // flat: transport is the identity
  const VectorField Tflat = transport(flat, Ahat);
  double gap = 0.0;
  for (std::size_t s = 0; s < Ahat.v.size(); ++s)
    gap = std::max(gap, std::fabs(Tflat.v[s] - Ahat.v[s]));
  CHECK(gap < 1e-15);

  // curved: exact round trip
  const VectorField A = transport(lift, Ahat);
  const VectorField back = transport_inverse(lift, A);
  gap = 0.0;
  for (std::size_t s = 0; s < Ahat.v.size(); ++s)
    gap = std::max(gap, std::fabs(back.v[s] - Ahat.v[s]));
  std::printf("  round-trip gap %.3e\n", gap);
  CHECK(gap < 1e-12);

  // (Ahat_1, Ahat_2) = 0 at the top wall <=> A x n = 0 there
  double bc = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 X = g.ref_point(i, j, g.nz);
      const SurfaceFrame fr = build_frame(lift, X.x, X.y);
      bc = std::max(bc, cross(A.vec_at(i, j, g.nz), fr.n).inf_norm());
    }
  std::printf("  top |A x n| %.3e\n", bc);
  CHECK(bc < 1e-13);
}

TEST_CASE("admissible pairs realize the requested perturbation") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 12, 1.0);
  const AnalyticBeltrami fam = AnalyticBeltrami::shear(2.0);
  const std::vector<EtaMode> deta{{0.1, lat.wavevector(1, 0), 0.0}};

  SUBCASE("flat base") {
    auto flat = std::make_shared<IdentityMap>(1.0);
    const VectorField A = evaluate_analytic_potential(fam, g, *flat);
    const AdmissibleResult res = make_admissible(flat, A, deta);
    std::printf("  flat: var5 %.3e bottom %.3e deta_gap %.3e [%s]\n", res.pair.var5_residual,
                res.pair.bottom_dAxn, res.pair.deta_gap, res.pair.provenance.c_str());
    CHECK(res.pair.var5_residual < 1e-8);
    CHECK(res.pair.bottom_dAxn < 1e-12);
    CHECK(res.pair.deta_gap < 1e-12);
    CHECK(res.pair.provenance == "transport-generated");
    // on the flat slab the top displacement is exactly deta e3
    double dgap = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 X = g.ref_point(i, j, g.nz);
        const Vec3 want{0.0, 0.0, 0.1 * std::cos(X.x)};
        dgap = std::max(dgap, (res.pair.dF.vec_at(i, j, g.nz) - want).inf_norm());
      }
    CHECK(dgap < 1e-13);
  }

  SUBCASE("zero perturbation is the zero pair") {
    auto flat = std::make_shared<IdentityMap>(1.0);
    const VectorField A = evaluate_analytic_potential(fam, g, *flat);
    const AdmissibleResult res = make_admissible(flat, A, {});
    CHECK(res.pair.dF.inf_norm() == 0.0);
    CHECK(res.pair.dA.inf_norm() == 0.0);
    CHECK(res.pair.deta.inf_norm() == 0.0);
  }

  SUBCASE("graph-lift base") {
    auto lift = std::make_shared<GraphLiftMap>(
        1.0, std::vector<EtaMode>{{0.07, lat.wavevector(1, 0), 0.3}});
    // transported flat closed form keeps A x n = 0 on the curved top
    const IdentityMap ref(1.0);
    const VectorField A = transport(*lift, evaluate_analytic_potential(fam, g, ref));
    const AdmissibleResult res = make_admissible(lift, A, deta);
    std::printf("  lift: var5 %.3e bottom %.3e deta_gap %.3e\n", res.pair.var5_residual,
                res.pair.bottom_dAxn, res.pair.deta_gap);
    CHECK(res.pair.var5_residual < 1e-6);
    CHECK(res.pair.bottom_dAxn < 1e-10);
    CHECK(res.pair.deta_gap < 1e-10);
  }
}

TEST_CASE("first variation bookkeeping on an interior pair") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 12, 12, 10, 1.0);
  const IdentityMap flat(1.0);
  const AnalyticBeltrami fam = AnalyticBeltrami::shear(2.0);
  const VectorField A = evaluate_analytic_potential(fam, g, flat);

  AdmissiblePair pair;
  pair.dF = VectorField(g);
  pair.deta = SurfaceScalar(g.nx, g.ny);
  pair.dA = VectorField(g);
  pair.provenance = "manual";
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 x = g.ref_point(i, j, k);
        const double w = x.z * (x.z + 1.0);  // tangential parts vanish on both walls
        pair.dA.set_vec(i, j, k, {std::sin(x.x) * w, std::cos(x.y) * w, 0.2 * std::cos(x.x + x.y)});
      }

  PhysicalParams p;
  p.alpha = 2.0;
  p.mu = -1.0;
  const FirstVariation fv = first_variation(A, flat, p, pair);

  // independent quadrature of the interior formulas
  const VectorField u = mapped_curl(A, flat);
  const VectorField ccA = mapped_curl(u, flat);
  const Quadrature q(g, flat);
  std::vector<double> se(g.nnode()), sk(g.nnode());
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t s = g.sidx(i, j, k);
        se[s] = dot(ccA.vec_at(i, j, k), pair.dA.vec_at(i, j, k));
        sk[s] = dot(u.vec_at(i, j, k), pair.dA.vec_at(i, j, k));
      }
  const double dE_ref = 2.0 * integrate_volume(q, se);
  const double dK_ref = 2.0 * integrate_volume(q, sk);
  std::printf("  dE %.12f (ref %.12f)  dK %.12f (ref %.12f)  dM %.2e\n", fv.dE, dE_ref, fv.dK,
              dK_ref, fv.dM);
  CHECK(fv.dE == doctest::Approx(dE_ref).epsilon(1e-10));
  CHECK(fv.dK == doctest::Approx(dK_ref).epsilon(1e-10));
  CHECK(fv.dM == 0.0);
  CHECK(fv.dJ == doctest::Approx(fv.dE - p.alpha * fv.dK - p.mu * fv.dM).epsilon(1e-12));
}

TEST_CASE("zero-field surface variation vanishes term by term") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 12, 12, 8, 1.0);
  auto flat = std::make_shared<IdentityMap>(1.0);
  const VectorField A0(g);
  const AdmissibleResult res = make_admissible(flat, A0, {{0.1, lat.wavevector(1, 0), 0.0}});
  PhysicalParams p;
  p.mu = 0.7;
  const FirstVariation fv = first_variation(A0, *flat, p, res.pair);
  std::printf("  dE %.3e dK %.3e dM %.3e dJ %.3e\n", fv.dE, fv.dK, fv.dM, fv.dJ);
  // u = 0, z = 0 on the top, K_M = 0, and deta integrates to zero
  CHECK(std::fabs(fv.dE) < 1e-12);
  CHECK(std::fabs(fv.dK) < 1e-12);
  CHECK(std::fabs(fv.dM) < 1e-12);
  CHECK(std::fabs(fv.dJ) < 1e-12);
}

TEST_CASE("finite differencing along transport curves") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 12, 12, 8, 1.0);
  auto flat = std::make_shared<IdentityMap>(1.0);
  const AnalyticBeltrami fam = AnalyticBeltrami::shear(2.0);
  const VectorField A = evaluate_analytic_potential(fam, g, *flat);
  PhysicalParams p;
  p.alpha = 2.0;
  p.mu = -1.0;

  SUBCASE("frozen curve differentiates to zero") {
    const AdmissibleResult res = make_admissible(flat, A, {});
    const FdResult fd = finite_difference_dJ(res.curve, p, g);
    std::printf("  frozen dJ %.3e (est %.3e)\n", fd.dJ, fd.error_estimate);
    CHECK(std::fabs(fd.dJ) < 1e-8);
  }

  SUBCASE("invalid step lists are rejected") {
    const AdmissibleResult res = make_admissible(flat, A, {{0.1, lat.wavevector(1, 0), 0.0}});
    CHECK_THROWS_AS(finite_difference_dJ(res.curve, p, g, {}), Error);
    CHECK_THROWS_AS(finite_difference_dJ(res.curve, p, g, {-1e-3, 5e-4}), Error);
  }

  SUBCASE("diffeomorphism loss surfaces as step_size") {
    const AdmissibleResult res = make_admissible(flat, A, {{1e6, lat.wavevector(1, 0), 0.0}});
    try {
      finite_difference_dJ(res.curve, p, g);
      FAIL("expected a step_size error");
    } catch (const Error& e) {
      std::printf("  step_size error: %s\n", e.what());
      CHECK(e.kind() == ErrorKind::step_size);
    }
  }
}

TEST_CASE("Euler-Lagrange residuals: critical and off-critical states") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 24, 24, 24, 1.0);
  const IdentityMap flat(1.0);

  PhysicalParams p;
  p.alpha = 2.0;
  p.mu = -1.0;
  const AnalyticBeltrami shear = AnalyticBeltrami::shear(2.0);
  const ElResiduals crit = el_residuals(evaluate_analytic_potential(shear, g, flat), flat, g, p);
  std::printf("  shear: interior %.3e boundary %.3e bernoulli dev %.3e\n", crit.interior_norm,
              crit.boundary_norm, crit.bernoulli_const_dev);
  CHECK(crit.interior_norm < 1e-5);
  CHECK(crit.boundary_norm < 1e-5);
  CHECK(crit.bernoulli_const_dev < 1e-5);

  const AnalyticBeltrami modal = AnalyticBeltrami::modal(lat.wavevector(1, 1), 1, 1.0);
  PhysicalParams pm;
  pm.alpha = modal.alpha;
  pm.mu = -1.0;
  const ElResiduals off = el_residuals(evaluate_analytic_potential(modal, g, flat), flat, g, pm);
  std::printf("  modal: interior %.3e boundary %.3e\n", off.interior_norm, off.boundary_norm);
  CHECK(off.interior_norm < 1e-4);   // still a Beltrami field
  CHECK(off.boundary_norm > 0.1);    // but not a critical point of J

  const VectorField zero(g);
  PhysicalParams pz;
  pz.mu = 0.0;
  const ElResiduals zr = el_residuals(zero, flat, g, pz);
  CHECK(zr.interior_norm == 0.0);
  CHECK(zr.boundary_norm == 0.0);
  CHECK(zr.bernoulli_const_dev == 0.0);
}

TEST_CASE("helicity is gauge invariant under divergence cleaning") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 12, 1.0);
  const IdentityMap flat(1.0);
  const AnalyticBeltrami fam = AnalyticBeltrami::shear(2.0);
  const VectorField u = evaluate_analytic(fam, g, flat);
  VectorField A = evaluate_analytic_potential(fam, g, flat);

  // pollute with a zero-trace gradient, then clean
  ScalarField chi(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 x = g.ref_point(i, j, k);
        chi.at(i, j, k) = 0.4 * std::cos(x.x + x.y) * x.z * (x.z + 1.0);
      }
  VectorField Ad = A;
  const VectorField gc = mapped_grad(chi, flat);
  for (std::size_t s = 0; s < Ad.v.size(); ++s) Ad.v[s] += gc.v[s];

  PhysicalParams p;
  p.alpha = 2.0;
  p.mu = -1.0;
  const FunctionalReport r0 = evaluate_functionals(A, u, flat, g, p);
  const FunctionalReport r1 = evaluate_functionals(divergence_clean(Ad, flat, g), u, flat, g, p);
  std::printf("  K %.12f vs %.12f (gap %.3e)\n", r0.K, r1.K, std::fabs(r1.K - r0.K));
  CHECK(std::fabs(r1.K - r0.K) < 1e-7);
  CHECK(std::fabs(r1.J - r0.J) < 1e-6);
}

}  // TEST_SUITE
