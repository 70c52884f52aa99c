/// @file test_elliptic.cpp
/// @brief Dirichlet solver verification: manufactured solutions and structure
///
/// PURPOSE: The corrections in the potential pipeline are only as good as
/// this solver, so we pin it hard:
///
///   1. Manufactured solutions: apply the discrete composed Laplacian to a
///      known phi*, feed the result back, demand phi* to solver tolerance.
///      Because the operator is the exact composition of the discrete
///      divergence and gradient this is an equality test, not a convergence
///      study. Flat and graph-lift maps.
///   2. Discrete maximum principle for harmonic data (rho = 0)
///   3. Linearity in the right-hand side
///   4. Periodic 2-D Poisson: per-mode exact inverse + compatibility guard
///
/// The MMS oracle is mapped_div(mapped_grad(phi*)), built from the public
/// operator stack, never from solver internals.

#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"

#include "bwf/domain_map.hpp"
#include "bwf/elliptic.hpp"
#include "bwf/errors.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"
#include "bwf/lattice.hpp"
#include "bwf/operators.hpp"
#include "bwf/rng.hpp"

using namespace bwf;

namespace {
const double PI = M_PI;

ScalarField sample_phi(const Grid& g, const DomainMap& map) {
  ScalarField phi(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 x = map.value(g.ref_point(i, j, k));
        phi.at(i, j, k) = std::sin(x.x) * (x.z + map.depth()) +
                          0.2 * std::cos(x.x + x.y) * x.z * x.z;
      }
  return phi;
}

double mms_error(const DomainMap& map, const Grid& g) {
  const ScalarField phis = sample_phi(g, map);
  DirichletProblem prob;
  prob.map = &map;
  prob.rho = mapped_div(mapped_grad(phis, map), map);
  prob.top = SurfaceScalar(g.nx, g.ny);
  prob.bottom = SurfaceScalar(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      prob.top.at(i, j) = phis.at(i, j, g.nz);
      prob.bottom.at(i, j) = phis.at(i, j, 0);
    }
  const DirichletSolution sol = solve_dirichlet(prob, g);
  double err = 0.0;
  for (std::size_t s = 0; s < sol.phi.v.size(); ++s)
    err = std::max(err, std::fabs(sol.phi.v[s] - phis.v[s]));
  std::printf("  %s MMS: err %.3e residual %.3e iters %d\n", map.kind_name().c_str(), err,
              sol.residual, sol.iterations);
  return err;
}
}  // namespace

TEST_SUITE("elliptic") {

TEST_CASE("manufactured solution, flat slab") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 16, 16, 12, 1.0);
  const IdentityMap flat(1.0);
  CHECK(mms_error(flat, g) < 1e-9);
}

TEST_CASE("manufactured solution, graph-lift map") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 12, 12, 12, 1.0);
  const GraphLiftMap map(1.0, {{0.08, lat.wavevector(1, 0), 0.0}, {0.05, lat.wavevector(0, 1), 0.7}});
  CHECK(mms_error(map, g) < 1e-8);
}

TEST_CASE("harmonic solutions obey the maximum principle") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 12, 12, 10, 1.0);
  const GraphLiftMap map(1.0, {{0.06, lat.wavevector(1, 1), 0.3}});

  DirichletProblem prob;
  prob.map = &map;
  prob.top = SurfaceScalar(g.nx, g.ny);
  prob.bottom = SurfaceScalar(g.nx, g.ny);
  double lo = 1e300, hi = -1e300;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 X = g.ref_point(i, j, g.nz);
      prob.top.at(i, j) = std::cos(X.x) + 0.4 * std::sin(X.y);
      prob.bottom.at(i, j) = 0.5 * std::sin(2.0 * X.x);
      lo = std::min({lo, prob.top.at(i, j), prob.bottom.at(i, j)});
      hi = std::max({hi, prob.top.at(i, j), prob.bottom.at(i, j)});
    }
  const DirichletSolution sol = solve_dirichlet(prob, g);
  double smin = 1e300, smax = -1e300;
  for (double v : sol.phi.v) {
    smin = std::min(smin, v);
    smax = std::max(smax, v);
  }
  std::printf("  data range [%.4f, %.4f], solution range [%.4f, %.4f]\n", lo, hi, smin, smax);
  // small slack: the discrete operator is spectral, not an M-matrix
  const double slack = 1e-3 * (hi - lo);
  CHECK(smin >= lo - slack);
  CHECK(smax <= hi + slack);
}

TEST_CASE("linearity in the right-hand side") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 12, 12, 8, 1.0);
  const GraphLiftMap map(1.0, {{0.05, lat.wavevector(1, 0), 0.2}});

  Rng rng(11);
  ScalarField r1(g), r2(g);
  for (std::size_t s = 0; s < r1.v.size(); ++s) {
    r1.v[s] = rng.uniform(-1.0, 1.0);
    r2.v[s] = rng.uniform(-1.0, 1.0);
  }
  auto solve_with = [&](const ScalarField& rho) {
    DirichletProblem p;
    p.map = &map;
    p.rho = rho;
    p.top = SurfaceScalar(g.nx, g.ny);
    p.bottom = SurfaceScalar(g.nx, g.ny);
    return solve_dirichlet(p, g);
  };
  const double a = 0.7, b = -1.3;
  ScalarField rc(g);
  for (std::size_t s = 0; s < rc.v.size(); ++s) rc.v[s] = a * r1.v[s] + b * r2.v[s];
  const ScalarField s1 = solve_with(r1).phi, s2 = solve_with(r2).phi, sc = solve_with(rc).phi;
  double err = 0.0, scale = 0.0;
  for (std::size_t s = 0; s < sc.v.size(); ++s) {
    err = std::max(err, std::fabs(sc.v[s] - a * s1.v[s] - b * s2.v[s]));
    scale = std::max(scale, std::fabs(sc.v[s]));
  }
  std::printf("  linearity gap %.3e (scale %.3e)\n", err, scale);
  CHECK(err < 1e-8 * (scale + 1.0));
}

TEST_CASE("zero data gives the zero solution") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 8, 8, 6, 1.0);
  const IdentityMap flat(1.0);
  DirichletProblem p;
  p.map = &flat;
  p.top = SurfaceScalar(g.nx, g.ny);
  p.bottom = SurfaceScalar(g.nx, g.ny);
  const DirichletSolution sol = solve_dirichlet(p, g);
  CHECK(sol.phi.inf_norm() == 0.0);
  CHECK(sol.residual == 0.0);
}

TEST_CASE("boundary data size mismatch is rejected") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const Grid g = Grid::make(lat, 8, 8, 6, 1.0);
  const IdentityMap flat(1.0);
  DirichletProblem p;
  p.map = &flat;
  p.top = SurfaceScalar(4, 4);  // wrong plane size
  p.bottom = SurfaceScalar(g.nx, g.ny);
  CHECK_THROWS_AS(solve_dirichlet(p, g), Error);
}

TEST_CASE("periodic 2-D Poisson: mode inverse and compatibility") {
  const Lattice lat = Lattice::square(2.0 * PI);
  const int n = 16;
  SurfaceScalar src(n, n);
  // Delta f = -(|k|^2) cos(k.x) with k = (2,1): feed the right-hand side,
  // expect f back exactly (single mode, spectral solve)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double X = 2.0 * PI * i / n, Y = 2.0 * PI * j / n;
      src.at(i, j) = -5.0 * std::cos(2.0 * X + Y);
    }
  const SurfaceScalar f = solve_periodic_poisson_2d(lat, src);
  double err = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double X = 2.0 * PI * i / n, Y = 2.0 * PI * j / n;
      err = std::max(err, std::fabs(f.at(i, j) - std::cos(2.0 * X + Y)));
    }
  CHECK(err < 1e-12);

  SurfaceScalar biased(n, n);
  for (double& v : biased.v) v = 1.0;  // nonzero mean: incompatible
  CHECK_THROWS_AS(solve_periodic_poisson_2d(lat, biased), Error);
}

}  // TEST_SUITE
