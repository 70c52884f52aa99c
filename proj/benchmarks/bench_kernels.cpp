// Microbenchmarks for the kernels that dominate end-to-end runs: spectral
// plane derivatives, full mapped curl, the single-cell Biot-Savart sum, the
// Dirichlet solve (flat exact path vs. iterative curved path), and the
// functional quadratures. Sizes are chosen so one iteration stays in the
// millisecond range; the lattice-sum benchmark is the exception and runs a
// deliberately tiny cell.

#include <benchmark/benchmark.h>

#include <cmath>

#include "bwf/analytic.hpp"
#include "bwf/biot_savart.hpp"
#include "bwf/domain_map.hpp"
#include "bwf/elliptic.hpp"
#include "bwf/fft.hpp"
#include "bwf/field.hpp"
#include "bwf/functionals.hpp"
#include "bwf/grid.hpp"
#include "bwf/lattice.hpp"
#include "bwf/operators.hpp"
#include "bwf/partition.hpp"
#include "bwf/potential.hpp"

using namespace bwf;

namespace {

Grid make_grid(int n, int nz) {
  return Grid::make(Lattice::square(2.0 * M_PI), n, n, nz, 1.0);
}

VectorField sample_shear(const Grid& g) {
  return evaluate_analytic(AnalyticBeltrami::shear(2.0), g, IdentityMap(1.0));
}

void BM_PlaneDerivatives(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(n, 4);
  std::vector<double> f(g.plane()), dx(g.plane()), dy(g.plane());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec3 X = g.ref_point(i, j, 0);
      f[g.pidx(i, j)] = std::cos(3.0 * X.x + 2.0 * X.y) + 0.3 * std::sin(X.x - X.y);
    }
  for (auto _ : state) {
    plane_derivatives(g, f.data(), dx.data(), dy.data());
    benchmark::DoNotOptimize(dx.data());
  }
}
BENCHMARK(BM_PlaneDerivatives)->Arg(32)->Arg(64)->Arg(128);

void BM_MappedCurl(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(n, n);
  const GraphLiftMap map(1.0, {{0.08, Lattice::square(2.0 * M_PI).wavevector(1, 0), 0.0}});
  const VectorField u = sample_shear(g);
  for (auto _ : state) {
    VectorField c = mapped_curl(u, map);
    benchmark::DoNotOptimize(c.v.data());
  }
}
BENCHMARK(BM_MappedCurl)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BiotSavartCell(benchmark::State& state) {
  const Grid g = make_grid(8, 6);
  const IdentityMap map(1.0);
  const VectorField u = sample_shear(g);
  const PartitionCell part{};
  std::vector<Vec3> targets;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) targets.push_back(g.ref_point(i, j, k));
  for (auto _ : state) {
    std::vector<Vec3> B = biot_savart(u, map, part, 0, 0, targets);
    benchmark::DoNotOptimize(B.data());
  }
}
BENCHMARK(BM_BiotSavartCell)->Unit(benchmark::kMillisecond);

void BM_DirichletFlat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(n, n);
  const IdentityMap map(1.0);
  DirichletProblem prob;
  prob.map = &map;
  prob.rho = ScalarField(g);
  prob.top = SurfaceScalar(g.nx, g.ny);
  prob.bottom = SurfaceScalar(g.nx, g.ny);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 X = g.ref_point(i, j, k);
        prob.rho.at(i, j, k) = std::sin(X.x) * (X.z + 1.0);
      }
  for (auto _ : state) {
    DirichletSolution sol = solve_dirichlet(prob, g);
    benchmark::DoNotOptimize(sol.phi.v.data());
  }
}
BENCHMARK(BM_DirichletFlat)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DirichletGraphLift(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(n, n);
  const GraphLiftMap map(1.0, {{0.08, Lattice::square(2.0 * M_PI).wavevector(1, 0), 0.0}});
  DirichletProblem prob;
  prob.map = &map;
  prob.rho = ScalarField(g);
  prob.top = SurfaceScalar(g.nx, g.ny);
  prob.bottom = SurfaceScalar(g.nx, g.ny);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 X = g.ref_point(i, j, k);
        prob.rho.at(i, j, k) = std::sin(X.x) * (X.z + 1.0);
      }
  for (auto _ : state) {
    DirichletSolution sol = solve_dirichlet(prob, g);
    benchmark::DoNotOptimize(sol.phi.v.data());
  }
}
BENCHMARK(BM_DirichletGraphLift)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Functionals(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(n, n);
  const IdentityMap map(1.0);
  const AnalyticBeltrami fam = AnalyticBeltrami::shear(2.0);
  const VectorField u = evaluate_analytic(fam, g, map);
  const VectorField A = evaluate_analytic_potential(fam, g, map);
  PhysicalParams p;
  p.alpha = 2.0;
  for (auto _ : state) {
    FunctionalReport rep = evaluate_functionals(A, u, map, g, p);
    benchmark::DoNotOptimize(&rep);
  }
}
BENCHMARK(BM_Functionals)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
