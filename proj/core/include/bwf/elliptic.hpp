#pragma once

#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"

namespace bwf {

// Dirichlet problem for the physical Laplacian on the mapped cell, pulled
// back to reference coordinates as the composition of the physical gradient
// (DF^{-T} grad_ref) with the physical divergence applied row by row, with
// Dirichlet data on the top/bottom walls (given in the (X,Y) chart) and
// lattice periodicity horizontally.
struct DirichletProblem {
  const DomainMap* map = nullptr;
  ScalarField rho;         // physical source; zero-size means rho = 0
  SurfaceScalar top;       // phi at z-level nz
  SurfaceScalar bottom;    // phi at z-level 0
};

struct DirichletSolution {
  ScalarField phi;
  VectorField grad;        // physical gradient of phi
  double residual = 0.0;   // relative residual of the discrete operator
  int iterations = 0;      // 0 for the exact per-mode flat path
};

// Discretization: spectral in (a1, a2), 6th-order FD in Z. The discrete
// Laplacian is the exact composition of the discrete divergence and gradient,
// so divergence cleaning with this solve annihilates the measured divergence
// by construction. Flat maps are solved exactly per Fourier mode (dense LU of
// the composed 1-D operator); curved maps run BiCGStab preconditioned by the
// flat solve.
DirichletSolution solve_dirichlet(const DirichletProblem& problem, const Grid& grid,
                                  double tol = 1e-10, int max_iter = 500);

// Spectral solve of the flat 2-D periodic Poisson problem on the lattice:
// Delta2 f0 = source, mean(f0) = 0. Source must have (near-)zero mean.
SurfaceScalar solve_periodic_poisson_2d(const Lattice& lat, const SurfaceScalar& source,
                                        double compat_tol = 1e-8);

}  // namespace bwf
