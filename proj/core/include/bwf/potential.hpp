#pragma once

#include <string>

#include "bwf/biot_savart.hpp"
#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"
#include "bwf/surface.hpp"

namespace bwf {

// Tangential decomposition of a boundary field: B* = grad f0 + (a1, a2) in
// the chart, with B*_1 = B.S_X, B*_2 = B.S_Y. The constants are the cell
// averages of B*; f0 has zero mean. The conservativity defect
// |(B*_2)_X - (B*_1)_Y| (relative) measures n.curl B on the wall and is the
// validity condition of the decomposition.
struct TangentialDecomposition {
  SurfaceScalar f0;
  double a1 = 0.0, a2 = 0.0;
  double defect = 0.0;
};

TangentialDecomposition tangential_decompose(const std::vector<Vec3>& B_wall,
                                             const SurfaceGrid& frames,
                                             double defect_tol = -1.0);

struct PotentialResult {
  VectorField A;
  double m1 = 0.0, m2 = 0.0;      // bottom tangential constants
  double flux_a1 = 0.0, flux_a2 = 0.0;  // face-quadrature side fluxes of u
  // diagnostics (norms relative to ||u||_inf or ||A||_inf as noted)
  double curl_err = 0.0;          // ||curl A - u||_inf / ||u||_inf
  double bc_top = 0.0;            // max |A x n| on top / ||A||_inf
  double bc_bottom_dev = 0.0;     // max deviation of A x n from its mean / ||A||_inf
  double div_A = 0.0;             // ||div A||_inf / ||u||_inf
  double flux_gap1 = 0.0, flux_gap2 = 0.0;  // |a_j - (m2,-m1).lambda_j| / |a_j|
  double tail_estimate = 0.0;
  double conservativity_top = 0.0, conservativity_bottom = 0.0;
  bool within_tolerances = true;
  std::string warnings;           // non-empty => assembled with warnings
};

struct AssembleOptions {
  PvOptions pv;
  double tol_curl = 5e-2;
  double tol_bc = 1e-2;
  double tol_flux = 1e-2;
  double un_tol = 1e-6;    // precondition max|u.n| for membership in Y_T
  bool clean_divergence = false;
};

// Full constructive pipeline: p.v. lattice sum -> tangential decomposition on
// both walls -> harmonic correction (per-mode for flat maps, Dirichlet solves
// otherwise) -> A = B - grad phi - a_top. Constants m = plane mean of A x e3
// at the bottom, equal to (a~2 - a2, a1 - a~1) in terms of the top (a) and
// bottom (a~) decomposition constants; fluxes by face quadrature of u. The
// orientation is the one under which the flux identity a_j = (m2, -m1).lam_j
// holds with a single convention for both faces.
PotentialResult assemble_potential(const VectorField& u, const DomainMap& map,
                                   const Grid& grid, int L,
                                   const AssembleOptions& opts = {});

// Independent flat-slab oracle: per horizontal Fourier mode, solve the 1-D
// curl-inversion system in z directly (gauge A3 = 0, A1 = D1^{-1} u2,
// A2 = -D1^{-1} u1, bottom value 0).
VectorField spectral_potential_flat(const VectorField& u, const DomainMap& map);

// A_clean = A - grad phi with Delta phi = div A, phi = 0 on both walls.
// Because the solve uses the composed div(grad) operator, the measured
// divergence of A_clean is zero to solver tolerance by construction; curl and
// the tangential boundary data are untouched.
VectorField divergence_clean(const VectorField& A, const DomainMap& map, const Grid& grid);

// Side-face fluxes of u: a_j = integral over the face spanned by lambda_j and
// the vertical, oriented by the uniform rule a_j = -int u.[DF(lam_j,0) x DF e3]
// for both faces (reference shear at alpha = 2, d = 1: a1 = pi(1-cos 2) > 0,
// a2 = -pi sin 2).
void face_fluxes(const VectorField& u, const DomainMap& map, double& a1, double& a2);

}  // namespace bwf
