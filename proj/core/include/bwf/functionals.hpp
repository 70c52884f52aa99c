#pragma once

#include <vector>

#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"
#include "bwf/transport.hpp"

namespace bwf {

struct PhysicalParams {
  double g = 1.0;      // gravity
  double sigma = 0.1;  // surface tension, > 0
  double alpha = 1.0;  // Beltrami / helicity multiplier
  double mu = 0.0;     // volume multiplier
};

// E = int (|curl A|^2 - 2 g z) dV - sigma int dS, K = int A.curl A dV,
// M = cell volume, J = E - alpha K - mu M (assembled from the parts).
struct FunctionalReport {
  double kinetic = 0.0;   // int |u|^2 dV
  double gravity = 0.0;   // -int 2 g z dV
  double surface = 0.0;   // -sigma * area
  double E = 0.0;
  double K = 0.0;
  double M = 0.0;
  double J = 0.0;
};

// u is nominally curl A; callers may pass an analytic curl when they have one.
FunctionalReport evaluate_functionals(const VectorField& A, const VectorField& u,
                                      const DomainMap& map, const Grid& grid,
                                      const PhysicalParams& params);

struct FirstVariation {
  double dE = 0.0, dK = 0.0, dM = 0.0, dJ = 0.0;
};

// Analytic first variation along an admissible pair:
//   dE = 2 int curl(curl A).dA dV + 2 I1 + 2 I2
//        + int (|u|^2 - 2 g z) deta dS + 2 sigma int K_M deta dS,
//   I1 = int [(DA dS).n-cross ...] — the boundary reduction via the dual
//        frame: I1 = int ((grad A) dS x n).u dS, I2 = int (A x j).u dS,
//   dK = 2 int u.dA dV + int (A.u) deta dS,   dM = int deta dS.
FirstVariation first_variation(const VectorField& A, const DomainMap& map,
                               const PhysicalParams& params, const AdmissiblePair& pair);

// Central differences of J along the curve with Richardson extrapolation
// over the two step sizes; gap vs. the supplied analytic value is reported.
struct FdResult {
  double dJ = 0.0;
  double error_estimate = 0.0;  // |richardson - plain central|
};

FdResult finite_difference_dJ(const TransportCurve& curve, const PhysicalParams& params,
                              const Grid& grid, const std::vector<double>& steps = {1e-3, 5e-4});

struct ElResiduals {
  VectorField interior;        // curl(curl A) - alpha curl A
  SurfaceScalar boundary;      // |curl A|^2 + 2 g z - 2 sigma K_M + mu on top
  double interior_norm = 0.0;
  double boundary_norm = 0.0;
  double bernoulli_const_dev = 0.0;  // max-min of |u|^2/2 + g z - 2 sigma K_M on top
};

ElResiduals el_residuals(const VectorField& A, const DomainMap& map, const Grid& grid,
                         const PhysicalParams& params);

}  // namespace bwf
