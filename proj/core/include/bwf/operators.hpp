#pragma once

#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"

namespace bwf {

// Physical-space derivatives of a sampled field on the mapped cell:
// reference derivatives (spectral in a1, a2 via the reciprocal chain rule,
// 6th-order FD in Z) composed with DF^{-T} pointwise.
struct MappedDerivs {
  VectorField curl;
  ScalarField div;
  VectorField grad1, grad2, grad3;  // physical gradients of the components
};

MappedDerivs mapped_derivatives(const VectorField& field, const DomainMap& map);

// Cheaper entry points when only part of the derivative data is needed.
VectorField mapped_curl(const VectorField& field, const DomainMap& map);
ScalarField mapped_div(const VectorField& field, const DomainMap& map);
VectorField mapped_grad(const ScalarField& s, const DomainMap& map);

struct BeltramiResiduals {
  double curl_minus_alpha_u = 0.0;  // inf-norm
  double div_u = 0.0;               // inf-norm
  double un_top = 0.0;              // max |u.n| on the surface
  double un_bottom = 0.0;           // max |u.n| at z = -d
};

BeltramiResiduals beltrami_residuals(const VectorField& field, const DomainMap& map,
                                     double alpha);

// p = C - |u|^2/2 - g z (z = physical height of the node)
ScalarField bernoulli_pressure(const VectorField& field, const DomainMap& map, double C,
                               double g);

}  // namespace bwf
