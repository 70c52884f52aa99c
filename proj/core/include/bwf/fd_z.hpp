#pragma once

#include <array>
#include <vector>

#include "bwf/field.hpp"
#include "bwf/grid.hpp"

namespace bwf {

// Dense first-derivative matrix on the nlev = n+1 uniform z-levels:
// 7-point 6th-order interior stencil with 6th-order one-sided closures.
// Row-major (nlev x nlev). Dense is fine at desk scale and keeps the
// composed div(grad) operator exactly representable per Fourier mode.
std::vector<double> d1_matrix(int nz, double hz);

// out = D1 * in along z for every (i, j) column of a scalar block.
void apply_d1(const Grid& g, const std::vector<double>& d1, const double* in, double* out);

// Lagrange interpolation weights through the 7 nodes z_first..z_first+6 (step
// hz, offset origin irrelevant): value at node index t (fractional, measured
// from z_first in units of hz). Used to move fields between node levels and
// staggered source layers, and to extrapolate into the pad.
std::array<double, 7> lagrange7(double t);

}  // namespace bwf
