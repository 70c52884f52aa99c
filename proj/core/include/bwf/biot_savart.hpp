#pragma once

#include <vector>

#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"
#include "bwf/partition.hpp"
#include "bwf/vec.hpp"

namespace bwf {

// Plain quadrature Biot-Savart evaluation:
//   out(x) = (1/4pi) sum_s moment_s x (x - y_s) / |x - y_s|^3
// where moment_s already carries weight * u * dV. Deterministic: the source
// loop order is fixed; targets are parallelized with disjoint writes.
std::vector<Vec3> biot_savart_points(const std::vector<Vec3>& src_pos,
                                     const std::vector<Vec3>& src_moment,
                                     const std::vector<Vec3>& targets, int threads = 1);

// One partition-weighted cell contribution B_lj = BS(phi_lj u) evaluated at
// arbitrary physical targets. Sources sit at staggered midpoints (half-cell
// offset in every direction) over the 3x3 cell support of phi_lj, translated
// by l lambda1 + j lambda2.
std::vector<Vec3> biot_savart(const VectorField& u, const DomainMap& map,
                              const PartitionCell& part, int l, int j,
                              const std::vector<Vec3>& targets, int threads = 1);

struct PvOptions {
  int xy_refine = 2;          // in-plane source refinement factor
  int pad_layers = 4;         // extrapolated source layers beyond each wall
  bool tail_completion = true;  // analytic mean-sheet completion of the tail
  int threads = 1;
};

struct PvResult {
  VectorField B;
  double tail_estimate = 0.0;   // bound on the dropped (non-completed) tail
  double pair_decay_C = 0.0;    // fitted C of the C/(1+|l|^3+|j|^3) model
};

// Principal-value lattice sum of cell Biot-Savart contributions, evaluated at
// every grid node (optionally shifted by whole lattice vectors — the result
// is shift-invariant by construction).
//
// The summation window is target-centred: each target uses the partition
// aggregate re-centred on its own cell (PartitionCell::envelope per axis, in
// a separable per-offset weight table), which makes B exactly
// lattice-periodic and is equivalent to the symmetric (l,j)+(-l,-j) pairing
// of a partition centred at the target. Sources sit on an xy_refine-times
// refined staggered in-plane lattice at the nz interval midpoints;
// pad_layers extra layers beyond each wall are filled by 7-point Lagrange
// continuation in z. With tail_completion the horizontal-mean (sheet) part of
// every layer is completed to the infinite lattice analytically.
PvResult pv_lattice_sum(const VectorField& u, const DomainMap& map, const PartitionCell& part,
                        int L, const PvOptions& opts = {}, int shift_l = 0, int shift_j = 0);

}  // namespace bwf
