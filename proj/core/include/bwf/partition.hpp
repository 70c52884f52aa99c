#pragma once

#include "bwf/vec.hpp"

namespace bwf {

// Tensor-product partition-of-unity weight in lattice coordinates. The 1-D
// factor is 1 on the inner [1/4, 3/4] band of the cell and ramps through a C3
// smoothstep of width 1/2 centred on each cell edge, so integer translates
// sum to 1 exactly (the two ramps covering an edge are exact complements).
// Support of the cell weight is (-1/4, 5/4) per axis — within the 3x3
// neighbourhood of the cell.
struct PartitionCell {
  // w1(a) for the (0,0) cell; translates are w1(a - l).
  static double w1(double a) {
    return smoothstep((a + 0.25) * 2.0) - smoothstep((a - 0.75) * 2.0);
  }

  // weight of translate (l, j) at lattice coordinates (a1, a2)
  double weight(double a1, double a2, int l = 0, int j = 0) const {
    return w1(a1 - static_cast<double>(l)) * w1(a2 - static_cast<double>(j));
  }

  // Aggregate window weight of the target-centred lattice sum along one axis:
  // 1 for |off| <= L cells, C3 ramp to 0 on [L, L+1]. Any smooth aggregate
  // with this plateau corresponds to an admissible choice of partition; the
  // width-1 ramp is the variant whose accuracy was calibrated.
  static double envelope(double off, int L) {
    return smoothstep(static_cast<double>(L + 1) - std::fabs(off));
  }
};

}  // namespace bwf
