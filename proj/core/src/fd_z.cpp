#include "bwf/fd_z.hpp"

#include <cstddef>

#include "bwf/errors.hpp"

namespace bwf {

// Sixth-order first-derivative matrix on a uniform grid of n+1 levels.
// Interior rows use the centred 7-point stencil; the three rows nearest each
// wall use one-sided 7-point stencils (top rows are the bottom rows mirrored
// and negated).
std::vector<double> d1_matrix(int nz, double hz) {
  if (nz < 6) throw Error(ErrorKind::config, "d1_matrix", "need nz >= 6");
  const int n = nz + 1;
  std::vector<double> d1(static_cast<std::size_t>(n) * n, 0.0);
  auto row = [&](int i) { return d1.data() + static_cast<std::size_t>(i) * n; };

  const double s = 1.0 / (60.0 * hz);
  const double c0[7] = {-147.0, 360.0, -450.0, 400.0, -225.0, 72.0, -10.0};
  const double c1[7] = {-10.0, -77.0, 150.0, -100.0, 50.0, -15.0, 2.0};
  const double c2[7] = {2.0, -24.0, -35.0, 80.0, -30.0, 8.0, -1.0};
  const double ci[7] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};

  for (int q = 0; q < 7; ++q) {
    row(0)[q] = c0[q] * s;
    row(1)[q] = c1[q] * s;
    row(2)[q] = c2[q] * s;
    // mirrored, negated rows at the far wall
    row(n - 1)[n - 1 - q] = -c0[q] * s;
    row(n - 2)[n - 1 - q] = -c1[q] * s;
    row(n - 3)[n - 1 - q] = -c2[q] * s;
  }
  for (int i = 3; i <= n - 4; ++i)
    for (int q = 0; q < 7; ++q) row(i)[i - 3 + q] = ci[q] * s;
  return d1;
}

void apply_d1(const Grid& g, const std::vector<double>& d1,
              const double* in, double* out) {
  const int n = g.nlev();
  const std::size_t plane = static_cast<std::size_t>(g.plane());
  for (int k = 0; k < n; ++k) {
    const double* drow = d1.data() + static_cast<std::size_t>(k) * n;
    double* orow = out + static_cast<std::size_t>(k) * plane;
    for (std::size_t p = 0; p < plane; ++p) orow[p] = 0.0;
    for (int l = 0; l < n; ++l) {
      const double w = drow[l];
      if (w == 0.0) continue;
      const double* irow = in + static_cast<std::size_t>(l) * plane;
      for (std::size_t p = 0; p < plane; ++p) orow[p] += w * irow[p];
    }
  }
}

// Weights of the degree-6 Lagrange interpolant through nodes {0,1,...,6},
// evaluated at t.
std::array<double, 7> lagrange7(double t) {
  std::array<double, 7> w{};
  for (int q = 0; q < 7; ++q) {
    double num = 1.0, den = 1.0;
    for (int r = 0; r < 7; ++r) {
      if (r == q) continue;
      num *= t - r;
      den *= q - r;
    }
    w[static_cast<std::size_t>(q)] = num / den;
  }
  return w;
}

}  // namespace bwf
