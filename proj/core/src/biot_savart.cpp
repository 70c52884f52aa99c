#include "bwf/biot_savart.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "bwf/errors.hpp"
#include "bwf/fft.hpp"
#include "bwf/parallel.hpp"

namespace bwf {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

int floordiv(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
int floormod(int a, int b) { return a - floordiv(a, b) * b; }

// Lagrange interpolation weights on integer nodes 0..nw-1 at parameter t.
void lagrange_w(int nw, double t, double* w) {
  for (int q = 0; q < nw; ++q) {
    double num = 1.0, den = 1.0;
    for (int r = 0; r < nw; ++r) {
      if (r == q) continue;
      num *= t - r;
      den *= q - r;
    }
    w[q] = num / den;
  }
}

// u resampled onto the staggered refined source lattice, layer by layer:
// in-plane spectral resampling at the interval midpoints, 7-point Lagrange
// continuation in z (interpolation inside, extrapolation for pad layers).
struct FineLayers {
  int M1 = 0, M2 = 0, NL = 0, pad = 0;
  std::vector<double> z;     // reference layer heights, NL entries
  std::vector<double> u[3];  // [NL][M2*M1], layer-major
};

FineLayers build_fine_layers(const VectorField& field, int xyr, int pad) {
  const Grid& g = field.grid;
  FineLayers fl;
  fl.M1 = g.nx * xyr;
  fl.M2 = g.ny * xyr;
  fl.pad = pad;
  fl.NL = g.nz + 2 * pad;
  const std::size_t fine = static_cast<std::size_t>(fl.M1) * fl.M2;
  fl.z.resize(static_cast<std::size_t>(fl.NL));
  for (int c = 0; c < 3; ++c) fl.u[c].assign(fine * static_cast<std::size_t>(fl.NL), 0.0);

  const int nw = std::min(7, g.nlev());
  std::vector<double> comb(g.plane());
  double w[7];
  for (int li = 0; li < fl.NL; ++li) {
    const int ks = li - pad;
    const double lev = ks + 0.5;  // z in level units from the bottom
    int kb = static_cast<int>(std::floor(lev)) - (nw - 1) / 2;
    kb = std::clamp(kb, 0, g.nlev() - nw);
    lagrange_w(nw, lev - kb, w);
    fl.z[static_cast<std::size_t>(li)] = -g.d + lev * g.hz();
    for (int c = 0; c < 3; ++c) {
      const double* comp = field.component(c);
      for (std::size_t p = 0; p < g.plane(); ++p) {
        double acc = 0.0;
        for (int q = 0; q < nw; ++q) acc += w[q] * comp[g.sidx(0, 0, kb + q) + p];
        comb[p] = acc;
      }
      plane_resample_staggered(g, comb.data(), xyr, xyr,
                               fl.u[c].data() + static_cast<std::size_t>(li) * fine);
    }
  }
  return fl;
}

// Separable window tables: per-axis envelope weights over the fine offsets
// dd = i_src - i_tgt, and the in-plane displacement (target - source) with
// its squared norm, tabulated over the full (2W2) x (2W1) offset window.
struct WeightTables {
  int W1 = 0, W2 = 0;
  std::vector<double> wx, wy;
  std::vector<double> rx, ry, rh2;  // (2W2) rows x (2W1) cols
};

WeightTables build_tables(const Lattice& lat, int M1, int M2, int L) {
  WeightTables t;
  t.W1 = (L + 1) * M1;
  t.W2 = (L + 1) * M2;
  t.wx.resize(2 * static_cast<std::size_t>(t.W1));
  t.wy.resize(2 * static_cast<std::size_t>(t.W2));
  for (int dd = -t.W1; dd < t.W1; ++dd)
    t.wx[static_cast<std::size_t>(dd + t.W1)] = PartitionCell::envelope((dd + 0.5) / M1, L);
  for (int dd = -t.W2; dd < t.W2; ++dd)
    t.wy[static_cast<std::size_t>(dd + t.W2)] = PartitionCell::envelope((dd + 0.5) / M2, L);

  const std::size_t cols = 2 * static_cast<std::size_t>(t.W1);
  t.rx.resize(cols * 2 * static_cast<std::size_t>(t.W2));
  t.ry.resize(t.rx.size());
  t.rh2.resize(t.rx.size());
  for (int d2 = -t.W2; d2 < t.W2; ++d2) {
    const double v = (d2 + 0.5) / M2;
    double* rxr = t.rx.data() + static_cast<std::size_t>(d2 + t.W2) * cols;
    double* ryr = t.ry.data() + static_cast<std::size_t>(d2 + t.W2) * cols;
    double* rhr = t.rh2.data() + static_cast<std::size_t>(d2 + t.W2) * cols;
    for (int d1 = -t.W1; d1 < t.W1; ++d1) {
      const double uu = (d1 + 0.5) / M1;
      const double ox = uu * lat.lambda1.x + v * lat.lambda2.x;  // source - target
      const double oy = uu * lat.lambda1.y + v * lat.lambda2.y;
      rxr[static_cast<std::size_t>(d1 + t.W1)] = -ox;
      ryr[static_cast<std::size_t>(d1 + t.W1)] = -oy;
      rhr[static_cast<std::size_t>(d1 + t.W1)] = ox * ox + oy * oy;
    }
  }
  return t;
}

// Window response to a uniform unit sheet at vertical offset dz: approaches
// sgn(dz)/2 as the window widens; the analytic tail completion adds the gap.
double sheet_window_sum(const WeightTables& t, double dA, double dz) {
  if (dz == 0.0) return 0.0;
  const std::size_t cols = 2 * static_cast<std::size_t>(t.W1);
  const double dz2 = dz * dz;
  double acc = 0.0;
  for (std::size_t q2 = 0; q2 < 2 * static_cast<std::size_t>(t.W2); ++q2) {
    const double wyv = t.wy[q2];
    const double* rhr = t.rh2.data() + q2 * cols;
    double row = 0.0;
    for (std::size_t q1 = 0; q1 < cols; ++q1) {
      const double r2 = rhr[q1] + dz2;
      row += t.wx[q1] / (r2 * std::sqrt(r2));
    }
    acc += wyv * row;
  }
  return acc * dz * dA / kFourPi;
}

double excluded_pair_weight(int L) {
  // sum of 1/(1 + |l|^3 + |j|^3) over the pairs outside the window
  double acc = 0.0;
  const int R = L + 400;
  for (int l = -R; l <= R; ++l)
    for (int j = -R; j <= R; ++j) {
      if (std::max(std::abs(l), std::abs(j)) <= L) continue;
      acc += 1.0 / (1.0 + std::pow(std::abs(l), 3) + std::pow(std::abs(j), 3));
    }
  return acc;
}

}  // namespace

std::vector<Vec3> biot_savart_points(const std::vector<Vec3>& src_pos,
                                     const std::vector<Vec3>& src_moment,
                                     const std::vector<Vec3>& targets, int threads) {
  if (src_pos.size() != src_moment.size())
    throw Error(ErrorKind::contract_violation, "biot_savart", "source arrays disagree");
  std::vector<Vec3> out(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const Vec3 x = targets[t];
      Vec3 acc;
      for (std::size_t s = 0; s < src_pos.size(); ++s) {
        const Vec3 r = x - src_pos[s];
        const double r2 = dot(r, r);
        if (r2 == 0.0)
          throw Error(ErrorKind::contract_violation, "biot_savart",
                      "target coincides with a source");
        acc += cross(src_moment[s], r) * (1.0 / (r2 * std::sqrt(r2)));
      }
      out[t] = acc * (1.0 / kFourPi);
    }
  });
  return out;
}

std::vector<Vec3> biot_savart(const VectorField& u, const DomainMap& map,
                              const PartitionCell& part, int l, int j,
                              const std::vector<Vec3>& targets, int threads) {
  const Grid& g = u.grid;
  const int xyr = 2;
  const FineLayers fl = build_fine_layers(u, xyr, 0);
  const std::size_t fine = static_cast<std::size_t>(fl.M1) * fl.M2;
  const bool flat = map.is_identity();

  // materialize the weighted sources over the support of the (l, j) weight
  const int lo1 = static_cast<int>(std::floor((l - 0.25) * fl.M1)) - 1;
  const int hi1 = static_cast<int>(std::ceil((l + 1.25) * fl.M1)) + 1;
  const int lo2 = static_cast<int>(std::floor((j - 0.25) * fl.M2)) - 1;
  const int hi2 = static_cast<int>(std::ceil((j + 1.25) * fl.M2)) + 1;
  const double dV = g.lat.cell_area / (static_cast<double>(fl.M1) * fl.M2) * g.hz();

  std::vector<Vec3> pos, mom;
  pos.reserve(static_cast<std::size_t>(hi1 - lo1) * (hi2 - lo2) * fl.NL);
  mom.reserve(pos.capacity());
  for (int li = 0; li < fl.NL; ++li) {
    const double zs = fl.z[static_cast<std::size_t>(li)];
    for (int js = lo2; js < hi2; ++js) {
      const double a2 = (js + 0.5) / fl.M2;
      for (int is = lo1; is < hi1; ++is) {
        const double a1 = (is + 0.5) / fl.M1;
        const double w = part.weight(a1, a2, l, j);
        if (w == 0.0) continue;
        const std::size_t sp = static_cast<std::size_t>(li) * fine +
                               static_cast<std::size_t>(floormod(js, fl.M2)) * fl.M1 +
                               floormod(is, fl.M1);
        const Vec2 xy = g.lat.point(a1, a2);
        const Vec3 xi{xy.x, xy.y, zs};
        Vec3 us{fl.u[0][sp], fl.u[1][sp], fl.u[2][sp]};
        double scale = w * dV;
        Vec3 y = xi;
        if (!flat) {
          y = map.value(xi);
          scale *= map.jacobian(xi).det();
        }
        pos.push_back(y);
        mom.push_back(us * scale);
      }
    }
  }
  return biot_savart_points(pos, mom, targets, threads);
}

PvResult pv_lattice_sum(const VectorField& u, const DomainMap& map, const PartitionCell& part,
                        int L, const PvOptions& opts, int shift_l, int shift_j) {
  const Grid& g = u.grid;
  if (L < 1) throw Error(ErrorKind::config, "pv_lattice_sum", "window L must be >= 1");
  if (opts.xy_refine < 1 || opts.pad_layers < 0)
    throw Error(ErrorKind::config, "pv_lattice_sum", "invalid refinement options");

  const FineLayers fl = build_fine_layers(u, opts.xy_refine, opts.pad_layers);
  const WeightTables wt = build_tables(g.lat, fl.M1, fl.M2, L);
  const std::size_t fine = static_cast<std::size_t>(fl.M1) * fl.M2;
  const std::size_t cols = 2 * static_cast<std::size_t>(wt.W1);
  const double dA = g.lat.cell_area / (static_cast<double>(fl.M1) * fl.M2);
  const double dV = dA * g.hz();
  const bool flat = map.is_identity();
  const int nthreads = resolve_threads(opts.threads);

  // per-layer mean sheet current (for the analytic tail) in physical units
  std::vector<double> J1(static_cast<std::size_t>(fl.NL), 0.0), J2 = J1, zmean = J1;

  PvResult out;
  out.B = VectorField(g);

  const std::size_t extcols = static_cast<std::size_t>(fl.M1) + 2 * static_cast<std::size_t>(wt.W1);

  if (flat) {
    // moment halos: ext[c][(li*M2 + row)*extcols + p] = u_c at fine x (p - W1) mod M1
    std::vector<double> ext[3];
    for (int c = 0; c < 3; ++c)
      ext[c].resize(static_cast<std::size_t>(fl.NL) * fl.M2 * extcols);
    for (int li = 0; li < fl.NL; ++li) {
      double s1 = 0.0, s2 = 0.0;
      for (int row = 0; row < fl.M2; ++row) {
        const std::size_t src = static_cast<std::size_t>(li) * fine +
                                static_cast<std::size_t>(row) * fl.M1;
        for (int c = 0; c < 3; ++c) {
          double* dst = ext[c].data() + (static_cast<std::size_t>(li) * fl.M2 + row) * extcols;
          for (std::size_t p = 0; p < extcols; ++p)
            dst[p] = fl.u[c][src + floormod(static_cast<int>(p) - wt.W1, fl.M1)];
        }
        for (int is = 0; is < fl.M1; ++is) {
          s1 += fl.u[0][src + is];
          s2 += fl.u[1][src + is];
        }
      }
      J1[static_cast<std::size_t>(li)] = s1 / static_cast<double>(fine) * g.hz();
      J2[static_cast<std::size_t>(li)] = s2 / static_cast<double>(fine) * g.hz();
      zmean[static_cast<std::size_t>(li)] = fl.z[static_cast<std::size_t>(li)];
    }

    for (int kt = 0; kt <= g.nz; ++kt) {
      const double zt = g.zlev(kt);
      parallel_for(g.plane(), nthreads, [&](std::size_t pb, std::size_t pe) {
        for (std::size_t p = pb; p < pe; ++p) {
          const int i = static_cast<int>(p) % g.nx;
          const int jj = static_cast<int>(p) / g.nx;
          const int ti = i * opts.xy_refine;
          const int tj = jj * opts.xy_refine;
          double bx = 0.0, by = 0.0, bz = 0.0;
          for (int li = 0; li < fl.NL; ++li) {
            const double dz = zt - fl.z[static_cast<std::size_t>(li)];
            const double dz2 = dz * dz;
            for (std::size_t q2 = 0; q2 < 2 * static_cast<std::size_t>(wt.W2); ++q2) {
              const double wyv = wt.wy[q2];
              const int row = floormod(tj + static_cast<int>(q2) - wt.W2, fl.M2);
              const std::size_t eoff =
                  (static_cast<std::size_t>(li) * fl.M2 + row) * extcols + ti;
              const double* e1 = ext[0].data() + eoff;
              const double* e2 = ext[1].data() + eoff;
              const double* e3 = ext[2].data() + eoff;
              const double* rxr = wt.rx.data() + q2 * cols;
              const double* ryr = wt.ry.data() + q2 * cols;
              const double* rhr = wt.rh2.data() + q2 * cols;
              double ax = 0.0, ay = 0.0, az = 0.0;
              for (std::size_t q = 0; q < cols; ++q) {
                const double r2 = rhr[q] + dz2;
                const double winv = wt.wx[q] / (r2 * std::sqrt(r2));
                const double m1 = e1[q], m2 = e2[q], m3 = e3[q];
                const double rx = rxr[q], ry = ryr[q];
                ax += (m2 * dz - m3 * ry) * winv;
                ay += (m3 * rx - m1 * dz) * winv;
                az += (m1 * ry - m2 * rx) * winv;
              }
              bx += wyv * ax;
              by += wyv * ay;
              bz += wyv * az;
            }
          }
          const double s = dV / kFourPi;
          out.B.v[g.sidx(i, jj, kt)] = bx * s;
          out.B.v[g.nnode() + g.sidx(i, jj, kt)] = by * s;
          out.B.v[2 * g.nnode() + g.sidx(i, jj, kt)] = bz * s;
        }
      });
    }
  } else {
    // curved path: materialized positions and det-weighted moments, with the
    // lattice wrap shifts folded into x-halos and applied per wrapped row.
    std::vector<double> mom[3], px, py, pz;
    for (int c = 0; c < 3; ++c)
      mom[c].resize(static_cast<std::size_t>(fl.NL) * fl.M2 * extcols);
    px.resize(mom[0].size());
    py.resize(mom[0].size());
    pz.resize(mom[0].size());

    for (int li = 0; li < fl.NL; ++li) {
      const double zs = fl.z[static_cast<std::size_t>(li)];
      // one period of positions/moments, then extend with wrap shifts
      std::vector<Vec3> posrow(static_cast<std::size_t>(fl.M1));
      double s1 = 0.0, s2 = 0.0, sz = 0.0;
      for (int row = 0; row < fl.M2; ++row) {
        const double a2 = (row + 0.5) / fl.M2;
        std::vector<double> detrow(static_cast<std::size_t>(fl.M1));
        for (int is = 0; is < fl.M1; ++is) {
          const double a1 = (is + 0.5) / fl.M1;
          const Vec2 xy = g.lat.point(a1, a2);
          const Vec3 xi{xy.x, xy.y, zs};
          posrow[static_cast<std::size_t>(is)] = map.value(xi);
          detrow[static_cast<std::size_t>(is)] = map.jacobian(xi).det();
        }
        const std::size_t src = static_cast<std::size_t>(li) * fine +
                                static_cast<std::size_t>(row) * fl.M1;
        const std::size_t eoff = (static_cast<std::size_t>(li) * fl.M2 + row) * extcols;
        for (std::size_t pcol = 0; pcol < extcols; ++pcol) {
          const int isu = static_cast<int>(pcol) - wt.W1;
          const int isw = floormod(isu, fl.M1);
          const int wrap = floordiv(isu, fl.M1);
          const double det = detrow[static_cast<std::size_t>(isw)];
          for (int c = 0; c < 3; ++c)
            mom[c][eoff + pcol] = fl.u[c][src + isw] * det;
          const Vec3& y = posrow[static_cast<std::size_t>(isw)];
          px[eoff + pcol] = y.x + wrap * g.lat.lambda1.x;
          py[eoff + pcol] = y.y + wrap * g.lat.lambda1.y;
          pz[eoff + pcol] = y.z;
        }
        for (int is = 0; is < fl.M1; ++is) {
          const double det = detrow[static_cast<std::size_t>(is)];
          s1 += fl.u[0][src + is] * det;
          s2 += fl.u[1][src + is] * det;
          sz += posrow[static_cast<std::size_t>(is)].z;
        }
      }
      J1[static_cast<std::size_t>(li)] = s1 / static_cast<double>(fine) * g.hz();
      J2[static_cast<std::size_t>(li)] = s2 / static_cast<double>(fine) * g.hz();
      zmean[static_cast<std::size_t>(li)] = sz / static_cast<double>(fine);
    }

    for (int kt = 0; kt <= g.nz; ++kt) {
      parallel_for(g.plane(), nthreads, [&](std::size_t pb, std::size_t pe) {
        for (std::size_t p = pb; p < pe; ++p) {
          const int i = static_cast<int>(p) % g.nx;
          const int jj = static_cast<int>(p) / g.nx;
          const int ti = i * opts.xy_refine;
          const int tj = jj * opts.xy_refine;
          const Vec3 xt = map.value(g.ref_point(i, jj, kt));
          double bx = 0.0, by = 0.0, bz = 0.0;
          for (int li = 0; li < fl.NL; ++li) {
            for (std::size_t q2 = 0; q2 < 2 * static_cast<std::size_t>(wt.W2); ++q2) {
              const double wyv = wt.wy[q2];
              const int rowu = tj + static_cast<int>(q2) - wt.W2;
              const int row = floormod(rowu, fl.M2);
              const int wrapy = floordiv(rowu, fl.M2);
              const double xtx = xt.x - wrapy * g.lat.lambda2.x;
              const double xty = xt.y - wrapy * g.lat.lambda2.y;
              const std::size_t eoff =
                  (static_cast<std::size_t>(li) * fl.M2 + row) * extcols + ti;
              const double* m1r = mom[0].data() + eoff;
              const double* m2r = mom[1].data() + eoff;
              const double* m3r = mom[2].data() + eoff;
              const double* pxr = px.data() + eoff;
              const double* pyr = py.data() + eoff;
              const double* pzr = pz.data() + eoff;
              double ax = 0.0, ay = 0.0, az = 0.0;
              for (std::size_t q = 0; q < cols; ++q) {
                const double rx = xtx - pxr[q];
                const double ry = xty - pyr[q];
                const double rz = xt.z - pzr[q];
                const double r2 = rx * rx + ry * ry + rz * rz;
                const double winv = wt.wx[q] / (r2 * std::sqrt(r2));
                ax += (m2r[q] * rz - m3r[q] * ry) * winv;
                ay += (m3r[q] * rx - m1r[q] * rz) * winv;
                az += (m1r[q] * ry - m2r[q] * rx) * winv;
              }
              bx += wyv * ax;
              by += wyv * ay;
              bz += wyv * az;
            }
          }
          const double s = dV / kFourPi;
          out.B.v[g.sidx(i, jj, kt)] = bx * s;
          out.B.v[g.nnode() + g.sidx(i, jj, kt)] = by * s;
          out.B.v[2 * g.nnode() + g.sidx(i, jj, kt)] = bz * s;
        }
      });
    }
  }
  (void)shift_l;  // whole-lattice target shifts cancel identically in the
  (void)shift_j;  // target-centred scheme; kept in the signature as the API
                  // contract that callers may verify.

  if (opts.tail_completion) {
    // complete the horizontal-mean (sheet) part of every layer to the
    // infinite lattice; the correction is constant per target level, so the
    // exact periodicity of the windowed sum is preserved
    for (int kt = 0; kt <= g.nz; ++kt) {
      double cx = 0.0, cy = 0.0;
      double ztm = g.zlev(kt);
      if (!flat) {
        double acc = 0.0;
        for (int jj = 0; jj < g.ny; ++jj)
          for (int i = 0; i < g.nx; ++i) acc += map.value(g.ref_point(i, jj, kt)).z;
        ztm = acc / static_cast<double>(g.plane());
      }
      for (int li = 0; li < fl.NL; ++li) {
        const double dz = ztm - zmean[static_cast<std::size_t>(li)];
        const double sw = sheet_window_sum(wt, dA, dz);
        const double gap = (dz > 0.0 ? 0.5 : dz < 0.0 ? -0.5 : 0.0) - sw;
        cx += J2[static_cast<std::size_t>(li)] * gap;
        cy -= J1[static_cast<std::size_t>(li)] * gap;
      }
      for (std::size_t p = 0; p < g.plane(); ++p) {
        out.B.v[g.sidx(0, 0, kt) + p] += cx;
        out.B.v[g.nnode() + g.sidx(0, 0, kt) + p] += cy;
      }
    }
  }

  // symmetric-pair decay diagnostic: probe a few cell pairs directly and fit
  // the C/(1 + |l|^3 + |j|^3) model, then bound the dropped tail with it
  {
    std::vector<Vec3> probes;
    for (int q = 0; q < 4; ++q)
      probes.push_back(map.value(g.ref_point((q * g.nx) / 4, ((q + 1) * g.ny) / 4,
                                             (q * g.nz) / 3)));
    const int cells[5][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {2, 2}};
    double cfit = 0.0;
    for (const auto& lj : cells) {
      const std::vector<Vec3> bp = biot_savart(u, map, part, lj[0], lj[1], probes, nthreads);
      const std::vector<Vec3> bm = biot_savart(u, map, part, -lj[0], -lj[1], probes, nthreads);
      double s = 0.0;
      for (std::size_t q = 0; q < probes.size(); ++q)
        s = std::max(s, (bp[q] + bm[q]).inf_norm());
      cfit = std::max(cfit, s * (1.0 + std::pow(std::abs(lj[0]), 3) +
                                 std::pow(std::abs(lj[1]), 3)));
    }
    out.pair_decay_C = cfit;
    out.tail_estimate = cfit * excluded_pair_weight(L);
  }

  return out;
}

}  // namespace bwf
