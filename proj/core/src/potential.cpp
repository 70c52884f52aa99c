#include "bwf/potential.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bwf/elliptic.hpp"
#include "bwf/fd_z.hpp"
#include "bwf/fft.hpp"
#include "bwf/operators.hpp"

namespace bwf {

TangentialDecomposition tangential_decompose(const std::vector<Vec3>& B_wall,
                                             const SurfaceGrid& frames,
                                             double defect_tol) {
  const Grid& g = frames.grid;
  if (B_wall.size() != g.plane())
    throw Error(ErrorKind::contract_violation, "decompose", "wall sample count mismatch");

  // covariant chart components of the tangential part
  SurfaceScalar b1(g.nx, g.ny), b2(g.nx, g.ny);
  for (std::size_t p = 0; p < g.plane(); ++p) {
    const SurfaceFrame& f = frames.frames[p];
    b1.v[p] = dot(B_wall[p], f.S_X);
    b2.v[p] = dot(B_wall[p], f.S_Y);
  }

  TangentialDecomposition out;
  out.a1 = b1.mean();
  out.a2 = b2.mean();

  Fft2 fft(g.nx, g.ny);
  SpectralXY spect(g);
  std::vector<std::complex<double>> s1(fft.spec_size()), s2(fft.spec_size()),
      f0h(fft.spec_size());
  fft.forward(b1.v.data(), s1.data());
  fft.forward(b2.v.data(), s2.data());

  double num = 0.0, den = 0.0;
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t q = 0; q < fft.spec_size(); ++q) {
    const double kx = spect.kx[q], ky = spect.ky[q];
    const double k2 = kx * kx + ky * ky;
    f0h[q] = (k2 > 0.0) ? (-I * (kx * s1[q] + ky * s2[q])) / k2 : 0.0;
    num = std::max(num, std::abs(kx * s2[q] - ky * s1[q]));
    den = std::max({den, std::abs(kx * s1[q]), std::abs(ky * s2[q]),
                    std::abs(kx * s2[q]), std::abs(ky * s1[q])});
  }
  out.defect = (den > 0.0) ? num / den : 0.0;
  if (defect_tol >= 0.0 && out.defect > defect_tol)
    throw Error(ErrorKind::decomposition_invalid, "decompose",
                "wall field is not conservative up to a constant");

  out.f0 = SurfaceScalar(g.nx, g.ny);
  fft.inverse(f0h.data(), out.f0.v.data());
  return out;
}

namespace {

// Harmonic blend of the two wall potentials on the flat slab: per horizontal
// mode phi = f0t sinh(|k|(z+d))/sinh(|k|d) + f0b sinh(-|k|z)/sinh(|k|d),
// linear blend for the zero mode.
ScalarField harmonic_blend_flat(const Grid& g, const SurfaceScalar& f0t,
                                const SurfaceScalar& f0b) {
  Fft2 fft(g.nx, g.ny);
  SpectralXY spect(g);
  std::vector<std::complex<double>> st(fft.spec_size()), sb(fft.spec_size()),
      sp(fft.spec_size());
  fft.forward(f0t.v.data(), st.data());
  fft.forward(f0b.v.data(), sb.data());

  ScalarField phi(g);
  for (int k = 0; k <= g.nz; ++k) {
    const double z = g.zlev(k);
    for (std::size_t q = 0; q < fft.spec_size(); ++q) {
      const double kn = std::sqrt(spect.kx[q] * spect.kx[q] + spect.ky[q] * spect.ky[q]);
      if (kn > 0.0) {
        const double s = std::sinh(kn * g.d);
        sp[q] = st[q] * (std::sinh(kn * (z + g.d)) / s) + sb[q] * (std::sinh(-kn * z) / s);
      } else {
        sp[q] = st[q] * ((z + g.d) / g.d) + sb[q] * (-z / g.d);
      }
    }
    fft.inverse(sp.data(), phi.v.data() + g.sidx(0, 0, k));
  }
  return phi;
}

SurfaceScalar displacement_on_top(const Grid& g, const DomainMap& map, int comp) {
  SurfaceScalar disp(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 xi = g.ref_point(i, j, g.nz);
      const Vec3 x = map.value(xi);
      disp.at(i, j) = (comp == 0) ? x.x - xi.x : x.y - xi.y;
    }
  return disp;
}

void append_warning(std::string& w, const std::string& msg) {
  if (!w.empty()) w += "; ";
  w += msg;
}

}  // namespace

PotentialResult assemble_potential(const VectorField& u, const DomainMap& map,
                                   const Grid& grid, int L, const AssembleOptions& opts) {
  require_same_grid(u.grid, grid, "assemble");
  const double unorm = u.inf_norm();
  PotentialResult res;

  // membership of u in the tangent class: u.n must vanish on both walls
  SurfaceGrid topsg(grid, map);
  {
    double un = 0.0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        un = std::max(un, std::fabs(dot(u.vec_at(i, j, grid.nz), topsg.at(i, j).n)));
        un = std::max(un, std::fabs(u.at(2, i, j, 0)));
      }
    if (un > opts.un_tol * std::max(unorm, 1.0))
      append_warning(res.warnings, "u.n exceeds tolerance on a wall");
  }

  // principal-value lattice sum
  const PartitionCell part;
  const PvResult pv = pv_lattice_sum(u, map, part, L, opts.pv);
  res.tail_estimate = pv.tail_estimate;

  // wall decompositions (the bottom is always the flat plane z = -d)
  std::vector<Vec3> Btop(grid.plane()), Bbot(grid.plane());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      Btop[grid.pidx(i, j)] = pv.B.vec_at(i, j, grid.nz);
      Bbot[grid.pidx(i, j)] = pv.B.vec_at(i, j, 0);
    }
  IdentityMap flatmap(grid.d);
  SurfaceGrid botsg(grid, flatmap);
  const TangentialDecomposition dtop = tangential_decompose(Btop, topsg);
  const TangentialDecomposition dbot = tangential_decompose(Bbot, botsg);
  res.conservativity_top = dtop.defect;
  res.conservativity_bottom = dbot.defect;
  if (std::max(dtop.defect, dbot.defect) > 0.1)
    append_warning(res.warnings, "wall decomposition defect is large");

  // corrections: A = B - grad(phi) - a1 (grad(phi1) + e1) - a2 (grad(phi2) + e2)
  res.A = pv.B;
  if (map.is_identity()) {
    const ScalarField phi = harmonic_blend_flat(grid, dtop.f0, dbot.f0);
    const VectorField gphi = mapped_grad(phi, map);
    for (std::size_t q = 0; q < res.A.v.size(); ++q) res.A.v[q] -= gphi.v[q];
    for (std::size_t p = 0; p < grid.nnode(); ++p) {
      res.A.v[p] -= dtop.a1;
      res.A.v[grid.nnode() + p] -= dtop.a2;
    }
  } else {
    DirichletProblem dp;
    dp.map = &map;
    dp.top = dtop.f0;
    dp.bottom = dbot.f0;
    const DirichletSolution sol = solve_dirichlet(dp, grid);
    for (std::size_t q = 0; q < res.A.v.size(); ++q) res.A.v[q] -= sol.grad.v[q];
    for (int comp = 0; comp < 2; ++comp) {
      const double ac = (comp == 0) ? dtop.a1 : dtop.a2;
      DirichletProblem dpj;
      dpj.map = &map;
      dpj.top = displacement_on_top(grid, map, comp);
      for (double& v : dpj.top.v) v = -v;
      dpj.bottom = SurfaceScalar(grid.nx, grid.ny);
      const DirichletSolution solj = solve_dirichlet(dpj, grid);
      for (std::size_t q = 0; q < res.A.v.size(); ++q)
        res.A.v[q] -= ac * solj.grad.v[q];
      for (std::size_t p = 0; p < grid.nnode(); ++p)
        res.A.v[static_cast<std::size_t>(comp) * grid.nnode() + p] -= ac;
    }
  }

  if (opts.clean_divergence) res.A = divergence_clean(res.A, map, grid);

  // diagnostics
  const double anorm = std::max(res.A.inf_norm(), 1e-300);
  const double udenom = std::max(unorm, 1e-300);
  const MappedDerivs md = mapped_derivatives(res.A, map);
  double cerr = 0.0;
  for (std::size_t q = 0; q < res.A.v.size(); ++q)
    cerr = std::max(cerr, std::fabs(md.curl.v[q] - u.v[q]));
  res.curl_err = cerr / udenom;
  res.div_A = md.div.inf_norm() / udenom;

  double bctop = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      bctop = std::max(
          bctop, cross(res.A.vec_at(i, j, grid.nz), topsg.at(i, j).n).inf_norm());
  res.bc_top = bctop / anorm;

  Vec3 wmean;
  std::vector<Vec3> wbot(grid.plane());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      wbot[grid.pidx(i, j)] = cross(res.A.vec_at(i, j, 0), Vec3{0.0, 0.0, 1.0});
      wmean += wbot[grid.pidx(i, j)];
    }
  wmean = wmean * (1.0 / static_cast<double>(grid.plane()));
  res.m1 = wmean.x;
  res.m2 = wmean.y;
  double bdev = 0.0;
  for (const Vec3& w : wbot) bdev = std::max(bdev, (w - wmean).inf_norm());
  res.bc_bottom_dev = bdev / anorm;

  face_fluxes(u, map, res.flux_a1, res.flux_a2);
  const Vec2 mrot{res.m2, -res.m1};
  const double pred1 = mrot.dot(grid.lat.lambda1);
  const double pred2 = mrot.dot(grid.lat.lambda2);
  const double fden1 = std::max(std::fabs(res.flux_a1), unorm * grid.lat.lambda1.norm() * grid.d);
  const double fden2 = std::max(std::fabs(res.flux_a2), unorm * grid.lat.lambda2.norm() * grid.d);
  res.flux_gap1 = std::fabs(res.flux_a1 - pred1) / std::max(fden1, 1e-300);
  res.flux_gap2 = std::fabs(res.flux_a2 - pred2) / std::max(fden2, 1e-300);

  res.within_tolerances = res.curl_err < opts.tol_curl && res.bc_top < opts.tol_bc &&
                          res.bc_bottom_dev < opts.tol_bc &&
                          std::max(res.flux_gap1, res.flux_gap2) < opts.tol_flux;
  return res;
}

VectorField spectral_potential_flat(const VectorField& u, const DomainMap& map) {
  if (!map.is_identity())
    throw Error(ErrorKind::unsupported_configuration, "oracle",
                "the spectral potential oracle requires the identity map");
  const Grid& g = u.grid;
  const int n = g.nlev();

  Eigen::MatrixXd D(n, n);
  const std::vector<double> d1 = d1_matrix(g.nz, g.hz());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) D(r, c) = d1[static_cast<std::size_t>(r) * n + c];
  D.row(0).setZero();
  D(0, 0) = 1.0;  // pin A(z=-d) = 0 in place of the redundant derivative row
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);

  Fft2 fft(g.nx, g.ny);
  const std::size_t nb = fft.spec_size();
  std::vector<std::complex<double>> s1(nb * static_cast<std::size_t>(n)),
      s2(nb * static_cast<std::size_t>(n)), plane(nb);
  for (int k = 0; k < n; ++k) {
    fft.forward(u.component(0) + g.sidx(0, 0, k), plane.data());
    for (std::size_t q = 0; q < nb; ++q) s1[q * n + k] = plane[q];
    fft.forward(u.component(1) + g.sidx(0, 0, k), plane.data());
    for (std::size_t q = 0; q < nb; ++q) s2[q * n + k] = plane[q];
  }

  VectorField A(g);
  std::vector<std::complex<double>> a1(nb * static_cast<std::size_t>(n)),
      a2(nb * static_cast<std::size_t>(n));
  Eigen::MatrixXd rhs(n, 2), sl(n, 2);
  for (int my = 0; my < g.ny; ++my)
    for (int mx = 0; mx < g.nx / 2 + 1; ++mx) {
      const std::size_t q = static_cast<std::size_t>(my) * (g.nx / 2 + 1) + mx;
      const bool nyq = (2 * mx == g.nx) || (2 * std::abs(fft_mode(my, g.ny)) == g.ny);
      if (nyq) continue;  // arrays are zero-initialized
      // A1 = D^{-1} u2, A2 = -D^{-1} u1, bottom value zero
      for (int k = 0; k < n; ++k) {
        rhs(k, 0) = s2[q * n + k].real();
        rhs(k, 1) = s2[q * n + k].imag();
      }
      rhs(0, 0) = rhs(0, 1) = 0.0;
      sl = lu.solve(rhs);
      for (int k = 0; k < n; ++k) a1[q * n + k] = {sl(k, 0), sl(k, 1)};
      for (int k = 0; k < n; ++k) {
        rhs(k, 0) = -s1[q * n + k].real();
        rhs(k, 1) = -s1[q * n + k].imag();
      }
      rhs(0, 0) = rhs(0, 1) = 0.0;
      sl = lu.solve(rhs);
      for (int k = 0; k < n; ++k) a2[q * n + k] = {sl(k, 0), sl(k, 1)};
    }

  for (int k = 0; k < n; ++k) {
    for (std::size_t q = 0; q < nb; ++q) plane[q] = a1[q * n + k];
    fft.inverse(plane.data(), A.component(0) + g.sidx(0, 0, k));
    for (std::size_t q = 0; q < nb; ++q) plane[q] = a2[q * n + k];
    fft.inverse(plane.data(), A.component(1) + g.sidx(0, 0, k));
  }
  return A;
}

VectorField divergence_clean(const VectorField& A, const DomainMap& map, const Grid& grid) {
  require_same_grid(A.grid, grid, "clean");
  DirichletProblem dp;
  dp.map = &map;
  dp.rho = mapped_div(A, map);
  dp.top = SurfaceScalar(grid.nx, grid.ny);
  dp.bottom = SurfaceScalar(grid.nx, grid.ny);
  const DirichletSolution sol = solve_dirichlet(dp, grid);
  VectorField out = A;
  for (std::size_t q = 0; q < out.v.size(); ++q) out.v[q] -= sol.grad.v[q];
  return out;
}

void face_fluxes(const VectorField& u, const DomainMap& map, double& a1, double& a2) {
  const Grid& g = u.grid;
  const std::vector<double> wz = g.simpson_wz();

  a1 = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 xi = g.ref_point(i, 0, k);
      const Mat3 J = map.jacobian(xi);
      const Vec3 vt = J.mul({g.lat.lambda1.x, g.lat.lambda1.y, 0.0});
      const Vec3 vz = J.col(2);
      a1 -= dot(u.vec_at(i, 0, k), cross(vt, vz)) * wz[static_cast<std::size_t>(k)] / g.nx;
    }

  a2 = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j) {
      const Vec3 xi = g.ref_point(0, j, k);
      const Mat3 J = map.jacobian(xi);
      const Vec3 vt = J.mul({g.lat.lambda2.x, g.lat.lambda2.y, 0.0});
      const Vec3 vz = J.col(2);
      a2 -= dot(u.vec_at(0, j, k), cross(vt, vz)) * wz[static_cast<std::size_t>(k)] / g.ny;
    }
}

}  // namespace bwf
