#include "bwf/functionals.hpp"

#include <cmath>

#include "bwf/fft.hpp"
#include "bwf/operators.hpp"
#include "bwf/surface.hpp"

namespace bwf {

FunctionalReport evaluate_functionals(const VectorField& A, const VectorField& u,
                                      const DomainMap& map, const Grid& grid,
                                      const PhysicalParams& params) {
  require_same_grid(A.grid, grid, "functionals");
  require_same_grid(u.grid, grid, "functionals");
  const Quadrature q(grid, map);

  std::vector<double> s(grid.nnode()), one(grid.nnode(), 1.0);
  for (int k = 0; k <= grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        s[grid.sidx(i, j, k)] = dot(u.vec_at(i, j, k), u.vec_at(i, j, k));

  FunctionalReport rep;
  rep.kinetic = integrate_volume(q, s);

  for (int k = 0; k <= grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        s[grid.sidx(i, j, k)] = map.value(grid.ref_point(i, j, k)).z;
  rep.gravity = -2.0 * params.g * integrate_volume(q, s);

  std::vector<double> ones(grid.plane(), 1.0);
  rep.surface = -params.sigma * integrate_surface(q, ones);
  rep.E = rep.kinetic + rep.gravity + rep.surface;

  for (int k = 0; k <= grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        s[grid.sidx(i, j, k)] = dot(A.vec_at(i, j, k), u.vec_at(i, j, k));
  rep.K = integrate_volume(q, s);
  rep.M = integrate_volume(q, one);
  rep.J = rep.E - params.alpha * rep.K - params.mu * rep.M;
  return rep;
}

FirstVariation first_variation(const VectorField& A, const DomainMap& map,
                               const PhysicalParams& params, const AdmissiblePair& pair) {
  const Grid& g = A.grid;
  require_same_grid(pair.dA.grid, g, "variation");
  const Quadrature q(g, map);
  const SurfaceGrid sg(g, map);

  const MappedDerivs md = mapped_derivatives(A, map);
  const VectorField& u = md.curl;
  const VectorField ccA = mapped_curl(u, map);

  std::vector<double> s(g.nnode());
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s[g.sidx(i, j, k)] = dot(ccA.vec_at(i, j, k), pair.dA.vec_at(i, j, k));
  FirstVariation fv;
  fv.dE = 2.0 * integrate_volume(q, s);

  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s[g.sidx(i, j, k)] = dot(u.vec_at(i, j, k), pair.dA.vec_at(i, j, k));
  fv.dK = 2.0 * integrate_volume(q, s);

  // boundary terms; the variation of the unit normal needs the horizontal
  // derivatives of dF restricted to the top
  std::vector<double> dfx(g.plane()), dfy(g.plane());
  std::vector<Vec3> dF_X(g.plane()), dF_Y(g.plane());
  for (int c = 0; c < 3; ++c) {
    plane_derivatives(g, pair.dF.component(c) + g.sidx(0, 0, g.nz), dfx.data(), dfy.data());
    for (std::size_t p = 0; p < g.plane(); ++p) {
      (c == 0 ? dF_X[p].x : c == 1 ? dF_X[p].y : dF_X[p].z) = dfx[p];
      (c == 0 ? dF_Y[p].x : c == 1 ? dF_Y[p].y : dF_Y[p].z) = dfy[p];
    }
  }

  std::vector<double> i1(g.plane()), i2(g.plane()), bern(g.plane()), ku(g.plane()),
      au(g.plane()), de(g.plane());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t p = g.pidx(i, j);
      const SurfaceFrame& f = sg.at(i, j);
      const Vec3 ut = u.vec_at(i, j, g.nz);
      const Vec3 at = A.vec_at(i, j, g.nz);
      const Vec3 df = pair.dF.vec_at(i, j, g.nz);

      const Vec3 gradA_df{dot(md.grad1.vec_at(i, j, g.nz), df),
                          dot(md.grad2.vec_at(i, j, g.nz), df),
                          dot(md.grad3.vec_at(i, j, g.nz), df)};
      i1[p] = dot(cross(gradA_df, f.n), ut);

      const Vec3 dN = cross(dF_X[p], f.S_Y) + cross(f.S_X, dF_Y[p]);
      const Vec3 dn = (dN - f.n * dot(f.n, dN)) * (1.0 / f.area_element);
      i2[p] = dot(cross(at, dn), ut);

      const double deta = pair.deta.at(i, j);
      de[p] = deta;
      bern[p] = (dot(ut, ut) - 2.0 * params.g * f.S.z) * deta;
      ku[p] = 2.0 * params.sigma * f.K_M * deta;
      au[p] = dot(at, ut) * deta;
    }

  fv.dE += 2.0 * integrate_surface(q, i1) + 2.0 * integrate_surface(q, i2) +
           integrate_surface(q, bern) + integrate_surface(q, ku);
  fv.dK += integrate_surface(q, au);
  fv.dM = integrate_surface(q, de);
  fv.dJ = fv.dE - params.alpha * fv.dK - params.mu * fv.dM;
  return fv;
}

FdResult finite_difference_dJ(const TransportCurve& curve, const PhysicalParams& params,
                              const Grid& grid, const std::vector<double>& steps) {
  if (steps.size() != 2 || !(steps[0] > 0.0) || !(steps[1] > 0.0) || steps[0] == steps[1])
    throw Error(ErrorKind::config, "variation", "need two distinct positive FD steps");

  const auto J_at = [&](double t) {
    try {
      const std::shared_ptr<const DomainMap> m = curve.map_at(t);
      const VectorField At = transport(*m, curve.Ahat);
      const VectorField ut = mapped_curl(At, *m);
      return evaluate_functionals(At, ut, *m, grid, params).J;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::geometry_degenerate)
        throw Error(ErrorKind::step_size, "variation",
                    "perturbed map is not a diffeomorphism at t = " + std::to_string(t));
      throw;
    }
  };

  const double h1 = steps[0], h2 = steps[1];
  const double c1 = (J_at(h1) - J_at(-h1)) / (2.0 * h1);
  const double c2 = (J_at(h2) - J_at(-h2)) / (2.0 * h2);
  // central differences are O(h^2); eliminate the leading term
  const double r1 = (h1 / h2) * (h1 / h2);
  FdResult out;
  out.dJ = (r1 * c2 - c1) / (r1 - 1.0);
  out.error_estimate = std::fabs(out.dJ - c2);
  return out;
}

ElResiduals el_residuals(const VectorField& A, const DomainMap& map, const Grid& grid,
                         const PhysicalParams& params) {
  require_same_grid(A.grid, grid, "el");
  const VectorField u = mapped_curl(A, map);
  const VectorField ccA = mapped_curl(u, map);

  ElResiduals out;
  out.interior = VectorField(grid);
  for (std::size_t qq = 0; qq < out.interior.v.size(); ++qq)
    out.interior.v[qq] = ccA.v[qq] - params.alpha * u.v[qq];
  out.interior_norm = out.interior.inf_norm();

  const SurfaceGrid sg(grid, map);
  out.boundary = SurfaceScalar(grid.nx, grid.ny);
  double bmin = 0.0, bmax = 0.0;
  bool first = true;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const SurfaceFrame& f = sg.at(i, j);
      const Vec3 ut = u.vec_at(i, j, grid.nz);
      const double u2 = dot(ut, ut);
      out.boundary.at(i, j) =
          u2 + 2.0 * params.g * f.S.z - 2.0 * params.sigma * f.K_M + params.mu;
      const double bern = 0.5 * u2 + params.g * f.S.z - 2.0 * params.sigma * f.K_M;
      if (first || bern < bmin) bmin = bern;
      if (first || bern > bmax) bmax = bern;
      first = false;
      out.boundary_norm = std::max(out.boundary_norm, std::fabs(out.boundary.at(i, j)));
    }
  out.bernoulli_const_dev = bmax - bmin;
  return out;
}

}  // namespace bwf
