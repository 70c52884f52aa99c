#include "bwf/transport.hpp"

#include <cmath>

#include "bwf/operators.hpp"
#include "bwf/surface.hpp"

namespace bwf {

namespace {

// columns F_X, F_Y, F_X x F_Y of the transport frame
Mat3 frame_matrix(const Mat3& J) {
  const Vec3 fx = J.col(0), fy = J.col(1);
  return Mat3::from_columns(fx, fy, cross(fx, fy));
}

// C3 ramp: 0 for s <= 0, 1 for s >= 1, s^4 (35 - 84 s + 70 s^2 - 20 s^3)
// between; the first three derivatives vanish at both ends.
void ramp(double s, double& c, double& c1, double& c2) {
  if (s <= 0.0) {
    c = c1 = c2 = 0.0;
  } else if (s >= 1.0) {
    c = 1.0;
    c1 = c2 = 0.0;
  } else {
    const double s2 = s * s, s3 = s2 * s;
    c = s3 * s * (35.0 - 84.0 * s + 70.0 * s2 - 20.0 * s3);
    c1 = 140.0 * s3 * (1.0 - s) * (1.0 - s) * (1.0 - s);
    c2 = 420.0 * s2 * (1.0 - s) * (1.0 - s) * (1.0 - 2.0 * s);
  }
}

Vec3 dcol(const std::array<Mat3, 3>& H, int col, int c) {
  return {H[0](col, c), H[1](col, c), H[2](col, c)};
}

Vec3 ddcol(const std::array<Ten3, 3>& T, int col, int a, int b) {
  return {T[0](col, a, b), T[1](col, a, b), T[2](col, a, b)};
}

}  // namespace

VectorField transport(const DomainMap& map, const VectorField& Ahat) {
  const Grid& g = Ahat.grid;
  VectorField A(g);
  if (map.is_identity()) {
    A.v = Ahat.v;
    return A;
  }
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Mat3 M = frame_matrix(map.jacobian(g.ref_point(i, j, k)));
        const Vec3 a = M.mul(Ahat.vec_at(i, j, k));
        A.at(0, i, j, k) = a.x;
        A.at(1, i, j, k) = a.y;
        A.at(2, i, j, k) = a.z;
      }
  return A;
}

VectorField transport_inverse(const DomainMap& map, const VectorField& A) {
  const Grid& g = A.grid;
  VectorField Ahat(g);
  if (map.is_identity()) {
    Ahat.v = A.v;
    return Ahat;
  }
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Mat3 M = frame_matrix(map.jacobian(g.ref_point(i, j, k)));
        if (M.det() <= 0.0)
          throw Error(ErrorKind::geometry_degenerate, "transport",
                      "transport frame is singular");
        const Vec3 a = M.inverse().mul(A.vec_at(i, j, k));
        Ahat.at(0, i, j, k) = a.x;
        Ahat.at(1, i, j, k) = a.y;
        Ahat.at(2, i, j, k) = a.z;
      }
  return Ahat;
}

PerturbedMap::PerturbedMap(std::shared_ptr<const DomainMap> base, std::vector<EtaMode> deta,
                           double t)
    : DomainMap(base->depth()), base_(std::move(base)), deta_(std::move(deta)), t_(t) {}

Vec3 PerturbedMap::displacement(const Vec3& X) const {
  const double d = depth();
  double c, c1, c2;
  ramp(2.0 * X.z / d + 1.0, c, c1, c2);
  if (c == 0.0) return {};
  const Mat3 J = base_->jacobian(X);
  const Vec3 N = cross(J.col(0), J.col(1));
  const double e = eta_eval(deta_, 0, 0, X.x, X.y);
  return N * (e * c / N.norm());
}

Mat3 PerturbedMap::displacement_jacobian(const Vec3& X) const {
  const double d = depth();
  double c, c1, c2;
  ramp(2.0 * X.z / d + 1.0, c, c1, c2);
  if (c == 0.0 && c1 == 0.0) return {};
  c1 *= 2.0 / d;
  const Mat3 J = base_->jacobian(X);
  const std::array<Mat3, 3> H = base_->hessian(X);
  const Vec3 fx = J.col(0), fy = J.col(1);
  const Vec3 N = cross(fx, fy);
  const double r = 1.0 / N.norm();
  const Vec3 nu = N * r;
  const double e = eta_eval(deta_, 0, 0, X.x, X.y);
  const double ed[3] = {eta_eval(deta_, 1, 0, X.x, X.y), eta_eval(deta_, 0, 1, X.x, X.y), 0.0};
  const double cd[3] = {0.0, 0.0, c1};

  Vec3 cols[3];
  for (int a = 0; a < 3; ++a) {
    const Vec3 Na = cross(dcol(H, 0, a), fy) + cross(fx, dcol(H, 1, a));
    const double ra = -dot(N, Na) * r * r * r;
    const Vec3 nua = Na * r + N * ra;
    cols[a] = nu * (ed[a] * c + e * cd[a]) + nua * (e * c);
  }
  return Mat3::from_columns(cols[0], cols[1], cols[2]);
}

Vec3 PerturbedMap::value(const Vec3& X) const {
  return base_->value(X) + displacement(X) * t_;
}

Mat3 PerturbedMap::jacobian(const Vec3& X) const {
  return base_->jacobian(X) + displacement_jacobian(X) * t_;
}

std::array<Mat3, 3> PerturbedMap::hessian(const Vec3& X) const {
  std::array<Mat3, 3> out = base_->hessian(X);
  const double d = depth();
  double c, c1, c2;
  ramp(2.0 * X.z / d + 1.0, c, c1, c2);
  if (c == 0.0 && c1 == 0.0 && c2 == 0.0) return out;
  c1 *= 2.0 / d;
  c2 *= 4.0 / (d * d);

  const Mat3 J = base_->jacobian(X);
  const std::array<Mat3, 3> H = base_->hessian(X);
  const std::array<Ten3, 3> T = base_->third(X);
  const Vec3 fx = J.col(0), fy = J.col(1);
  const Vec3 N = cross(fx, fy);
  const double r = 1.0 / N.norm();
  const Vec3 nu = N * r;

  const double e = eta_eval(deta_, 0, 0, X.x, X.y);
  const double ed[3] = {eta_eval(deta_, 1, 0, X.x, X.y), eta_eval(deta_, 0, 1, X.x, X.y), 0.0};
  const double edd[3][3] = {
      {eta_eval(deta_, 2, 0, X.x, X.y), eta_eval(deta_, 1, 1, X.x, X.y), 0.0},
      {eta_eval(deta_, 1, 1, X.x, X.y), eta_eval(deta_, 0, 2, X.x, X.y), 0.0},
      {0.0, 0.0, 0.0}};
  const double cd[3] = {0.0, 0.0, c1};

  Vec3 Na[3], nua[3];
  double ra[3];
  for (int a = 0; a < 3; ++a) {
    Na[a] = cross(dcol(H, 0, a), fy) + cross(fx, dcol(H, 1, a));
    ra[a] = -dot(N, Na[a]) * r * r * r;
    nua[a] = Na[a] * r + N * ra[a];
  }

  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      const Vec3 Nab = cross(ddcol(T, 0, a, b), fy) + cross(dcol(H, 0, b), dcol(H, 1, a)) +
                       cross(dcol(H, 0, a), dcol(H, 1, b)) + cross(fx, ddcol(T, 1, a, b));
      const double rab = -(dot(Na[a], Na[b]) + dot(N, Nab)) * r * r * r +
                         3.0 * dot(N, Na[a]) * dot(N, Na[b]) * r * r * r * r * r;
      const Vec3 nuab = Nab * r + Na[a] * ra[b] + Na[b] * ra[a] + N * rab;

      const double gab = (a == 2 && b == 2) ? c2 : 0.0;
      const Vec3 term = nu * (edd[a][b] * c + ed[a] * cd[b] + ed[b] * cd[a] + e * gab) +
                        nua[b] * (ed[a] * c + e * cd[a]) + nua[a] * (ed[b] * c + e * cd[b]) +
                        nuab * (e * c);
      for (int comp = 0; comp < 3; ++comp) {
        const double v = (comp == 0 ? term.x : comp == 1 ? term.y : term.z) * t_;
        out[comp](a, b) += v;
        if (a != b) out[comp](b, a) += v;
      }
    }
  return out;
}

std::shared_ptr<const DomainMap> TransportCurve::map_at(double t) const {
  return std::make_shared<PerturbedMap>(base, deta, t);
}

VectorField TransportCurve::potential_at(double t) const {
  const std::shared_ptr<const DomainMap> m = map_at(t);
  return transport(*m, Ahat);
}

AdmissibleResult make_admissible(std::shared_ptr<const DomainMap> map, const VectorField& A,
                                 const std::vector<EtaMode>& deta, double mollification) {
  const Grid& g = A.grid;
  AdmissibleResult out;
  out.curve.base = map;
  out.curve.deta = deta;
  out.curve.Ahat = transport_inverse(*map, A);

  const PerturbedMap pm(map, deta, 0.0);
  out.pair.dF = VectorField(g);
  VectorField dAm(g);  // material variation dM Ahat
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 X = g.ref_point(i, j, k);
        const Vec3 df = pm.displacement(X);
        out.pair.dF.at(0, i, j, k) = df.x;
        out.pair.dF.at(1, i, j, k) = df.y;
        out.pair.dF.at(2, i, j, k) = df.z;

        const Mat3 J = map->jacobian(X);
        const Mat3 dJ = pm.displacement_jacobian(X);
        const Vec3 ah = out.curve.Ahat.vec_at(i, j, k);
        const Vec3 dm = dJ.col(0) * ah.x + dJ.col(1) * ah.y +
                        (cross(dJ.col(0), J.col(1)) + cross(J.col(0), dJ.col(1))) * ah.z;
        dAm.at(0, i, j, k) = dm.x;
        dAm.at(1, i, j, k) = dm.y;
        dAm.at(2, i, j, k) = dm.z;
      }

  // Eulerian variation: dA = dM Ahat - (grad A) dF
  const MappedDerivs md = mapped_derivatives(A, *map);
  out.pair.dA = VectorField(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 df = out.pair.dF.vec_at(i, j, k);
        out.pair.dA.at(0, i, j, k) = dAm.at(0, i, j, k) - dot(md.grad1.vec_at(i, j, k), df);
        out.pair.dA.at(1, i, j, k) = dAm.at(1, i, j, k) - dot(md.grad2.vec_at(i, j, k), df);
        out.pair.dA.at(2, i, j, k) = dAm.at(2, i, j, k) - dot(md.grad3.vec_at(i, j, k), df);
      }

  // realized surface perturbation and the admissibility diagnostics
  const SurfaceGrid sg(g, *map);
  out.pair.deta = SurfaceScalar(g.nx, g.ny);
  const double anorm = std::max(A.inf_norm(), 1.0);
  const double dnorm = std::max(out.pair.dF.inf_norm(), 1.0);
  double gap = 0.0, var5 = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const SurfaceFrame& f = sg.at(i, j);
      const Vec3 X = g.ref_point(i, j, g.nz);
      const Vec3 df = out.pair.dF.vec_at(i, j, g.nz);
      out.pair.deta.at(i, j) = dot(df, f.n);
      const double req = eta_eval(deta, 0, 0, X.x, X.y);
      gap = std::max(gap, std::fabs(out.pair.deta.at(i, j) - req));

      const Mat3 J = map->jacobian(X);
      const Mat3 dJ = pm.displacement_jacobian(X);
      const Vec3 dN = cross(dJ.col(0), J.col(1)) + cross(J.col(0), dJ.col(1));
      const Vec3 dn = (dN - f.n * dot(f.n, dN)) * (1.0 / f.area_element);
      const Vec3 res = cross(dAm.vec_at(i, j, g.nz), f.n) + cross(A.vec_at(i, j, g.nz), dn);
      var5 = std::max(var5, res.inf_norm());
    }
  out.pair.deta_gap = gap + mollification;
  out.pair.var5_residual = var5 / (anorm * dnorm);

  double bot = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      bot = std::max(bot, std::max(std::fabs(out.pair.dA.at(0, i, j, 0)),
                                   std::fabs(out.pair.dA.at(1, i, j, 0))));
  out.pair.bottom_dAxn = bot;
  out.pair.provenance = "transport-generated";
  return out;
}

}  // namespace bwf
