#include "bwf/operators.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "bwf/fd_z.hpp"
#include "bwf/fft.hpp"
#include "bwf/surface.hpp"

namespace bwf {

namespace {

// Reference-space partials of all three components: spectral in plane, D1 in z.
struct RefDerivs {
  std::vector<double> dx[3], dy[3], dz[3];
};

RefDerivs reference_derivatives(const VectorField& field) {
  const Grid& g = field.grid;
  RefDerivs r;
  const std::vector<double> d1 = d1_matrix(g.nz, g.hz());
  for (int c = 0; c < 3; ++c) {
    r.dx[c].resize(g.nnode());
    r.dy[c].resize(g.nnode());
    r.dz[c].resize(g.nnode());
    const double* comp = field.component(c);
    for (int k = 0; k <= g.nz; ++k) {
      const std::size_t off = g.sidx(0, 0, k);
      plane_derivatives(g, comp + off, r.dx[c].data() + off, r.dy[c].data() + off);
    }
    apply_d1(g, d1, comp, r.dz[c].data());
  }
  return r;
}

}  // namespace

MappedDerivs mapped_derivatives(const VectorField& field, const DomainMap& map) {
  const Grid& g = field.grid;
  const RefDerivs r = reference_derivatives(field);

  MappedDerivs out{VectorField(g), ScalarField(g), VectorField(g), VectorField(g),
                   VectorField(g)};
  VectorField* grads[3] = {&out.grad1, &out.grad2, &out.grad3};

  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t s = g.sidx(i, j, k);
        Mat3 Jit = Mat3::identity();  // DF^{-1}, applied transposed
        if (!map.is_identity()) Jit = map.jacobian(g.ref_point(i, j, k)).inverse();
        Vec3 gph[3];
        for (int c = 0; c < 3; ++c) {
          const Vec3 gref{r.dx[c][s], r.dy[c][s], r.dz[c][s]};
          gph[c] = Jit.tmul(gref);
          grads[c]->set_vec(i, j, k, gph[c]);
        }
        out.curl.set_vec(i, j, k,
                         {gph[2].y - gph[1].z, gph[0].z - gph[2].x, gph[1].x - gph[0].y});
        out.div.v[s] = gph[0].x + gph[1].y + gph[2].z;
      }
  return out;
}

VectorField mapped_curl(const VectorField& field, const DomainMap& map) {
  return mapped_derivatives(field, map).curl;
}

ScalarField mapped_div(const VectorField& field, const DomainMap& map) {
  const Grid& g = field.grid;
  const RefDerivs r = reference_derivatives(field);
  ScalarField div(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t s = g.sidx(i, j, k);
        Mat3 Jit = Mat3::identity();
        if (!map.is_identity()) Jit = map.jacobian(g.ref_point(i, j, k)).inverse();
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) {
          const Vec3 gph = Jit.tmul({r.dx[c][s], r.dy[c][s], r.dz[c][s]});
          acc += (c == 0) ? gph.x : (c == 1) ? gph.y : gph.z;
        }
        div.v[s] = acc;
      }
  return div;
}

VectorField mapped_grad(const ScalarField& sfield, const DomainMap& map) {
  const Grid& g = sfield.grid;
  std::vector<double> dx(g.nnode()), dy(g.nnode()), dz(g.nnode());
  horizontal_derivatives(g, sfield.v, dx, dy);
  const std::vector<double> d1 = d1_matrix(g.nz, g.hz());
  apply_d1(g, d1, sfield.v.data(), dz.data());

  VectorField grad(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t s = g.sidx(i, j, k);
        Vec3 gref{dx[s], dy[s], dz[s]};
        if (!map.is_identity())
          gref = map.jacobian(g.ref_point(i, j, k)).inverse().tmul(gref);
        grad.set_vec(i, j, k, gref);
      }
  return grad;
}

BeltramiResiduals beltrami_residuals(const VectorField& field, const DomainMap& map,
                                     double alpha) {
  const Grid& g = field.grid;
  const MappedDerivs md = mapped_derivatives(field, map);

  BeltramiResiduals res;
  for (std::size_t p = 0; p < g.nnode(); ++p) {
    for (int c = 0; c < 3; ++c) {
      const double rc = md.curl.v[static_cast<std::size_t>(c) * g.nnode() + p] -
                        alpha * field.v[static_cast<std::size_t>(c) * g.nnode() + p];
      res.curl_minus_alpha_u = std::max(res.curl_minus_alpha_u, std::fabs(rc));
    }
    res.div_u = std::max(res.div_u, std::fabs(md.div.v[p]));
  }

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 xy = g.lat.point(g.a1(i), g.a2(j));
      const SurfaceFrame f = build_frame(map, xy.x, xy.y);
      res.un_top = std::max(res.un_top, std::fabs(dot(field.vec_at(i, j, g.nz), f.n)));
      // flat bottom: outward normal is -e3
      res.un_bottom = std::max(res.un_bottom, std::fabs(field.at(2, i, j, 0)));
    }
  return res;
}

ScalarField bernoulli_pressure(const VectorField& field, const DomainMap& map, double C,
                               double g) {
  const Grid& gr = field.grid;
  ScalarField p(gr);
  for (int k = 0; k <= gr.nz; ++k)
    for (int j = 0; j < gr.ny; ++j)
      for (int i = 0; i < gr.nx; ++i) {
        const Vec3 u = field.vec_at(i, j, k);
        const double z = map.value(gr.ref_point(i, j, k)).z;
        p.v[gr.sidx(i, j, k)] = C - 0.5 * dot(u, u) - g * z;
      }
  return p;
}

}  // namespace bwf
