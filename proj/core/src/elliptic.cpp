#include "bwf/elliptic.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bwf/fd_z.hpp"
#include "bwf/fft.hpp"

namespace bwf {

namespace {

// Exact per-mode solver for the flat composed Laplacian: for each horizontal
// Fourier bin, (D1^2 - |k|^2) with the wall rows replaced by identity. Also
// serves as the preconditioner for curved maps.
class FlatModeSolver {
 public:
  FlatModeSolver(const Grid& g) : g_(g), spect_(g), fft_(g.nx, g.ny) {
    const int n = g.nlev();
    Eigen::MatrixXd D1(n, n);
    const std::vector<double> d1 = d1_matrix(g.nz, g.hz());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) D1(r, c) = d1[static_cast<std::size_t>(r) * n + c];
    const Eigen::MatrixXd D2 = D1 * D1;

    const std::size_t nbins = static_cast<std::size_t>(spect_.nkx) * g.ny;
    lus_.reserve(nbins);
    for (int my = 0; my < g.ny; ++my)
      for (int mx = 0; mx < spect_.nkx; ++mx) {
        const std::size_t b = spect_.bin(mx, my);
        // plane_derivatives zeroes Nyquist bins, so the composed flat operator
        // acts there as the bare vertical Laplacian: build those modes with
        // k^2 = 0 to stay the exact inverse on every bin.
        const bool nyq = (2 * mx == g.nx) || (2 * std::abs(fft_mode(my, g.ny)) == g.ny);
        const double k2 =
            nyq ? 0.0 : spect_.kx[b] * spect_.kx[b] + spect_.ky[b] * spect_.ky[b];
        Eigen::MatrixXd M = D2 - k2 * Eigen::MatrixXd::Identity(n, n);
        M.row(0).setZero();
        M(0, 0) = 1.0;
        M.row(n - 1).setZero();
        M(n - 1, n - 1) = 1.0;
        lus_.emplace_back(M);
      }
  }

  // b carries the Dirichlet data in its wall rows.
  void solve(const std::vector<double>& b, std::vector<double>& x) const {
    const int n = g_.nlev();
    const int nkx = spect_.nkx;
    const std::size_t nbins = static_cast<std::size_t>(nkx) * g_.ny;
    std::vector<std::complex<double>> spec(nbins * static_cast<std::size_t>(n));
    std::vector<std::complex<double>> plane(nbins);
    for (int k = 0; k < n; ++k) {
      fft_.forward(b.data() + g_.sidx(0, 0, k), plane.data());
      for (std::size_t q = 0; q < nbins; ++q)
        spec[q * static_cast<std::size_t>(n) + k] = plane[q];
    }

    Eigen::MatrixXd rhs(n, 2), sol(n, 2);
    for (int my = 0; my < g_.ny; ++my)
      for (int mx = 0; mx < nkx; ++mx) {
        const std::size_t q = spect_.bin(mx, my);
        std::complex<double>* col = spec.data() + q * static_cast<std::size_t>(n);
        for (int k = 0; k < n; ++k) {
          rhs(k, 0) = col[k].real();
          rhs(k, 1) = col[k].imag();
        }
        sol = lus_[q].solve(rhs);
        for (int k = 0; k < n; ++k) col[k] = {sol(k, 0), sol(k, 1)};
      }

    x.resize(b.size());
    for (int k = 0; k < n; ++k) {
      for (std::size_t q = 0; q < nbins; ++q)
        plane[q] = spec[q * static_cast<std::size_t>(n) + k];
      fft_.inverse(plane.data(), x.data() + g_.sidx(0, 0, k));
    }
  }

 private:
  Grid g_;
  SpectralXY spect_;
  Fft2 fft_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lus_;
};

// Matrix-free composed operator div(grad(.)) with identity wall rows.
class ChainOp {
 public:
  ChainOp(const Grid& g, const DomainMap& map) : g_(g), d1_(d1_matrix(g.nz, g.hz())) {
    flat_ = map.is_identity();
    if (!flat_) {
      jit_.resize(g.nnode());
      for (int k = 0; k <= g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
          for (int i = 0; i < g.nx; ++i)
            jit_[g.sidx(i, j, k)] = map.jacobian(g.ref_point(i, j, k)).inverse();
    }
  }

  void gradient(const std::vector<double>& x, std::vector<double>* comp) const {
    std::vector<double>& dx = comp[0];
    std::vector<double>& dy = comp[1];
    std::vector<double>& dz = comp[2];
    dx.resize(g_.nnode());
    dy.resize(g_.nnode());
    dz.resize(g_.nnode());
    for (int k = 0; k <= g_.nz; ++k) {
      const std::size_t off = g_.sidx(0, 0, k);
      plane_derivatives(g_, x.data() + off, dx.data() + off, dy.data() + off);
    }
    apply_d1(g_, d1_, x.data(), dz.data());
    if (flat_) return;
    for (std::size_t s = 0; s < g_.nnode(); ++s) {
      const Vec3 gph = jit_[s].tmul({dx[s], dy[s], dz[s]});
      dx[s] = gph.x;
      dy[s] = gph.y;
      dz[s] = gph.z;
    }
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    gradient(x, gcomp_);
    y.assign(g_.nnode(), 0.0);
    // gradient() already returns physical components, so the divergence is
    // just the c-th physical derivative of the c-th component summed up;
    // this keeps apply() the exact composition of the two first-order ops.
    for (int c = 0; c < 3; ++c) {
      gradient(gcomp_[c], dcomp_);
      const std::vector<double>& pick = dcomp_[c];
      for (std::size_t s = 0; s < g_.nnode(); ++s) y[s] += pick[s];
    }
    // wall rows are identity (Dirichlet)
    const std::size_t plane = g_.plane();
    for (std::size_t p = 0; p < plane; ++p) {
      y[p] = x[p];
      y[g_.sidx(0, 0, g_.nz) + p] = x[g_.sidx(0, 0, g_.nz) + p];
    }
  }

 private:
  Grid g_;
  std::vector<double> d1_;
  bool flat_ = false;
  std::vector<Mat3> jit_;
  mutable std::vector<double> gcomp_[3];
  mutable std::vector<double> dcomp_[3];
};

double dot_v(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_v(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

DirichletSolution solve_dirichlet(const DirichletProblem& problem, const Grid& grid,
                                  double tol, int max_iter) {
  if (problem.map == nullptr)
    throw Error(ErrorKind::contract_violation, "elliptic", "problem has no map");
  const DomainMap& map = *problem.map;
  const std::size_t plane = grid.plane();
  if (problem.top.v.size() != plane || problem.bottom.v.size() != plane)
    throw Error(ErrorKind::contract_violation, "elliptic", "boundary data size mismatch");
  if (!problem.rho.v.empty() && problem.rho.v.size() != grid.nnode())
    throw Error(ErrorKind::contract_violation, "elliptic", "source size mismatch");

  // right-hand side: source at interior rows, Dirichlet data on the walls
  std::vector<double> b(grid.nnode(), 0.0);
  if (!problem.rho.v.empty()) b = problem.rho.v;
  for (std::size_t p = 0; p < plane; ++p) {
    b[p] = problem.bottom.v[p];
    b[grid.sidx(0, 0, grid.nz) + p] = problem.top.v[p];
  }

  FlatModeSolver flat(grid);
  DirichletSolution out;
  out.phi = ScalarField(grid);

  const double bnorm = std::sqrt(dot_v(b, b));
  if (bnorm == 0.0) {
    out.grad = VectorField(grid);
    out.residual = 0.0;
    return out;
  }

  std::vector<double>& x = out.phi.v;
  if (map.is_identity()) {
    flat.solve(b, x);
    ChainOp op(grid, map);
    std::vector<double> ax(grid.nnode());
    op.apply(x, ax);
    for (std::size_t s = 0; s < grid.nnode(); ++s) ax[s] -= b[s];
    out.residual = inf_v(ax) / std::max(inf_v(b), 1e-300);
    out.iterations = 0;
  } else {
    // BiCGStab, right-preconditioned by the flat per-mode solve
    ChainOp op(grid, map);
    const std::size_t n = grid.nnode();
    std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), y(n), z(n), t(n), ax(n);

    flat.solve(b, x);
    op.apply(x, ax);
    for (std::size_t q = 0; q < n; ++q) r[q] = b[q] - ax[q];
    rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    int it = 0;
    double rnorm = std::sqrt(dot_v(r, r));
    while (rnorm > tol * bnorm && it < max_iter) {
      const double rho1 = dot_v(rhat, r);
      if (std::fabs(rho1) < 1e-300)
        throw Error(ErrorKind::solver_failure, "elliptic", "BiCGStab breakdown (rho)");
      const double beta = (rho1 / rho) * (alpha / omega);
      for (std::size_t q = 0; q < n; ++q) p[q] = r[q] + beta * (p[q] - omega * v[q]);
      flat.solve(p, y);
      op.apply(y, v);
      const double rv = dot_v(rhat, v);
      if (std::fabs(rv) < 1e-300)
        throw Error(ErrorKind::solver_failure, "elliptic", "BiCGStab breakdown (r.v)");
      alpha = rho1 / rv;
      for (std::size_t q = 0; q < n; ++q) s[q] = r[q] - alpha * v[q];
      if (std::sqrt(dot_v(s, s)) <= tol * bnorm) {
        for (std::size_t q = 0; q < n; ++q) x[q] += alpha * y[q];
        rho = rho1;
        ++it;
        r = s;
        rnorm = std::sqrt(dot_v(r, r));
        break;
      }
      flat.solve(s, z);
      op.apply(z, t);
      const double tt = dot_v(t, t);
      if (tt < 1e-300)
        throw Error(ErrorKind::solver_failure, "elliptic", "BiCGStab breakdown (t.t)");
      omega = dot_v(t, s) / tt;
      for (std::size_t q = 0; q < n; ++q) {
        x[q] += alpha * y[q] + omega * z[q];
        r[q] = s[q] - omega * t[q];
      }
      rho = rho1;
      ++it;
      rnorm = std::sqrt(dot_v(r, r));
    }
    if (rnorm > tol * bnorm)
      throw Error(ErrorKind::solver_failure, "elliptic",
                  "BiCGStab did not converge within the iteration budget");
    op.apply(x, ax);
    for (std::size_t q = 0; q < n; ++q) ax[q] -= b[q];
    out.residual = inf_v(ax) / std::max(inf_v(b), 1e-300);
    out.iterations = it;
  }

  // physical gradient of the solution
  ChainOp op(grid, map);
  std::vector<double> comp[3];
  op.gradient(x, comp);
  out.grad = VectorField(grid);
  for (int c = 0; c < 3; ++c) {
    double* dst = out.grad.component(c);
    for (std::size_t q = 0; q < grid.nnode(); ++q) dst[q] = comp[c][q];
  }
  return out;
}

SurfaceScalar solve_periodic_poisson_2d(const Lattice& lat, const SurfaceScalar& source,
                                        double compat_tol) {
  const int nx = source.nx, ny = source.ny;
  if (nx < 4 || ny < 4)
    throw Error(ErrorKind::config, "elliptic", "poisson_2d needs at least a 4x4 plane");
  const double mean = source.mean();
  if (std::fabs(mean) > compat_tol * (source.inf_norm() + 1.0))
    throw Error(ErrorKind::compatibility, "elliptic",
                "periodic Poisson source must have zero mean");

  Fft2 fft(nx, ny);
  std::vector<std::complex<double>> spec(fft.spec_size());
  fft.forward(source.v.data(), spec.data());
  const int nkx = nx / 2 + 1;
  for (int my = 0; my < ny; ++my) {
    const int m2 = fft_mode(my, ny);
    for (int mx = 0; mx < nkx; ++mx) {
      std::complex<double>& c = spec[static_cast<std::size_t>(my) * nkx + mx];
      if ((mx == 0 && m2 == 0) || 2 * mx == nx || 2 * std::abs(m2) == ny) {
        c = 0.0;
        continue;
      }
      const Vec2 k{mx * lat.recip1.x + m2 * lat.recip2.x,
                   mx * lat.recip1.y + m2 * lat.recip2.y};
      c /= -k.dot(k);
    }
  }
  SurfaceScalar out(nx, ny);
  fft.inverse(spec.data(), out.v.data());
  return out;
}

}  // namespace bwf
