#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "bwf/errors.hpp"
#include "bwf/lattice.hpp"
#include "bwf/vec.hpp"

namespace bwf {

// Third derivatives of one map component: t[i][j][k] = d^3 F_c / dxi_i dxi_j dxi_k.
struct Ten3 {
  std::array<double, 27> t{};
  double& operator()(int i, int j, int k) { return t[9 * i + 3 * j + k]; }
  double operator()(int i, int j, int k) const { return t[9 * i + 3 * j + k]; }
};

// Diffeomorphism F of the reference slab D = R^2 x (-d, 0):
//   * F(X, Y, -d) = (X, Y, -d) (flat bottom),
//   * F - id is lattice-periodic,
//   * det DF > 0.
// hessian()[c](i,j) = d^2 F_c / dxi_i dxi_j. third() is only needed by the
// admissible-variation machinery and only the closed-form kinds provide it.
class DomainMap {
 public:
  explicit DomainMap(double depth) : d_(depth) {
    if (!(depth > 0.0)) throw Error(ErrorKind::config, "map", "depth must be positive");
  }
  virtual ~DomainMap() = default;

  double depth() const { return d_; }
  virtual std::string kind_name() const = 0;
  virtual bool is_identity() const { return false; }

  virtual Vec3 value(const Vec3& X) const = 0;
  virtual Mat3 jacobian(const Vec3& X) const = 0;
  virtual std::array<Mat3, 3> hessian(const Vec3& X) const = 0;
  virtual std::array<Ten3, 3> third(const Vec3& X) const {
    (void)X;
    throw Error(ErrorKind::unsupported_configuration, "map",
                kind_name() + " does not provide third derivatives");
  }

 private:
  double d_;
};

class IdentityMap final : public DomainMap {
 public:
  explicit IdentityMap(double depth) : DomainMap(depth) {}
  std::string kind_name() const override { return "identity"; }
  bool is_identity() const override { return true; }
  Vec3 value(const Vec3& X) const override { return X; }
  Mat3 jacobian(const Vec3&) const override { return Mat3::identity(); }
  std::array<Mat3, 3> hessian(const Vec3&) const override { return {}; }
  std::array<Ten3, 3> third(const Vec3&) const override { return {}; }
};

// One Fourier mode of a periodic surface profile.
struct EtaMode {
  double amp = 0.0;
  Vec2 k;  // physical wavevector (must lie on the reciprocal lattice)
  double phase = 0.0;
};

// eta(X,Y) = sum_m amp cos(k.x + phase) with derivatives of any order.
double eta_eval(const std::vector<EtaMode>& modes, int dx, int dy, double X, double Y);

// F(X,Y,Z) = (X, Y, Z + (1 + Z/d) eta(X,Y)).
class GraphLiftMap final : public DomainMap {
 public:
  GraphLiftMap(double depth, std::vector<EtaMode> modes)
      : DomainMap(depth), modes_(std::move(modes)) {}
  std::string kind_name() const override { return "graph_lift"; }
  const std::vector<EtaMode>& modes() const { return modes_; }

  double eta(int dx, int dy, double X, double Y) const { return eta_eval(modes_, dx, dy, X, Y); }

  Vec3 value(const Vec3& X) const override;
  Mat3 jacobian(const Vec3& X) const override;
  std::array<Mat3, 3> hessian(const Vec3& X) const override;
  std::array<Ten3, 3> third(const Vec3& X) const override;

 private:
  std::vector<EtaMode> modes_;
};

// Volume-preserving horizontal shear: F = (X + s(Z) w1, Y + s(Z) w2, Z) with
// s(Z) = amp (1 + Z/d)^2, so the displacement vanishes at the bottom and the
// surface is the translated plane z = 0. det DF = 1 identically.
class ShearMap final : public DomainMap {
 public:
  ShearMap(double depth, double amp, Vec2 dir) : DomainMap(depth), amp_(amp), dir_(dir) {}
  std::string kind_name() const override { return "shear"; }

  Vec3 value(const Vec3& X) const override;
  Mat3 jacobian(const Vec3& X) const override;
  std::array<Mat3, 3> hessian(const Vec3& X) const override;
  std::array<Ten3, 3> third(const Vec3&) const override { return {}; }

 private:
  double amp_;
  Vec2 dir_;
};

// Fallback kind: the displacement F - id is given by horizontal Fourier
// coefficients tabulated per z-level; evaluation is spectral in (X,Y) and
// piecewise quintic Lagrange in Z. The bottom level is forced to zero to
// honour the flat-bottom requirement.
class SampledDisplacementMap final : public DomainMap {
 public:
  // disp: component-major samples of F - id, layout as Grid::sidx over an
  // (mx, my, levels) grid spanning one cell, level 0 at Z = -d.
  SampledDisplacementMap(const Lattice& lat, double depth, int mx, int my, int levels,
                         const std::vector<double>& disp);
  std::string kind_name() const override { return "sampled"; }

  Vec3 value(const Vec3& X) const override;
  Mat3 jacobian(const Vec3& X) const override;
  std::array<Mat3, 3> hessian(const Vec3& X) const override;

 private:
  template <int ORDER>
  void accumulate(const Vec3& X, Vec3& F, Mat3& J, std::array<Mat3, 3>& H) const;

  Lattice lat_;
  int mx_, my_, levels_;
  // spectra_[c][lev] holds mx*my complex pairs (re, im) in mode order
  std::vector<double> spectra_re_, spectra_im_;
  std::size_t cidx(int c, int lev, int m1, int m2) const {
    return ((static_cast<std::size_t>(c) * levels_ + lev) * my_ + m2) * mx_ + m1;
  }
};

}  // namespace bwf
