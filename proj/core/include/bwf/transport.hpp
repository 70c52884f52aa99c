#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bwf/domain_map.hpp"
#include "bwf/field.hpp"
#include "bwf/grid.hpp"

namespace bwf {

// Transport map between fields on the reference slab and fields on the mapped
// cell: T_F Ahat = Ahat_1 F_X + Ahat_2 F_Y + Ahat_3 (F_X x F_Y), pointwise in
// the reference node. Linear and invertible (the frame basis is nonsingular
// wherever det DF > 0); carries (Ahat_1, Ahat_2) = 0 walls to A x n = 0 walls
// and back.
VectorField transport(const DomainMap& map, const VectorField& Ahat);
VectorField transport_inverse(const DomainMap& map, const VectorField& A);

// Map perturbed along the normal-extension construction:
//   F_t = F + t dF,   dF(X,Y,Z) = deta(X,Y) chi(Z) (F_X x F_Y)/|F_X x F_Y|,
// with chi a C3 ramp vanishing for Z <= -d/2 and chi(0) = 1. deta is a
// finite Fourier sum, so all derivatives are closed-form (the hessian of dF
// needs third derivatives of F).
class PerturbedMap final : public DomainMap {
 public:
  PerturbedMap(std::shared_ptr<const DomainMap> base, std::vector<EtaMode> deta, double t);
  std::string kind_name() const override { return "perturbed"; }

  Vec3 value(const Vec3& X) const override;
  Mat3 jacobian(const Vec3& X) const override;
  std::array<Mat3, 3> hessian(const Vec3& X) const override;

  // The displacement direction field and its first derivatives at t = 0.
  Vec3 displacement(const Vec3& X) const;       // dF
  Mat3 displacement_jacobian(const Vec3& X) const;  // D(dF)

 private:
  std::shared_ptr<const DomainMap> base_;
  std::vector<EtaMode> deta_;
  double t_;
};

// Admissible variation data at t = 0 for the curve
//   F(t) = F + t dF_eps,  A(t) = T_{F(t)} T_F^{-1} A  (pullback-node samples).
struct AdmissiblePair {
  VectorField dF;               // dF at the reference nodes
  VectorField dA;               // Eulerian dA = dM Ahat - (grad A) dF
  SurfaceScalar deta;           // realized deta = dF|_{Z=0} . n
  // verification of the admissibility relations:
  double var5_residual = 0.0;   // top compatibility, relative
  double bottom_dAxn = 0.0;     // max |dA x n| at the bottom
  double deta_gap = 0.0;        // max |deta_realized - deta_requested|
  std::string provenance;       // "transport-generated" or "manual"
};

// Curve handle for finite differencing: F(t) and the transported A(t).
struct TransportCurve {
  std::shared_ptr<const DomainMap> base;
  std::vector<EtaMode> deta;
  VectorField Ahat;             // T_F^{-1} A, fixed along the curve

  std::shared_ptr<const DomainMap> map_at(double t) const;
  VectorField potential_at(double t) const;  // samples of A(t) at the nodes
};

struct AdmissibleResult {
  AdmissiblePair pair;
  TransportCurve curve;
};

// Build the admissible pair for a requested surface perturbation. deta is
// given as Fourier modes (already smooth at grid scale; the mollification
// parameter is kept for interface parity and bounds the reported deta_gap).
AdmissibleResult make_admissible(std::shared_ptr<const DomainMap> map, const VectorField& A,
                                 const std::vector<EtaMode>& deta, double mollification = 0.0);

}  // namespace bwf
