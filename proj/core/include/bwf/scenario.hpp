#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bwf/analytic.hpp"
#include "bwf/domain_map.hpp"
#include "bwf/functionals.hpp"
#include "bwf/grid.hpp"
#include "bwf/lattice.hpp"

namespace bwf {

// Fully resolved run configuration. Parsed from a TOML-style text file
// (sections, key = value, inline numeric arrays); validate() materializes
// defaults and rejects inconsistent input with config errors.
struct Scenario {
  // [lattice]
  Vec2 lambda1{2.0 * M_PI, 0.0};
  Vec2 lambda2{0.0, 2.0 * M_PI};

  // [map]
  std::string map_kind = "identity";
  double depth = 1.0;
  std::vector<std::array<double, 4>> eta_modes;  // amp, m1, m2, phase (integer mode indices)
  double shear_amp = 0.25;
  Vec2 shear_dir{1.0, 0.0};

  // [field]
  std::string field_family = "shear";  // shear | modal | zero | uniform | file
  double field_alpha = 0.0;
  bool field_alpha_set = false;
  double field_amplitude = 1.0;
  int mode_k1 = 1, mode_k2 = 0, mode_m = 1;
  Vec3 uniform_value{0.0, 0.0, 0.0};
  std::string field_file;

  // [params]
  double g = 1.0;
  double sigma = 0.1;
  double params_alpha = 0.0;
  bool params_alpha_set = false;
  double mu = 0.0;

  // [grid]
  int nx = 32, ny = 32, nz = 32;

  // [potential]
  int L = 8;
  int xy_refine = 2;
  int pad_layers = 4;
  bool tail_completion = true;
  bool clean_divergence = false;

  // [tolerances] (all multiplied by tolerance_scale at use sites)
  double tol_curl = 5e-2;
  double tol_bc = 1e-2;
  double tol_flux = 1e-2;
  double tol_residual = 1e-5;
  double tol_var = 1e-3;
  double tolerance_scale = 1.0;

  // [variations]
  int num_variations = 10;
  int var_band = 2;
  double var_amplitude = 0.1;

  // [output]
  std::string out_dir = "out";

  // ---- resolved helpers -----------------------------------------------
  Lattice lattice() const;
  Grid grid() const;
  std::shared_ptr<const DomainMap> make_map() const;
  bool has_analytic_family() const {
    return field_family == "shear" || field_family == "modal";
  }
  AnalyticBeltrami family() const;  // shear / modal only
  PhysicalParams physical_params() const;
  double alpha() const { return params_alpha; }
  double scaled(double tol) const { return tol * tolerance_scale; }
  std::vector<EtaMode> eta_mode_list() const;
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

// Fills derived defaults (alpha resolution etc.) and checks invariants.
// parse_* call this already; exposed for programmatically built scenarios.
void validate_scenario(Scenario& s);

}  // namespace bwf
