// bwf — scenario-driven driver for the Beltrami free-surface toolkit.
//
// Subcommands: verify-beltrami, construct-potential, check-variational,
// dump-fields. Every run reads one TOML-style scenario file, writes a JSON
// report that embeds the fully resolved scenario, and records the wall-clock
// runtime in a side <report>.time.txt file so reports stay byte-reproducible.
//
// Exit codes: 0 pass, 1 verification fail, 2 config error, 3 numerical
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bwf/analytic.hpp"
#include "bwf/errors.hpp"
#include "bwf/field.hpp"
#include "bwf/functionals.hpp"
#include "bwf/grid.hpp"
#include "bwf/io.hpp"
#include "bwf/operators.hpp"
#include "bwf/potential.hpp"
#include "bwf/rng.hpp"
#include "bwf/scenario.hpp"
#include "bwf/surface.hpp"
#include "bwf/transport.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace bwf;

namespace {

struct RunOpts {
  std::string config;
  std::string out_override;
  int threads = 1;
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  bool csv = false;  // dump-fields only
};

void add_common(CLI::App* cmd, RunOpts& o) {
  cmd->add_option("--config", o.config, "scenario file (TOML-style)")->required();
  cmd->add_option("--out", o.out_override, "output directory (overrides [output] dir)");
  cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  cmd->add_option("--seed", o.seed, "RNG seed for generated variations");
  cmd->add_option("--tolerance-scale", o.tol_scale, "multiply every tolerance by this factor");
}

Scenario load_scenario(const RunOpts& o) {
  if (!(o.tol_scale > 0.0) || !std::isfinite(o.tol_scale))
    throw Error(ErrorKind::config, "cli", "--tolerance-scale must be a positive finite number");
  if (o.threads < 0) throw Error(ErrorKind::config, "cli", "--threads must be >= 0");
  Scenario s = parse_scenario_file(o.config);
  s.tolerance_scale *= o.tol_scale;
  if (!o.out_override.empty()) s.out_dir = o.out_override;
  return s;
}

json scenario_json(const Scenario& s) {
  json j;
  j["lattice"] = {{"lambda1", {s.lambda1.x, s.lambda1.y}},
                  {"lambda2", {s.lambda2.x, s.lambda2.y}}};
  json eta = json::array();
  for (const auto& m : s.eta_modes) eta.push_back({m[0], m[1], m[2], m[3]});
  j["map"] = {{"kind", s.map_kind},
              {"depth", s.depth},
              {"eta", eta},
              {"shear_amp", s.shear_amp},
              {"shear_dir", {s.shear_dir.x, s.shear_dir.y}}};
  j["field"] = {{"family", s.field_family},
                {"alpha", s.field_alpha},
                {"amplitude", s.field_amplitude},
                {"k1", s.mode_k1},
                {"k2", s.mode_k2},
                {"m", s.mode_m},
                {"uniform", {s.uniform_value.x, s.uniform_value.y, s.uniform_value.z}},
                {"file", s.field_file}};
  j["params"] = {{"g", s.g}, {"sigma", s.sigma}, {"alpha", s.params_alpha}, {"mu", s.mu}};
  j["grid"] = {{"nx", s.nx}, {"ny", s.ny}, {"nz", s.nz}};
  j["potential"] = {{"L", s.L},
                    {"xy_refine", s.xy_refine},
                    {"pad_layers", s.pad_layers},
                    {"tail_completion", s.tail_completion},
                    {"clean_divergence", s.clean_divergence}};
  j["tolerances"] = {{"curl", s.tol_curl},
                     {"bc", s.tol_bc},
                     {"flux", s.tol_flux},
                     {"residual", s.tol_residual},
                     {"var", s.tol_var},
                     {"scale", s.tolerance_scale}};
  j["variations"] = {{"count", s.num_variations}, {"band", s.var_band}, {"amplitude", s.var_amplitude}};
  j["output"] = {{"dir", s.out_dir}};
  return j;
}

// Sample the scenario field at the mapped nodes.
VectorField sample_field(const Scenario& s, const Grid& g, const DomainMap& map) {
  if (s.has_analytic_family()) return evaluate_analytic(s.family(), g, map);
  if (s.field_family == "zero") return VectorField(g);
  if (s.field_family == "uniform") {
    VectorField u(g);
    for (int k = 0; k <= g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.set_vec(i, j, k, s.uniform_value);
    return u;
  }
  // family == "file"
  VectorField u = read_field_dump(s.field_file);
  const Grid& fg = u.grid;
  const bool match = fg.nx == g.nx && fg.ny == g.ny && fg.nz == g.nz &&
                     std::fabs(fg.d - g.d) < 1e-12 * (1.0 + std::fabs(g.d)) &&
                     (fg.lat.lambda1 - g.lat.lambda1).norm() < 1e-12 &&
                     (fg.lat.lambda2 - g.lat.lambda2).norm() < 1e-12;
  if (!match)
    throw Error(ErrorKind::config, "cli",
                "field file grid does not match the scenario grid/lattice/depth");
  return u;
}

// Closed-form potential for the scenario family; on curved maps the flat
// potential is carried over with the frame transport, which preserves the
// tangential wall conditions.
VectorField potential_for(const Scenario& s, const Grid& g,
                          const std::shared_ptr<const DomainMap>& map) {
  if (!s.has_analytic_family())
    throw Error(ErrorKind::config, "cli",
                "check-variational needs an analytic field family (shear or modal)");
  if (map->is_identity()) return evaluate_analytic_potential(s.family(), g, *map);
  const IdentityMap flat(map->depth());
  VectorField Ahat = evaluate_analytic_potential(s.family(), g, flat);
  return transport(*map, Ahat);
}

std::vector<EtaMode> gen_variation(const Lattice& lat, int band, double amplitude, Rng r) {
  std::vector<EtaMode> modes;
  const int nmodes = 1 + static_cast<int>(r.next_u64() % 2);
  for (int m = 0; m < nmodes; ++m) {
    int k1 = 0, k2 = 0;
    do {
      k1 = static_cast<int>(r.next_u64() % (2 * band + 1)) - band;
      k2 = static_cast<int>(r.next_u64() % (2 * band + 1)) - band;
    } while (k1 == 0 && k2 == 0);
    modes.push_back({amplitude * r.uniform(0.5, 1.5), lat.wavevector(k1, k2),
                     r.uniform(0.0, 2.0 * M_PI)});
  }
  return modes;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cli", "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::io, "cli", "short write to '" + path.string() + "'");
}

void write_report(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }
  void dump(const fs::path& report_path) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f\n", seconds());
    fs::path p = report_path;
    p += ".time.txt";
    write_text(p, buf);
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

int cmd_verify_beltrami(const RunOpts& o) {
  Stopwatch clock;
  Scenario s = load_scenario(o);
  auto map = s.make_map();
  Grid g = s.grid();
  VectorField u = sample_field(s, g, *map);
  BeltramiResiduals r = beltrami_residuals(u, *map, s.alpha());

  const double tol = s.scaled(s.tol_residual);
  const bool pass =
      r.curl_minus_alpha_u <= tol && r.div_u <= tol && r.un_top <= tol && r.un_bottom <= tol;

  json j;
  j["command"] = "verify-beltrami";
  j["scenario"] = scenario_json(s);
  j["alpha"] = s.alpha();
  j["residuals"] = {{"curl_minus_alpha_u", r.curl_minus_alpha_u},
                    {"div_u", r.div_u},
                    {"un_top", r.un_top},
                    {"un_bottom", r.un_bottom}};
  j["tolerance"] = tol;
  j["pass"] = pass;

  fs::create_directories(s.out_dir);
  const fs::path report = fs::path(s.out_dir) / "verify_beltrami.json";
  write_report(report, j);
  clock.dump(report);
  return pass ? 0 : 1;
}

int cmd_construct_potential(const RunOpts& o) {
  Stopwatch clock;
  Scenario s = load_scenario(o);
  auto map = s.make_map();
  Grid g = s.grid();
  VectorField u = sample_field(s, g, *map);

  AssembleOptions opts;
  opts.pv.xy_refine = s.xy_refine;
  opts.pv.pad_layers = s.pad_layers;
  opts.pv.tail_completion = s.tail_completion;
  opts.pv.threads = o.threads;
  opts.tol_curl = s.scaled(s.tol_curl);
  opts.tol_bc = s.scaled(s.tol_bc);
  opts.tol_flux = s.scaled(s.tol_flux);
  opts.clean_divergence = s.clean_divergence;
  PotentialResult res = assemble_potential(u, *map, g, s.L, opts);

  fs::create_directories(s.out_dir);
  write_field_dump((fs::path(s.out_dir) / "A.bwf").string(), res.A);

  json j;
  j["command"] = "construct-potential";
  j["scenario"] = scenario_json(s);
  j["constants"] = {{"m1", res.m1}, {"m2", res.m2}};
  j["fluxes"] = {{"a1", res.flux_a1},
                 {"a2", res.flux_a2},
                 {"gap1", res.flux_gap1},
                 {"gap2", res.flux_gap2}};
  j["diagnostics"] = {{"curl_err", res.curl_err},
                      {"bc_top", res.bc_top},
                      {"bc_bottom_dev", res.bc_bottom_dev},
                      {"div_A", res.div_A},
                      {"tail_estimate", res.tail_estimate},
                      {"conservativity_top", res.conservativity_top},
                      {"conservativity_bottom", res.conservativity_bottom}};
  j["warnings"] = res.warnings;
  j["pass"] = res.within_tolerances;
  j["dump"] = "A.bwf";

  const fs::path report = fs::path(s.out_dir) / "construct_potential.json";
  write_report(report, j);
  clock.dump(report);
  return res.within_tolerances ? 0 : 1;
}

int cmd_check_variational(const RunOpts& o) {
  Stopwatch clock;
  Scenario s = load_scenario(o);
  auto map = s.make_map();
  Grid g = s.grid();
  const Lattice lat = s.lattice();
  const PhysicalParams params = s.physical_params();

  VectorField A = potential_for(s, g, map);
  ElResiduals el = el_residuals(A, *map, g, params);
  const double tolv = s.scaled(s.tol_var);
  const bool critical = el.boundary_norm <= tolv;

  // surface weights and chart nodes, reused across variations
  const Quadrature quad(g, *map);

  Rng base(o.seed);
  json variations = json::array();
  bool gaps_ok = true;
  double max_dj_over_l1 = 0.0;
  for (int v = 0; v < s.num_variations; ++v) {
    const std::vector<EtaMode> deta = gen_variation(lat, s.var_band, s.var_amplitude,
                                                    base.split(static_cast<std::uint64_t>(v)));
    AdmissibleResult adm = make_admissible(map, A, deta);
    const FirstVariation fv = first_variation(A, *map, params, adm.pair);
    const FdResult fd = finite_difference_dJ(adm.curve, params, g);

    // ||deta||_L1 and the boundary form -int G deta dS on the mapped surface
    double l1 = 0.0, dj_boundary = 0.0;
    for (int jy = 0; jy < g.ny; ++jy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const Vec3 X = g.ref_point(ix, jy, g.nz);
        const double de = eta_eval(deta, 0, 0, X.x, X.y);
        const double w = quad.surf_w[static_cast<std::size_t>(jy) * g.nx + ix];
        l1 += w * std::fabs(de);
        dj_boundary -= w * el.boundary.at(ix, jy) * de;
      }

    const double denom = std::max({std::fabs(fv.dJ), std::fabs(fd.dJ), l1, 1e-300});
    const double fd_gap = std::fabs(fv.dJ - fd.dJ) / denom;
    const double boundary_gap = std::fabs(fv.dJ - dj_boundary) / denom;
    gaps_ok = gaps_ok && fd_gap <= tolv && boundary_gap <= tolv;
    max_dj_over_l1 = std::max(max_dj_over_l1, std::fabs(fv.dJ) / std::max(l1, 1e-300));

    json jv;
    jv["modes"] = json::array();
    for (const auto& m : deta) jv["modes"].push_back({m.amp, m.k.x, m.k.y, m.phase});
    jv["dJ_analytic"] = fv.dJ;
    jv["dJ_fd"] = fd.dJ;
    jv["dJ_boundary_form"] = dj_boundary;
    jv["fd_error_estimate"] = fd.error_estimate;
    jv["fd_gap"] = fd_gap;
    jv["boundary_gap"] = boundary_gap;
    jv["deta_l1"] = l1;
    jv["dJ_over_l1"] = std::fabs(fv.dJ) / std::max(l1, 1e-300);
    jv["parts"] = {{"dE", fv.dE}, {"dK", fv.dK}, {"dM", fv.dM}};
    jv["admissibility"] = {{"var5_residual", adm.pair.var5_residual},
                           {"bottom_dAxn", adm.pair.bottom_dAxn},
                           {"deta_gap", adm.pair.deta_gap}};
    variations.push_back(jv);
  }

  json j;
  j["command"] = "check-variational";
  j["scenario"] = scenario_json(s);
  j["seed"] = o.seed;
  j["el_residuals"] = {{"interior_norm", el.interior_norm},
                       {"boundary_norm", el.boundary_norm},
                       {"bernoulli_const_dev", el.bernoulli_const_dev}};
  j["verdict"] = critical ? "critical" : "not critical";
  j["max_dJ_over_l1"] = max_dj_over_l1;
  j["variations"] = variations;
  j["tolerance"] = tolv;
  j["pass"] = gaps_ok;

  fs::create_directories(s.out_dir);
  const fs::path report = fs::path(s.out_dir) / "check_variational.json";
  write_report(report, j);
  clock.dump(report);
  return gaps_ok ? 0 : 1;
}

int cmd_dump_fields(const RunOpts& o) {
  Stopwatch clock;
  Scenario s = load_scenario(o);
  auto map = s.make_map();
  Grid g = s.grid();
  VectorField u = sample_field(s, g, *map);

  fs::create_directories(s.out_dir);
  write_field_dump((fs::path(s.out_dir) / "u.bwf").string(), u);
  if (o.csv) write_field_csv((fs::path(s.out_dir) / "u.csv").string(), u);

  json j;
  j["command"] = "dump-fields";
  j["scenario"] = scenario_json(s);
  j["dump"] = "u.bwf";
  j["csv"] = o.csv ? "u.csv" : "";
  j["inf_norm"] = u.inf_norm();
  j["pass"] = true;

  const fs::path report = fs::path(s.out_dir) / "dump_fields.json";
  write_report(report, j);
  clock.dump(report);
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::config:
    case ErrorKind::unsupported_configuration:
      return 2;
    case ErrorKind::io:
      // an unreadable scenario file is a configuration problem
      return e.stage() == "scenario" ? 2 : 3;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beltrami free-surface toolkit"};
  app.require_subcommand(1);

  RunOpts o;
  CLI::App* verify = app.add_subcommand("verify-beltrami", "residuals of curl u = alpha u");
  CLI::App* construct = app.add_subcommand("construct-potential", "assemble the vector potential");
  CLI::App* variational = app.add_subcommand("check-variational", "first-variation checks");
  CLI::App* dump = app.add_subcommand("dump-fields", "sample the scenario field and dump it");
  for (CLI::App* cmd : {verify, construct, variational, dump}) add_common(cmd, o);
  dump->add_flag("--csv", o.csv, "also write a CSV export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int c = app.exit(e);
    return c == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify_beltrami(o);
    if (construct->parsed()) return cmd_construct_potential(o);
    if (variational->parsed()) return cmd_check_variational(o);
    return cmd_dump_fields(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "bwf: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bwf: %s\n", e.what());
    return 3;
  }
}
