#include "bwf/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bwf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& msg) {
  throw Error(ErrorKind::config, "scenario", msg);
}

// raw "section.key" -> value text, plus consumption tracking so unknown keys
// are rejected instead of silently ignored
struct RawConfig {
  std::map<std::string, std::string> kv;
  mutable std::set<std::string> used;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  const std::string* get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  }
};

// strips a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) bad("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      bad("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      bad("line " + std::to_string(lineno) + ": empty key or value");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!raw.kv.emplace(full, val).second)
      bad("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
  }
  return raw;
}

double parse_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || !std::isfinite(x))
    bad(key + ": expected a finite number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& v, const std::string& key) {
  const double x = parse_double(v, key);
  if (std::fabs(x - std::round(x)) > 1e-9) bad(key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(std::llround(x));
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad(key + ": expected true or false, got '" + v + "'");
}

std::string parse_string(const std::string& v, const std::string& key) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.find_first_of(" \t\"[],") != std::string::npos)
    bad(key + ": string values with spaces must be quoted");
  return v;
}

// splits the contents of one [...] at top-level commas
std::vector<std::string> split_array(const std::string& v, const std::string& key) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    bad(key + ": expected an array [ ... ]");
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const char c = v[i];
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) parts.push_back(trim(cur));
  if (depth != 0) bad(key + ": unbalanced brackets");
  return parts;
}

Vec2 parse_vec2(const std::string& v, const std::string& key) {
  const std::vector<std::string> p = split_array(v, key);
  if (p.size() != 2) bad(key + ": expected exactly 2 numbers");
  return {parse_double(p[0], key), parse_double(p[1], key)};
}

Vec3 parse_vec3(const std::string& v, const std::string& key) {
  const std::vector<std::string> p = split_array(v, key);
  if (p.size() != 3) bad(key + ": expected exactly 3 numbers");
  return {parse_double(p[0], key), parse_double(p[1], key), parse_double(p[2], key)};
}

struct Fetch {
  const RawConfig& raw;

  void num(const std::string& key, double& out) const {
    if (const std::string* v = raw.get(key)) out = parse_double(*v, key);
  }
  void integer(const std::string& key, int& out) const {
    if (const std::string* v = raw.get(key)) out = parse_int(*v, key);
  }
  void boolean(const std::string& key, bool& out) const {
    if (const std::string* v = raw.get(key)) out = parse_bool(*v, key);
  }
  void str(const std::string& key, std::string& out) const {
    if (const std::string* v = raw.get(key)) out = parse_string(*v, key);
  }
  void vec2(const std::string& key, Vec2& out) const {
    if (const std::string* v = raw.get(key)) out = parse_vec2(*v, key);
  }
  void vec3(const std::string& key, Vec3& out) const {
    if (const std::string* v = raw.get(key)) out = parse_vec3(*v, key);
  }
};

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  const RawConfig raw = tokenize(text);
  const Fetch f{raw};
  Scenario s;

  f.vec2("lattice.lambda1", s.lambda1);
  f.vec2("lattice.lambda2", s.lambda2);

  f.str("map.kind", s.map_kind);
  f.num("map.depth", s.depth);
  if (const std::string* v = raw.get("map.eta")) {
    for (const std::string& entry : split_array(*v, "map.eta")) {
      const std::vector<std::string> e = split_array(entry, "map.eta");
      if (e.size() != 4) bad("map.eta: each mode is [amp, m1, m2, phase]");
      s.eta_modes.push_back({parse_double(e[0], "map.eta"), parse_double(e[1], "map.eta"),
                             parse_double(e[2], "map.eta"), parse_double(e[3], "map.eta")});
    }
  }
  f.num("map.shear_amp", s.shear_amp);
  f.vec2("map.shear_dir", s.shear_dir);

  f.str("field.family", s.field_family);
  if (const std::string* v = raw.get("field.alpha")) {
    s.field_alpha = parse_double(*v, "field.alpha");
    s.field_alpha_set = true;
  }
  f.num("field.amplitude", s.field_amplitude);
  f.integer("field.k1", s.mode_k1);
  f.integer("field.k2", s.mode_k2);
  f.integer("field.m", s.mode_m);
  f.vec3("field.uniform", s.uniform_value);
  f.str("field.file", s.field_file);

  f.num("params.g", s.g);
  f.num("params.sigma", s.sigma);
  if (const std::string* v = raw.get("params.alpha")) {
    s.params_alpha = parse_double(*v, "params.alpha");
    s.params_alpha_set = true;
  }
  f.num("params.mu", s.mu);

  f.integer("grid.nx", s.nx);
  f.integer("grid.ny", s.ny);
  f.integer("grid.nz", s.nz);

  f.integer("potential.L", s.L);
  f.integer("potential.xy_refine", s.xy_refine);
  f.integer("potential.pad_layers", s.pad_layers);
  f.boolean("potential.tail_completion", s.tail_completion);
  f.boolean("potential.clean_divergence", s.clean_divergence);

  f.num("tolerances.curl", s.tol_curl);
  f.num("tolerances.bc", s.tol_bc);
  f.num("tolerances.flux", s.tol_flux);
  f.num("tolerances.residual", s.tol_residual);
  f.num("tolerances.var", s.tol_var);
  f.num("tolerances.scale", s.tolerance_scale);

  f.integer("variations.count", s.num_variations);
  f.integer("variations.band", s.var_band);
  f.num("variations.amplitude", s.var_amplitude);

  f.str("output.dir", s.out_dir);

  for (const auto& [key, val] : raw.kv)
    if (!raw.used.count(key)) bad("unknown key '" + key + "'");

  validate_scenario(s);
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "scenario", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

void validate_scenario(Scenario& s) {
  Lattice::make(s.lambda1, s.lambda2);  // validates the generators
  if (!(s.depth > 0.0) || !std::isfinite(s.depth)) bad("map.depth must be positive");
  if (!(s.sigma > 0.0)) bad("params.sigma must be positive");
  if (!std::isfinite(s.g) || !std::isfinite(s.mu)) bad("params must be finite");

  if (s.map_kind != "identity" && s.map_kind != "graph_lift" && s.map_kind != "shear" &&
      s.map_kind != "sampled")
    bad("map.kind must be identity, graph_lift, shear, or sampled");
  for (const auto& m : s.eta_modes) {
    for (double x : m)
      if (!std::isfinite(x)) bad("map.eta entries must be finite");
    if (std::fabs(m[1] - std::round(m[1])) > 1e-9 || std::fabs(m[2] - std::round(m[2])) > 1e-9)
      bad("map.eta mode indices must be integers");
  }

  if (s.field_family != "shear" && s.field_family != "modal" && s.field_family != "zero" &&
      s.field_family != "uniform" && s.field_family != "file")
    bad("field.family must be shear, modal, zero, uniform, or file");
  if (s.field_family == "shear") {
    if (!s.field_alpha_set) bad("field.family = shear requires field.alpha");
    if (s.field_alpha == 0.0) bad("field.alpha must be nonzero for the shear family");
  }
  if (s.field_family == "modal") {
    if (s.field_alpha_set) bad("field.alpha is derived for the modal family; do not set it");
    if (s.mode_k1 == 0 && s.mode_k2 == 0) bad("modal family needs (k1, k2) != (0, 0)");
    if (s.mode_m < 1) bad("field.m must be >= 1");
  }
  if (s.field_family == "file" && s.field_file.empty())
    bad("field.family = file requires field.file");

  // Grid::make repeats the structural grid checks with their own messages
  Grid::make(Lattice::make(s.lambda1, s.lambda2), s.nx, s.ny, s.nz, s.depth);

  if (s.L < 1) bad("potential.L must be >= 1");
  if (s.xy_refine < 1) bad("potential.xy_refine must be >= 1");
  if (s.pad_layers < 0) bad("potential.pad_layers must be >= 0");

  if (!(s.tol_curl > 0.0) || !(s.tol_bc > 0.0) || !(s.tol_flux > 0.0) ||
      !(s.tol_residual > 0.0) || !(s.tol_var > 0.0))
    bad("tolerances must be positive");
  if (!(s.tolerance_scale > 0.0)) bad("tolerances.scale must be positive");

  if (s.num_variations < 1) bad("variations.count must be >= 1");
  if (s.var_band < 1) bad("variations.band must be >= 1");
  if (!(s.var_amplitude > 0.0)) bad("variations.amplitude must be positive");

  // resolve the Beltrami multiplier: an explicit params.alpha wins, otherwise
  // it is inherited from the field family
  if (!s.params_alpha_set) {
    if (s.field_family == "modal") {
      const Vec2 k = Lattice::make(s.lambda1, s.lambda2).wavevector(s.mode_k1, s.mode_k2);
      const double kappa = M_PI * s.mode_m / s.depth;
      s.params_alpha = std::sqrt(k.dot(k) + kappa * kappa);
    } else if (s.field_alpha_set) {
      s.params_alpha = s.field_alpha;
    }
    s.params_alpha_set = true;
  }
}

Lattice Scenario::lattice() const { return Lattice::make(lambda1, lambda2); }

Grid Scenario::grid() const { return Grid::make(lattice(), nx, ny, nz, depth); }

std::shared_ptr<const DomainMap> Scenario::make_map() const {
  if (map_kind == "identity") return std::make_shared<IdentityMap>(depth);
  if (map_kind == "graph_lift")
    return std::make_shared<GraphLiftMap>(depth, eta_mode_list());
  if (map_kind == "shear") return std::make_shared<ShearMap>(depth, shear_amp, shear_dir);
  throw Error(ErrorKind::config, "scenario",
              "sampled maps carry tabulated data and cannot be built from a text config");
}

AnalyticBeltrami Scenario::family() const {
  if (field_family == "shear") return AnalyticBeltrami::shear(field_alpha, field_amplitude);
  if (field_family == "modal")
    return AnalyticBeltrami::modal(lattice().wavevector(mode_k1, mode_k2), mode_m, depth,
                                   field_amplitude);
  throw Error(ErrorKind::config, "scenario",
              "field family '" + field_family + "' has no analytic form");
}

PhysicalParams Scenario::physical_params() const {
  PhysicalParams p;
  p.g = g;
  p.sigma = sigma;
  p.alpha = params_alpha;
  p.mu = mu;
  return p;
}

std::vector<EtaMode> Scenario::eta_mode_list() const {
  const Lattice lat = lattice();
  std::vector<EtaMode> modes;
  for (const auto& m : eta_modes) {
    EtaMode em;
    em.amp = m[0];
    em.k = lat.wavevector(static_cast<int>(std::llround(m[1])),
                          static_cast<int>(std::llround(m[2])));
    em.phase = m[3];
    modes.push_back(em);
  }
  return modes;
}

}  // namespace bwf
