#include "curvemag/cli/config.hpp"

#include "curvemag/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace curvemag::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n\"");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n\"");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError("config key '" + key + "': out of range");
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, std::string v) {
  std::vector<double> out;
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_double(key, trim(tok)));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  const auto l = to_list(key, v);
  if (l.size() != 3) throw ConfigError("config key '" + key + "': expected three comma-separated numbers");
  return {l[0], l[1], l[2]};
}

std::string to_choice(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return v;
  std::string msg = "config key '" + key + "': '" + v + "' is not one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw ConfigError(msg);
}

struct Entry {
  std::string key;
  std::string doc;
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"curve.kind", "line | ring | helix | samples",
       [](RunConfig& c, auto& k, auto& v) { c.curve.kind = to_choice(k, v, {"line", "ring", "helix", "samples"}); }},
      {"curve.segments", "number of grid segments N (nodes N+1)",
       [](RunConfig& c, auto& k, auto& v) { c.curve.segments = to_int(k, v); }},
      {"curve.length", "line length; the line spans [-length/2, length/2]",
       [](RunConfig& c, auto& k, auto& v) { c.curve.length = to_double(k, v); }},
      {"curve.radius", "ring radius R", [](RunConfig& c, auto& k, auto& v) { c.curve.radius = to_double(k, v); }},
      {"curve.a", "helix radius a", [](RunConfig& c, auto& k, auto& v) { c.curve.a = to_double(k, v); }},
      {"curve.b", "helix pitch parameter b", [](RunConfig& c, auto& k, auto& v) { c.curve.b = to_double(k, v); }},
      {"curve.turns", "helix turns", [](RunConfig& c, auto& k, auto& v) { c.curve.turns = to_double(k, v); }},
      {"curve.file", "CSV of x,y,z points for kind = samples",
       [](RunConfig& c, auto&, auto& v) { c.curve.file = v; }},

      {"perturbation.kind", "zero | dmi | ado | linear",
       [](RunConfig& c, auto& k, auto& v) { c.perturbation.kind = to_choice(k, v, {"zero", "dmi", "ado", "linear"}); }},
      {"perturbation.kappa", "DMI strength kappa",
       [](RunConfig& c, auto& k, auto& v) { c.perturbation.kappa = to_double(k, v); }},
      {"perturbation.beta", "Ado strength beta",
       [](RunConfig& c, auto& k, auto& v) { c.perturbation.beta = to_double(k, v); }},
      {"perturbation.tensor", "27 numbers T_ijk, row-major (i, j, k), as a JSON array or comma list",
       [](RunConfig& c, auto& k, auto& v) {
         c.perturbation.tensor = to_list(k, v);
         if (c.perturbation.tensor.size() != 27) throw ConfigError("config key '" + k + "': expected 27 numbers");
       }},

      {"cross_section.kind", "none | disk | square | polygon",
       [](RunConfig& c, auto& k, auto& v) {
         c.cross_section.kind = to_choice(k, v, {"none", "disk", "square", "polygon"});
       }},
      {"cross_section.radius", "disk radius; 0 selects the unit-area disk",
       [](RunConfig& c, auto& k, auto& v) { c.cross_section.radius = to_double(k, v); }},
      {"cross_section.side", "square side", [](RunConfig& c, auto& k, auto& v) { c.cross_section.side = to_double(k, v); }},
      {"cross_section.file", "CSV of x,y polygon vertices (counter-clockwise)",
       [](RunConfig& c, auto&, auto& v) { c.cross_section.file = v; }},
      {"cross_section.scale_to_unit_area", "rescale the section to |Q| = 1 before use",
       [](RunConfig& c, auto& k, auto& v) { c.cross_section.scale_to_unit_area = to_bool(k, v); }},
      {"cross_section.panels", "boundary panels for the demagnetizing matrix (>= 64)",
       [](RunConfig& c, auto& k, auto& v) { c.cross_section.panels = to_int(k, v); }},
      {"cross_section.units", "reduced | si",
       [](RunConfig& c, auto& k, auto& v) { c.cross_section.units = to_choice(k, v, {"reduced", "si"}); }},

      {"field.bc", "periodic | free | pinned",
       [](RunConfig& c, auto& k, auto& v) { c.field.bc = to_choice(k, v, {"periodic", "free", "pinned"}); }},
      {"field.left", "pinned value at the first node, x,y,z",
       [](RunConfig& c, auto& k, auto& v) { c.field.left = to_vec3(k, v); }},
      {"field.right", "pinned value at the last node, x,y,z",
       [](RunConfig& c, auto& k, auto& v) { c.field.right = to_vec3(k, v); }},

      {"minimize.max_iters", "iteration limit (>= 1)",
       [](RunConfig& c, auto& k, auto& v) { c.minimize.options.max_iters = to_int(k, v); }},
      {"minimize.tolerance", "stop when max_i |g_i| < tolerance",
       [](RunConfig& c, auto& k, auto& v) { c.minimize.options.tolerance = to_double(k, v); }},
      {"minimize.init", "constant | tangent | random | wall_ansatz | custom",
       [](RunConfig& c, auto& k, auto& v) {
         c.minimize.init = to_choice(k, v, {"constant", "tangent", "random", "wall_ansatz", "custom"});
       }},
      {"minimize.constant", "initial value for init = constant, x,y,z",
       [](RunConfig& c, auto& k, auto& v) { c.minimize.options.constant_value = to_vec3(k, v); }},
      {"minimize.wall_rate", "decay rate of the wall_ansatz initial field",
       [](RunConfig& c, auto& k, auto& v) { c.minimize.options.wall_rate = to_double(k, v); }},
      {"minimize.wall_kappa", "twist rate of the wall_ansatz initial field",
       [](RunConfig& c, auto& k, auto& v) { c.minimize.options.wall_kappa = to_double(k, v); }},
      {"minimize.file", "field CSV (s,v1,v2,v3) for init = custom",
       [](RunConfig& c, auto&, auto& v) { c.minimize.file = v; }},
      {"minimize.seed", "seed of the random initial field",
       [](RunConfig& c, auto& k, auto& v) { c.minimize.options.seed = to_u64(k, v); }},

      {"gamma.epsilons", "strictly decreasing comma-separated tube thicknesses",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.epsilons = to_list(k, v); }},
      {"gamma.field", "constant_minimizer | wall | constant",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.field = to_choice(k, v, {"constant_minimizer", "wall", "constant"}); }},
      {"gamma.sign", "branch of the constant minimizer, 1 or -1",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.sign = to_int(k, v); }},
      {"gamma.min_segments", "smallest s-grid",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.options.min_segments = to_int(k, v); }},
      {"gamma.h_factor", "s-grid rule h <= h_factor * eps",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.options.h_factor = to_double(k, v); }},
      {"gamma.radial", "radial nodes of the disk quadrature",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.options.radial = to_int(k, v); }},
      {"gamma.angular", "angular nodes of the disk quadrature",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.options.angular = to_int(k, v); }},
      {"gamma.per_side", "nodes per side of the square quadrature",
       [](RunConfig& c, auto& k, auto& v) { c.gamma.options.per_side = to_int(k, v); }},

      {"analytic.solution", "wall | ring_family | ring_constant | ring_demag | planar_spiral",
       [](RunConfig& c, auto& k, auto& v) {
         c.analytic.solution = to_choice(k, v, {"wall", "ring_family", "ring_constant", "ring_demag", "planar_spiral"});
       }},
      {"analytic.q_tilde", "wall anisotropy coefficient",
       [](RunConfig& c, auto& k, auto& v) { c.analytic.q_tilde = to_double(k, v); }},
      {"analytic.a", "ring family amplitude A", [](RunConfig& c, auto& k, auto& v) { c.analytic.a = to_double(k, v); }},
      {"analytic.b", "ring family amplitude B", [](RunConfig& c, auto& k, auto& v) { c.analytic.b = to_double(k, v); }},
      {"analytic.phi0", "ring family / spiral phase",
       [](RunConfig& c, auto& k, auto& v) { c.analytic.phi0 = to_double(k, v); }},
      {"analytic.force", "allow non-periodic ring family members",
       [](RunConfig& c, auto& k, auto& v) { c.analytic.force = to_bool(k, v); }},
      {"analytic.n", "winding of the planar spiral", [](RunConfig& c, auto& k, auto& v) { c.analytic.n = to_int(k, v); }},
      {"analytic.sign", "branch of constant solutions, 1 or -1",
       [](RunConfig& c, auto& k, auto& v) { c.analytic.sign = to_int(k, v); }},

      {"output.dir", "output directory", [](RunConfig& c, auto&, auto& v) { c.output.dir = v; }},
      {"output.svg", "write an SVG plot from minimize and analytic",
       [](RunConfig& c, auto& k, auto& v) { c.output.svg = to_bool(k, v); }},
  };
  return table;
}

const char* const kSections[] = {"cross_section", "perturbation", "minimize", "analytic", "output", "curve",
                                  "field", "gamma"};

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const auto schema = [] {
    std::vector<std::pair<std::string, std::string>> s;
    for (const auto& e : entries()) s.emplace_back(e.key, e.doc);
    return s;
  }();
  return schema;
}

RawConfig read_ini(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config syntax error: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RawConfig raw;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "' is outside any section");
    for (const auto& [key, value] : body) raw[section + "." + key] = trim(value.data());
  }
  return raw;
}

RawConfig read_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return read_ini(in);
}

RawConfig env_overrides(char** envp) {
  RawConfig raw;
  if (envp == nullptr) return raw;
  const std::string prefix = "CURVEMAG_";
  for (char** e = envp; *e != nullptr; ++e) {
    const std::string entry(*e);
    if (entry.rfind(prefix, 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(prefix.size(), eq - prefix.size());
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    bool matched = false;
    for (const char* sec : kSections) {
      const std::string s = std::string(sec) + "_";
      if (name.rfind(s, 0) == 0 && name.size() > s.size()) {
        raw[std::string(sec) + "." + name.substr(s.size())] = trim(entry.substr(eq + 1));
        matched = true;
        break;
      }
    }
    if (!matched) throw ConfigError("environment variable '" + entry.substr(0, eq) + "' names no config section");
  }
  return raw;
}

RunConfig build_config(const RawConfig& raw) {
  RunConfig cfg;
  for (const auto& [key, value] : raw) {
    const auto& table = entries();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Entry& e) { return e.key == key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(cfg, key, value);
  }
  if (cfg.curve.segments < 8) throw ConfigError("config key 'curve.segments': needs at least 8");
  if (cfg.curve.kind == "samples" && cfg.curve.file.empty()) {
    throw ConfigError("config key 'curve.file': required for curve.kind = samples");
  }
  if (cfg.cross_section.kind == "polygon" && cfg.cross_section.file.empty()) {
    throw ConfigError("config key 'cross_section.file': required for cross_section.kind = polygon");
  }
  if (cfg.cross_section.panels < 64) throw ConfigError("config key 'cross_section.panels': needs at least 64");
  if (!(cfg.minimize.options.tolerance > 0.0)) throw ConfigError("config key 'minimize.tolerance': must be positive");
  if (cfg.minimize.options.max_iters < 1) throw ConfigError("config key 'minimize.max_iters': must be >= 1");
  if (cfg.minimize.init == "custom" && cfg.minimize.file.empty()) {
    throw ConfigError("config key 'minimize.file': required for minimize.init = custom");
  }
  for (std::size_t k = 1; k < cfg.gamma.epsilons.size(); ++k) {
    if (!(cfg.gamma.epsilons[k] < cfg.gamma.epsilons[k - 1])) {
      throw ConfigError("config key 'gamma.epsilons': must be strictly decreasing");
    }
  }
  static const std::map<std::string, InitKind> inits = {{"constant", InitKind::constant},
                                                        {"tangent", InitKind::tangent},
                                                        {"random", InitKind::random},
                                                        {"wall_ansatz", InitKind::wall_ansatz},
                                                        {"custom", InitKind::custom}};
  cfg.minimize.options.init = inits.at(cfg.minimize.init);
  return cfg;
}

Curve make_curve(const RunConfig& cfg) { return make_curve(cfg, cfg.curve.segments); }

Curve make_curve(const RunConfig& cfg, int segments) {
  const auto& c = cfg.curve;
  if (c.kind == "line") return Curve::line(c.length, segments);
  if (c.kind == "ring") return Curve::ring(c.radius, segments);
  if (c.kind == "helix") return Curve::helix(c.a, c.b, c.turns, segments);
  const auto rows = read_numeric_csv(c.file, 3);
  std::vector<Vec3> pts;
  for (const auto& r : rows) pts.emplace_back(r[0], r[1], r[2]);
  return Curve::from_samples(pts, segments);
}

PerturbationModel make_model(const RunConfig& cfg) {
  const auto& p = cfg.perturbation;
  if (p.kind == "zero") return PerturbationModel::zero();
  if (p.kind == "dmi") return PerturbationModel::dmi(p.kappa);
  if (p.kind == "ado") return PerturbationModel::ado(p.beta);
  if (p.tensor.size() != 27) throw ConfigError("config key 'perturbation.tensor': required for kind = linear");
  CouplingTensor t{};
  std::copy(p.tensor.begin(), p.tensor.end(), t.begin());
  return PerturbationModel::linear(t);
}

std::optional<CrossSection> make_cross_section(const RunConfig& cfg) {
  const auto& q = cfg.cross_section;
  std::optional<CrossSection> out;
  if (q.kind == "none") return out;
  if (q.kind == "disk") {
    out = q.radius > 0.0 ? CrossSection::disk(q.radius) : CrossSection::unit_disk();
  } else if (q.kind == "square") {
    out = CrossSection::square(q.side);
  } else {
    const auto rows = read_numeric_csv(q.file, 2);
    std::vector<Vec2> v;
    for (const auto& r : rows) v.emplace_back(r[0], r[1]);
    out = CrossSection::polygon(std::move(v));
  }
  if (q.scale_to_unit_area) out = out->scaled_to_unit_area();
  return out;
}

DemagUnits demag_units(const RunConfig& cfg) {
  return cfg.cross_section.units == "si" ? DemagUnits::si : DemagUnits::reduced;
}

BoundaryCondition make_bc(const RunConfig& cfg, const Curve& curve) {
  std::string bc = cfg.field.bc;
  if (bc.empty()) bc = curve.closed() ? "periodic" : (curve.kind() == CurveKind::line ? "pinned" : "free");
  if (bc == "periodic") {
    if (!curve.closed()) throw ConfigError("config key 'field.bc': periodic needs a closed curve");
    return BoundaryCondition::periodic();
  }
  if (bc == "pinned") {
    if (cfg.field.left.norm() == 0.0 || cfg.field.right.norm() == 0.0) {
      throw ConfigError("config key 'field.left'/'field.right': pinned values must be nonzero");
    }
    return BoundaryCondition::pinned(cfg.field.left, cfg.field.right);
  }
  return BoundaryCondition::free();
}

}  // namespace curvemag::cli
