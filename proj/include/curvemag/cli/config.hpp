#pragma once

#include "curvemag/cross_section.hpp"
#include "curvemag/dimension3d.hpp"
#include "curvemag/geometry.hpp"
#include "curvemag/optimizer.hpp"
#include "curvemag/perturbation.hpp"
#include "curvemag/reduced_energy.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curvemag::cli {

struct CurveSpec {
  std::string kind = "ring";
  int segments = 512;
  double length = 80.0;
  double radius = 1.0;
  double a = 1.0, b = 1.0, turns = 1.0;
  std::string file;
};

struct PerturbationSpec {
  std::string kind = "dmi";
  double kappa = 1.0;
  double beta = 1.0;
  std::vector<double> tensor;
};

struct CrossSectionSpec {
  std::string kind = "disk";  // none | disk | square | polygon
  double radius = 0.0;        // 0: unit-area disk
  double side = 1.0;
  std::string file;
  bool scale_to_unit_area = false;
  int panels = 2048;
  std::string units = "reduced";
};

struct FieldSpec {
  std::string bc;  // empty: periodic on closed curves, pinned on the line, free otherwise
  Vec3 left = -Vec3::UnitX();
  Vec3 right = Vec3::UnitX();
};

struct MinimizeSpec {
  MinimizeOptions options;
  std::string init = "random";
  std::string file;
};

struct GammaSpec {
  std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
  std::string field = "constant_minimizer";  // constant_minimizer | wall | constant
  int sign = 1;
  GammaStudyOptions options;
};

struct AnalyticSpec {
  std::string solution = "ring_constant";  // wall | ring_family | ring_constant | ring_demag | planar_spiral
  double q_tilde = 1.0 / (4.0 * kPi);
  double a = 0.0, b = 0.0, phi0 = 0.0;
  bool force = false;
  int n = 1;
  int sign = 1;
};

struct OutputSpec {
  std::string dir = "out";
  bool svg = true;
};

/// Validated run configuration.
struct RunConfig {
  CurveSpec curve;
  PerturbationSpec perturbation;
  CrossSectionSpec cross_section;
  FieldSpec field;
  MinimizeSpec minimize;
  GammaSpec gamma;
  AnalyticSpec analytic;
  OutputSpec output;
};

/// "section.key" -> raw value.
using RawConfig = std::map<std::string, std::string>;

/// Reads an INI file; throws ConfigError on syntax errors.
RawConfig read_ini(std::istream& in);
RawConfig read_ini_file(const std::string& path);

/// CURVEMAG_<SECTION>_<KEY>=value entries from an environment block.
RawConfig env_overrides(char** envp);

/// Checks every key against the schema and converts values; unknown keys
/// and malformed values raise ConfigError naming the key.
RunConfig build_config(const RawConfig& raw);

/// All accepted keys with their documentation line.
const std::vector<std::pair<std::string, std::string>>& config_schema();

Curve make_curve(const RunConfig& cfg);
Curve make_curve(const RunConfig& cfg, int segments);
PerturbationModel make_model(const RunConfig& cfg);
std::optional<CrossSection> make_cross_section(const RunConfig& cfg);
DemagUnits demag_units(const RunConfig& cfg);
BoundaryCondition make_bc(const RunConfig& cfg, const Curve& curve);

}  // namespace curvemag::cli
