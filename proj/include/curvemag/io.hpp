#pragma once

#include "curvemag/dimension3d.hpp"
#include "curvemag/geometry.hpp"
#include "curvemag/reduced_energy.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace curvemag {

struct FieldSamples {
  std::vector<double> s;
  std::vector<Vec3> v;
};

/// Columns s, v1, v2, v3 with a header row.
void write_field_csv(std::ostream& out, const Curve& curve, const DirectorField& field);
FieldSamples read_field_csv(std::istream& in);
FieldSamples read_field_csv(const std::string& path);

/// Columns s, t1..t3, n1..n3, b1..b3, curvature, torsion.
void write_frame_csv(std::ostream& out, const Curve& curve);

/// Numeric rows of a CSV file with an optional header, `columns` values each.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path, int columns);

void write_gamma_csv(std::ostream& out, const std::vector<GammaStudyRow>& rows);

nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const Mat2& m);

/// Line plot of v.t, v.n, v.b and theta/pi = acos(v1)/pi against s.
std::string field_svg(const Curve& curve, const DirectorField& field, const std::string& title = "");

/// Writes text to a file, creating parent directories; throws NumericalError on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace curvemag
