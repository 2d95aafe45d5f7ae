#include "curvemag/io.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace curvemag {

void set_num_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  for (auto& tok : split(line, ',')) {
    try {
      std::size_t used = 0;
      row.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t\r", used) != std::string::npos) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace

void write_field_csv(std::ostream& out, const Curve& curve, const DirectorField& field) {
  out << "s,v1,v2,v3\n";
  for (int i = 0; i < field.nodes(); ++i) {
    out << fmt(curve.s(i)) << ',' << fmt(field[i].x()) << ',' << fmt(field[i].y()) << ',' << fmt(field[i].z())
        << '\n';
  }
}

FieldSamples read_field_csv(std::istream& in) {
  FieldSamples f;
  std::string line;
  std::vector<double> row;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!parse_row(line, row)) {
      if (lineno == 1) continue;  // header
      throw ConfigError("field CSV line " + std::to_string(lineno) + " is not numeric");
    }
    if (row.size() != 4) throw ConfigError("field CSV line " + std::to_string(lineno) + " needs 4 columns");
    f.s.push_back(row[0]);
    f.v.emplace_back(row[1], row[2], row[3]);
  }
  return f;
}

FieldSamples read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field CSV '" + path + "'");
  return read_field_csv(in);
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, int columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> row;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!parse_row(line, row)) {
      if (lineno == 1) continue;
      throw ConfigError(path + ":" + std::to_string(lineno) + " is not numeric");
    }
    if (static_cast<int>(row.size()) != columns) {
      throw ConfigError(path + ":" + std::to_string(lineno) + " needs " + std::to_string(columns) + " columns");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_frame_csv(std::ostream& out, const Curve& curve) {
  out << "s,t1,t2,t3,n1,n2,n3,b1,b2,b3,curvature,torsion\n";
  const auto& f = curve.frame();
  for (int i = 0; i < curve.nodes(); ++i) {
    out << fmt(curve.s(i));
    for (const Vec3* v : {&f.t[i], &f.n[i], &f.b[i]})
      for (int k = 0; k < 3; ++k) out << ',' << fmt((*v)[k]);
    out << ',' << fmt(f.curvature[i]) << ',' << fmt(f.torsion[i]) << '\n';
  }
}

void write_gamma_csv(std::ostream& out, const std::vector<GammaStudyRow>& rows) {
  out << "epsilon,e3d,e1d,gap\n";
  for (const auto& r : rows) out << fmt(r.epsilon) << ',' << fmt(r.e3d) << ',' << fmt(r.e1d) << ',' << fmt(r.gap) << '\n';
}

nlohmann::json to_json(const EnergyBreakdown& e) {
  return {{"exchange_perturb", e.exchange_perturb},
          {"anisotropy", e.anisotropy},
          {"magnetostatic", e.magnetostatic},
          {"total", e.total}};
}

nlohmann::json to_json(const Mat2& m) { return {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}; }

std::string field_svg(const Curve& curve, const DirectorField& field, const std::string& title) {
  const double w = 800, h = 420, ml = 50, mr = 120, mt = 30, mb = 40;
  const double s0 = curve.s(0), s1 = curve.s(curve.segments());
  auto px = [&](double s) { return ml + (s - s0) / (s1 - s0) * (w - ml - mr); };
  auto py = [&](double y) { return mt + (1.0 - (y + 1.0) / 2.0) * (h - mt - mb); };
  const auto& f = curve.frame();
  struct Series {
    const char* name;
    const char* color;
    std::function<double(int)> y;
  };
  const Series series[] = {
      {"v.t", "#1f77b4", [&](int i) { return field[i].dot(f.t[i]); }},
      {"v.n", "#ff7f0e", [&](int i) { return field[i].dot(f.n[i]); }},
      {"v.b", "#2ca02c", [&](int i) { return field[i].dot(f.b[i]); }},
      {"theta/pi", "#d62728", [&](int i) { return std::acos(std::clamp(field[i].x(), -1.0, 1.0)) / kPi; }},
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  for (double y : {-1.0, 0.0, 1.0}) {
    out << "<line x1=\"" << ml << "\" x2=\"" << w - mr << "\" y1=\"" << py(y) << "\" y2=\"" << py(y)
        << "\" stroke=\"#ccc\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << y << "</text>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">s</text>\n";
  int row = 0;
  for (const auto& sr : series) {
    out << "<polyline fill=\"none\" stroke=\"" << sr.color << "\" stroke-width=\"1.5\" points=\"";
    const int step = std::max(1, field.nodes() / 2000);
    for (int i = 0; i < field.nodes(); i += step) out << px(curve.s(i)) << ',' << py(sr.y(i)) << ' ';
    out << "\"/>\n";
    const double ly = mt + 16 * row++;
    out << "<line x1=\"" << w - mr + 10 << "\" x2=\"" << w - mr + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
        << "\" stroke=\"" << sr.color << "\" stroke-width=\"2\"/>";
    out << "<text x=\"" << w - mr + 36 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << sr.name << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("cannot write '" + path + "'");
  out << content;
  if (!out) throw NumericalError("write to '" + path + "' failed");
}

}  // namespace curvemag
