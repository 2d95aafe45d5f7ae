#include "curvemag/cross_section.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace curvemag {
namespace {

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

double signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

// Antiderivative of ln sqrt(u^2 + d^2) in u.
double log_antiderivative(double u, double d) {
  const double r2 = u * u + d * d;
  double val = (r2 > 0.0 ? 0.5 * u * std::log(r2) : 0.0) - u;
  if (d > 0.0) val += d * std::atan(u / d);
  return val;
}

}  // namespace

double BoundaryPanels::enclosed_area() const {
  double a = 0.0;
  for (int j = 0; j < size(); ++j) a += midpoints[j].dot(normals[j]) * lengths[j];
  return 0.5 * a;
}

CrossSection CrossSection::disk(double radius) {
  if (!(radius > 0.0)) throw DomainError("disk radius must be positive");
  CrossSection q;
  q.kind_ = CrossSectionKind::disk;
  q.size_ = radius;
  q.area_ = kPi * radius * radius;
  q.rho_ = radius;
  return q;
}

CrossSection CrossSection::unit_disk() { return disk(1.0 / std::sqrt(kPi)); }

CrossSection CrossSection::square(double side) {
  if (!(side > 0.0)) throw DomainError("square side must be positive");
  const double h = 0.5 * side;
  CrossSection q = polygon({{-h, -h}, {h, -h}, {h, h}, {-h, h}});
  q.kind_ = CrossSectionKind::square;
  q.size_ = side;
  return q;
}

CrossSection CrossSection::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw DomainError("polygon needs at least 3 vertices");
  if ((vertices.front() - vertices.back()).norm() == 0.0) vertices.pop_back();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if ((vertices[(i + 1) % vertices.size()] - vertices[i]).norm() == 0.0) {
      throw DomainError("degenerate polygon edge at vertex " + std::to_string(i));
    }
  }
  const double a = signed_area(vertices);
  if (!(a > 0.0)) throw DomainError("polygon vertices must be listed counter-clockwise");
  CrossSection q;
  q.kind_ = CrossSectionKind::polygon;
  q.area_ = a;
  q.vertices_ = std::move(vertices);
  for (const auto& v : q.vertices_) q.rho_ = std::max(q.rho_, v.norm());
  return q;
}

CrossSection CrossSection::scaled_to_unit_area() const {
  const double f = 1.0 / std::sqrt(area_);
  CrossSection q = *this;
  q.size_ *= f;
  q.rho_ *= f;
  q.area_ = area_ * f * f;
  for (auto& v : q.vertices_) v *= f;
  return q;
}

CrossSection CrossSection::rotated(double angle) const {
  CrossSection q = *this;
  q.rotation_ += angle;
  for (auto& v : q.vertices_) v = rotate(v, angle);
  if (q.kind_ == CrossSectionKind::square) q.kind_ = CrossSectionKind::polygon;
  return q;
}

BoundaryPanels CrossSection::boundary(int panels, double start_angle) const {
  if (panels < 3) throw DomainError("need at least 3 boundary panels");
  BoundaryPanels bp;
  bp.midpoints.reserve(panels);
  if (kind_ == CrossSectionKind::disk) {
    const double dth = 2.0 * kPi / panels;
    for (int j = 0; j < panels; ++j) {
      const double th = start_angle + rotation_ + (j + 0.5) * dth;
      const Vec2 nrm(std::cos(th), std::sin(th));
      bp.midpoints.push_back(size_ * nrm);
      bp.normals.push_back(nrm);
      bp.tangents.emplace_back(-nrm.y(), nrm.x());
      bp.lengths.push_back(size_ * dth);
    }
    return bp;
  }

  const std::size_t ne = vertices_.size();
  if (static_cast<std::size_t>(panels) < ne) throw DomainError("fewer panels than polygon edges");
  std::vector<double> len(ne);
  for (std::size_t e = 0; e < ne; ++e) len[e] = (vertices_[(e + 1) % ne] - vertices_[e]).norm();
  const double perimeter = std::accumulate(len.begin(), len.end(), 0.0);
  // Largest-remainder allotment with at least one panel per edge.
  std::vector<int> count(ne);
  std::vector<std::pair<double, std::size_t>> remainder;
  int used = 0;
  for (std::size_t e = 0; e < ne; ++e) {
    const double exact = panels * len[e] / perimeter;
    count[e] = std::max(1, static_cast<int>(std::floor(exact)));
    used += count[e];
    remainder.emplace_back(exact - std::floor(exact), e);
  }
  std::stable_sort(remainder.begin(), remainder.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < panels; k = (k + 1) % ne, ++used) ++count[remainder[k].second];
  for (std::size_t e = 0; e < ne && used > panels; ++e) {
    while (count[e] > 1 && used > panels) { --count[e]; --used; }
  }

  for (std::size_t e = 0; e < ne; ++e) {
    const Vec2 a = vertices_[e];
    const Vec2 b = vertices_[(e + 1) % ne];
    const Vec2 tan = (b - a) / len[e];
    const Vec2 nrm(tan.y(), -tan.x());
    const double w = len[e] / count[e];
    for (int k = 0; k < count[e]; ++k) {
      bp.midpoints.push_back(a + (k + 0.5) * w * tan);
      bp.normals.push_back(nrm);
      bp.tangents.push_back(tan);
      bp.lengths.push_back(w);
    }
  }
  return bp;
}

double panel_log_integral(const Vec2& x, const Vec2& center, const Vec2& tangent, double half) {
  const Vec2 d = x - center;
  const double along = d.dot(tangent);
  const double perp = std::abs(d.x() * tangent.y() - d.y() * tangent.x());
  return log_antiderivative(half - along, perp) - log_antiderivative(-half - along, perp);
}

DemagMatrix demag_matrix(const CrossSection& q, int panels, DemagUnits units, Exec exec, double start_angle) {
  if (panels < 64) throw DomainError("demag quadrature needs at least 64 panels");
  if (std::abs(q.area() - 1.0) > 1e-6) {
    throw DomainError("cross-section area is " + std::to_string(q.area()) +
                      ", expected 1; rescale it first (e.g. scaled_to_unit_area())");
  }
  const BoundaryPanels bp = q.boundary(panels, start_angle);
  const int n = bp.size();
  for (int j = 0; j < n; ++j) {
    if (!(bp.lengths[j] > 0.0)) throw DomainError("degenerate boundary panel " + std::to_string(j));
  }

  // Row i: w_i n_i (x) sum_j n_j int_{panel j} ln|xi_i - eta| d eta.
  std::vector<Mat2> rows(n);
  detail::for_each_index(exec, n, [&](std::ptrdiff_t i) {
    Vec2 acc = Vec2::Zero();
    for (int j = 0; j < n; ++j) {
      acc += bp.normals[j] * panel_log_integral(bp.midpoints[i], bp.midpoints[j], bp.tangents[j], 0.5 * bp.lengths[j]);
    }
    rows[i] = bp.lengths[i] * bp.normals[i] * acc.transpose();
  });
  Mat2 sum = Mat2::Zero();
  for (const auto& r : rows) sum += r;

  const double prefactor = units == DemagUnits::si ? 1.0 / (2.0 * kPi) : 1.0 / (2.0 * kPi * kPi);
  DemagMatrix out;
  out.m = -prefactor * sum;
  out.m = 0.5 * (out.m + out.m.transpose()).eval();
  out.panels = n;
  out.units = units;
  return out;
}

double magnetostatic_density(const Mat2& m, const Vec3& s, const Vec3& n, const Vec3& b) {
  const Vec2 y(s.dot(n), s.dot(b));
  return 0.5 * y.dot(m * y);
}

Vec3 magnetostatic_gradient(const Mat2& m, const Vec3& s, const Vec3& n, const Vec3& b) {
  const Vec2 y(s.dot(n), s.dot(b));
  const Vec2 my = m * y;
  return my.x() * n + my.y() * b;
}

}  // namespace curvemag
