#pragma once

#include "curvemag/parallel.hpp"
#include "curvemag/types.hpp"

#include <vector>

namespace curvemag {

enum class CrossSectionKind { disk, square, polygon };

/// Panelization of the boundary of a cross-section: one entry per panel,
/// midpoint, outward unit normal, unit tangent (counter-clockwise) and length.
struct BoundaryPanels {
  std::vector<Vec2> midpoints;
  std::vector<Vec2> normals;
  std::vector<Vec2> tangents;
  std::vector<double> lengths;

  int size() const { return static_cast<int>(lengths.size()); }
  /// Divergence-theorem area, sum of (xi . n) w / 2.
  double enclosed_area() const;
};

/// Simply connected cross-section Q centred at the origin.
class CrossSection {
 public:
  static CrossSection disk(double radius);
  /// Disk with |Q| = 1, radius 1/sqrt(pi).
  static CrossSection unit_disk();
  /// Axis-aligned square [-a/2, a/2]^2.
  static CrossSection square(double side);
  /// Counter-clockwise vertex list; the closing edge is implicit.
  static CrossSection polygon(std::vector<Vec2> vertices);

  CrossSectionKind kind() const { return kind_; }
  double area() const { return area_; }
  /// max |z| over Q.
  double rho() const { return rho_; }
  double radius() const { return size_; }
  double side() const { return size_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }

  /// Uniform rescaling to unit area. Never applied implicitly.
  CrossSection scaled_to_unit_area() const;
  CrossSection rotated(double angle) const;

  /// Disk panels are arcs of the exact circle (first panel starts at
  /// start_angle); polygon panels split each edge, allotted by edge length.
  BoundaryPanels boundary(int panels, double start_angle = 0.0) const;

 private:
  CrossSectionKind kind_ = CrossSectionKind::disk;
  double size_ = 0.0;
  double area_ = 0.0;
  double rho_ = 0.0;
  double rotation_ = 0.0;
  std::vector<Vec2> vertices_;
};

/// Prefactor convention of the boundary double integral
///   M = -c * int_dQ int_dQ n(xi) (x) n(eta) ln|xi - eta|.
/// si:      c = 1/(2 pi); a unit-area disk gives M = I/2 (transverse
///          demagnetizing factor 1/2).
/// reduced: c = 1/(2 pi^2); a unit-area disk gives M = I/(2 pi), the scale
///          of the 1/(4 pi)(1 - v.t^2) wire anisotropy.
enum class DemagUnits { reduced, si };

struct DemagMatrix {
  Mat2 m = Mat2::Zero();  // in (n, b) cross-section axes
  int panels = 0;
  DemagUnits units = DemagUnits::reduced;
};

/// Boundary double integral by outer midpoint rule and exact inner log
/// integrals over flat panels. Requires |Q| = 1 within 1e-6 and >= 64 panels.
DemagMatrix demag_matrix(const CrossSection& q, int panels, DemagUnits units = DemagUnits::reduced,
                         Exec exec = Exec::parallel, double start_angle = 0.0);

/// int over the segment c + u tau, |u| <= half, of ln|x - y| dy.
double panel_log_integral(const Vec2& x, const Vec2& center, const Vec2& tangent, double half);

/// 1/2 (s.n, s.b) M (s.n, s.b)^T.
double magnetostatic_density(const Mat2& m, const Vec3& s, const Vec3& n, const Vec3& b);
/// Euclidean gradient of magnetostatic_density with respect to s.
Vec3 magnetostatic_gradient(const Mat2& m, const Vec3& s, const Vec3& n, const Vec3& b);

}  // namespace curvemag
