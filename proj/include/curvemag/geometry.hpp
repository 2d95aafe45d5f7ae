#pragma once

#include "curvemag/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace curvemag {

enum class CurveKind { line, ring, helix, samples };

/// Per-node Frenet frame. t, n, b are unit and b = t x n.
struct FrameField {
  std::vector<Vec3> t;
  std::vector<Vec3> n;
  std::vector<Vec3> b;
  std::vector<double> curvature;
  std::vector<double> torsion;
};

/// Curve data at a single arclength value.
struct CurvePoint {
  Vec3 position;
  Vec3 t, n, b;
  double curvature = 0.0;
  double torsion = 0.0;
};

/// Arclength-parameterized regular curve sampled on a uniform grid
/// s_i = s_0 + i h, i = 0..N. Closed curves repeat the first node at i = N.
class Curve {
 public:
  /// Straight segment along e1 over [-length/2, length/2].
  static Curve line(double length, int segments);
  /// Circle of the given radius in the xy-plane, s = R phi, closed.
  static Curve ring(double radius, int segments);
  /// gamma(s) = (a cos(s/c), a sin(s/c), b s/c) with c = sqrt(a^2 + b^2).
  static Curve helix(double a, double b, double turns, int segments);
  /// Resamples arbitrary points to a uniform arclength grid (cubic spline in
  /// the chord parameter) and computes the frame by finite differences.
  /// The curve is closed when the first and last points coincide.
  static Curve from_samples(std::span<const Vec3> points, int segments);

  CurveKind kind() const { return kind_; }
  int segments() const { return static_cast<int>(s_.size()) - 1; }
  int nodes() const { return static_cast<int>(s_.size()); }
  double spacing() const { return h_; }
  double length() const { return h_ * segments(); }
  bool closed() const { return closed_; }

  double s(int i) const { return s_[i]; }
  const std::vector<double>& grid() const { return s_; }
  const Vec3& point(int i) const { return points_[i]; }
  const std::vector<Vec3>& points() const { return points_; }
  const FrameField& frame() const { return frame_; }

  /// Closed-form curve data at arbitrary s for the built-in kinds;
  /// empty for sampled curves.
  std::optional<CurvePoint> exact_at(double s) const;

  double max_curvature() const;

 private:
  Curve() = default;
  void check_invariants() const;

  CurveKind kind_ = CurveKind::line;
  bool closed_ = false;
  double h_ = 0.0;
  // Shape parameters of the built-ins: line {length}, ring {R}, helix {a, b}.
  double p0_ = 0.0, p1_ = 0.0;
  std::vector<double> s_;
  std::vector<Vec3> points_;
  FrameField frame_;
};

/// Deterministic completion of a unit tangent to a right-handed orthonormal
/// frame: n is the coordinate axis least aligned with t (lowest index on
/// ties) after Gram-Schmidt, b = t x n.
void complete_frame(const Vec3& t, Vec3& n, Vec3& b);

/// Derivative data of the tube map phi(s, z) = gamma(s) + eps z1 n + eps z2 b.
struct TubeJacobian {
  Mat3 d_phi;    // columns d/ds, d/dz1, d/dz2
  double det = 0.0;
  Mat3 inverse;  // (1/alpha) Phi F^T
};

/// Jacobian of the tube map at one curve point, using the Frenet-Serret
/// relations. Valid for any eps with alpha = 1 - eps*curvature*z1 != 0.
TubeJacobian tube_jacobian(const CurvePoint& p, double eps, const Vec2& z);

/// The eps-tube chart over a sampled curve. Construction fails unless
/// eps < eps_max = 1 / (max curvature * rho_Q), rho_Q = max |z| over Q.
class TubeChart {
 public:
  TubeChart(const Curve& curve, double eps, double rho_q);

  static double max_epsilon(const Curve& curve, double rho_q);

  const Curve& curve() const { return *curve_; }
  double epsilon() const { return eps_; }
  double eps_max() const { return eps_max_; }
  double rho_q() const { return rho_q_; }

  double alpha(int node, const Vec2& z) const {
    return 1.0 - eps_ * curve_->frame().curvature[node] * z.x();
  }
  Vec3 map(int node, const Vec2& z) const;
  CurvePoint curve_point(int node) const;
  TubeJacobian jacobian(int node, const Vec2& z) const;

 private:
  const Curve* curve_;
  double eps_;
  double rho_q_;
  double eps_max_;
};

}  // namespace curvemag
