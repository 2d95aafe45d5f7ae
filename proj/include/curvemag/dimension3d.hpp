#pragma once

#include "curvemag/cross_section.hpp"
#include "curvemag/geometry.hpp"
#include "curvemag/parallel.hpp"
#include "curvemag/perturbation.hpp"
#include "curvemag/reduced_energy.hpp"

#include <functional>
#include <span>
#include <vector>

namespace curvemag {

/// Quadrature over a cross-section with finite-difference derivative stencils.
///   polar (disk): midpoint radial nodes r_j, uniform angles, weights r dr dth;
///                 d/dth 4th order periodic, d/dr 2nd order.
///   tensor (square): midpoint nodes, 2nd order differences.
class CrossSectionQuadrature {
 public:
  static CrossSectionQuadrature polar(const CrossSection& disk, int radial, int angular);
  static CrossSectionQuadrature tensor(const CrossSection& square, int per_side);
  /// polar for disks, tensor for squares.
  static CrossSectionQuadrature for_section(const CrossSection& q, int radial = 6, int angular = 32,
                                            int per_side = 12);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double area() const;

  /// d1 f, d2 f and z ^ grad f = z2 d1 f - z1 d2 f at every node.
  void derivatives(std::span<const Vec3> f, std::span<Vec3> d1, std::span<Vec3> d2, std::span<Vec3> rot) const;

 private:
  bool polar_ = true;
  int n1_ = 0, n2_ = 0;  // polar: radial x angular; tensor: x x y
  double d1_ = 0.0, d2_ = 0.0;
  std::vector<Vec2> nodes_;
  std::vector<double> weights_;
};

/// Unit vectors w(s_i, z_j) on arclength nodes x cross-section nodes.
struct CylinderField {
  int s_nodes = 0;
  CrossSectionQuadrature quadrature;
  std::vector<Vec3> w;  // w[i * quadrature.size() + j]

  const Vec3& at(int i, int j) const { return w[static_cast<std::size_t>(i) * quadrature.size() + j]; }
  Vec3& at(int i, int j) { return w[static_cast<std::size_t>(i) * quadrature.size() + j]; }

  /// w(s_i, z) = v_i for every z.
  static CylinderField lifted(const DirectorField& v, const CrossSectionQuadrature& quad);
};

/// Integrand of the pull-back energy at one point (before the 1/(2|Q|) factor):
///   |ws + tau (z2 w1 - z1 w2) + alpha K(w) t|^2 / alpha
///     + alpha |w1/eps + K(w) n|^2 + alpha |w2/eps + K(w) b|^2,
/// where ws, w1, w2 are the s, z1, z2 derivatives of the pulled-back field.
double pullback_integrand(const TubeChart& chart, const CurvePoint& p, const Vec2& z, const Vec3& w,
                          const Vec3& ws, const Vec3& w1, const Vec3& w2, const PerturbationModel& model);

/// E^eps(w) = 1/(2|Q|) int_{I x Q} (pull-back integrand). The s-derivative
/// part uses segment midpoints (as the 1D energy does); the cross-sectional
/// part uses the trapezoid rule over nodes.
double pullback_energy(const CylinderField& w, const TubeChart& chart, const PerturbationModel& model,
                       Exec exec = Exec::parallel);

/// w = (v0 + eps (z1 d1 + z2 d2)) / |...|, d1 = v0 x (v0 x K(v0) n),
/// d2 = v0 x (v0 x K(v0) b).
CylinderField recovery_field(const DirectorField& v0, const TubeChart& chart, const PerturbationModel& model,
                             const CrossSectionQuadrature& quad);
/// Corrector directions (d1, d2) at a single node.
std::pair<Vec3, Vec3> recovery_correctors(const Vec3& v0, const Vec3& n, const Vec3& b,
                                          const PerturbationModel& model);

struct GammaStudyRow {
  double epsilon = 0.0;
  int segments = 0;
  double e3d = 0.0;
  double e1d = 0.0;
  double gap = 0.0;
};

struct GammaStudyOptions {
  int min_segments = 256;
  double h_factor = 0.25;  // h <= h_factor * eps
  int radial = 6;
  int angular = 32;
  int per_side = 12;
  Exec exec = Exec::parallel;
};

using CurveFactory = std::function<Curve(int segments)>;
using FieldFactory = std::function<DirectorField(const Curve&)>;

/// For each eps: a curve with h <= h_factor eps, v0 sampled on it, the
/// recovery field energy E^eps and the limit energy (without magnetostatics).
/// eps_list must be strictly decreasing.
std::vector<GammaStudyRow> gamma_convergence_study(const CurveFactory& curve, const FieldFactory& v0,
                                                   const PerturbationModel& model, const CrossSection& q,
                                                   std::span<const double> eps_list,
                                                   const GammaStudyOptions& opts = {});

}  // namespace curvemag
