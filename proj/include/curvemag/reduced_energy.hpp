#pragma once

#include "curvemag/cross_section.hpp"
#include "curvemag/geometry.hpp"
#include "curvemag/parallel.hpp"
#include "curvemag/perturbation.hpp"

#include <optional>
#include <span>
#include <vector>

namespace curvemag {

enum class BoundaryKind { periodic, free, pinned };

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::free;
  Vec3 left = Vec3::UnitX();
  Vec3 right = Vec3::UnitX();

  static BoundaryCondition periodic() { return {BoundaryKind::periodic, Vec3::Zero(), Vec3::Zero()}; }
  static BoundaryCondition free() { return {BoundaryKind::free, Vec3::Zero(), Vec3::Zero()}; }
  static BoundaryCondition pinned(const Vec3& left, const Vec3& right) {
    return {BoundaryKind::pinned, left.normalized(), right.normalized()};
  }
};

/// Unit vectors v_i at the curve nodes. Values are normalized on every write;
/// periodic fields keep v_N == v_0 and pinned fields keep their end values.
class DirectorField {
 public:
  DirectorField(std::vector<Vec3> values, BoundaryCondition bc);

  int nodes() const { return static_cast<int>(v_.size()); }
  const Vec3& operator[](int i) const { return v_[i]; }
  const std::vector<Vec3>& values() const { return v_; }
  const BoundaryCondition& bc() const { return bc_; }

  void set(int i, const Vec3& value);
  /// v_i <- (v_i + step d_i) / |v_i + step d_i| on every free node.
  void retract(std::span<const Vec3> direction, double step);
  /// Whether node i is held fixed by the boundary condition.
  bool is_fixed(int i) const;

 private:
  void enforce_bc();

  std::vector<Vec3> v_;
  BoundaryCondition bc_;
};

/// All terms in reduced units (energy per unit dimensionless length).
struct EnergyBreakdown {
  double exchange_perturb = 0.0;  // 1/2 int |v' + K(v) t|^2
  double anisotropy = 0.0;        // 1/2 int |K^T v|^2 - (K^T v . t)^2
  double magnetostatic = 0.0;     // 1/2 int M v_perp . v_perp
  double total = 0.0;
};

/// Discrete thin-wire limit energy on a fixed curve.
///
/// The square term is a midpoint rule per segment,
///   h/2 |(v_{i+1} - v_i)/h + K(m_i) t_i|^2,  m_i = (v_i + v_{i+1})/|v_i + v_{i+1}|,
/// with t_i the normalized mean of the end tangents; the anisotropy and
/// magnetostatic densities use the trapezoid rule over nodes. Without a
/// demag matrix the magnetostatic term is zero.
class ReducedEnergy {
 public:
  ReducedEnergy(const Curve& curve, PerturbationModel model, std::optional<DemagMatrix> demag = std::nullopt);

  const Curve& curve() const { return *curve_; }
  const PerturbationModel& model() const { return model_; }
  const std::optional<DemagMatrix>& demag() const { return demag_; }

  EnergyBreakdown energy(const DirectorField& field, Exec exec = Exec::parallel) const;
  /// Riemannian gradient: dE/dv_i projected onto the tangent plane at v_i,
  /// zero on pinned nodes, equal on the two copies of a periodic node.
  std::vector<Vec3> gradient(const DirectorField& field, Exec exec = Exec::parallel) const;
  EnergyBreakdown energy_and_gradient(const DirectorField& field, std::vector<Vec3>& grad,
                                      Exec exec = Exec::parallel) const;

  /// Energy of the raw values (no boundary handling beyond what the values carry).
  EnergyBreakdown energy(std::span<const Vec3> v, Exec exec = Exec::parallel) const;

  double node_weight(int i) const;

 private:
  EnergyBreakdown evaluate(std::span<const Vec3> v, std::vector<Vec3>* grad, Exec exec) const;
  void check(const DirectorField& field) const;

  const Curve* curve_;
  PerturbationModel model_;
  std::optional<DemagMatrix> demag_;
  std::vector<Vec3> t_mid_;
};

/// The limit energy and the same energy written in the exchange + interaction
/// convention, E - 1/2 int |K(v)|^2 ds (for DMI: E - kappa^2 L).
struct NormalizedEnergy {
  double limit = 0.0;
  double exchange_convention = 0.0;
};

NormalizedEnergy energy_normalization(const EnergyBreakdown& raw, const PerturbationModel& model,
                                      const DirectorField& field, const Curve& curve);

/// sup_i |g_i|.
double sup_norm(std::span<const Vec3> g);

/// Projection of an ambient vector field onto the tangent planes of v.
std::vector<Vec3> project_tangent(std::span<const Vec3> v, std::span<const Vec3> d);

}  // namespace curvemag
