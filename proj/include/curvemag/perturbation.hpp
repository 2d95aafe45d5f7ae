#pragma once

#include "curvemag/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace curvemag {

enum class PerturbationKind { zero, dmi, ado, linear, custom };

/// Coefficients T_ijk of a linear coupling K(s)_ij = sum_k T_ijk s_k,
/// stored row-major in (i, j, k).
using CouplingTensor = std::array<double, 27>;

/// Matrix field K on the unit sphere together with a declared bound c_K
/// (|K(s)| <= c_K and |K(s1) - K(s2)| <= c_K |s1 - s2|, Frobenius norm).
class PerturbationModel {
 public:
  using Evaluator = std::function<Mat3(const Vec3&)>;

  static PerturbationModel zero();
  /// Bulk DMI: K(s) w = kappa s x w.
  static PerturbationModel dmi(double kappa);
  /// Ado interaction: K(s) = beta s1 s2 s3 I.
  static PerturbationModel ado(double beta);
  static PerturbationModel linear(const CouplingTensor& tensor);
  /// User-supplied field. The bound is taken on trust; check_bound() samples it.
  static PerturbationModel custom(Evaluator k, double bound, std::string name = "custom");

  PerturbationKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double bound() const { return bound_; }
  double kappa() const { return coef_; }
  double beta() const { return coef_; }
  const CouplingTensor& tensor() const { return tensor_; }

  /// K(s); throws DomainError unless |s| = 1 within 1e-10.
  Mat3 K(const Vec3& s) const;
  /// K without the unit-norm check, for inner loops that normalize first.
  Mat3 K_unchecked(const Vec3& s) const;
  /// Partial derivatives dK/ds_k of the model's extension off the sphere.
  /// Only tangential combinations are meaningful for the custom kind.
  std::array<Mat3, 3> dK(const Vec3& s) const;

 private:
  PerturbationKind kind_ = PerturbationKind::zero;
  std::string name_ = "zero";
  double coef_ = 0.0;
  double bound_ = 0.0;
  CouplingTensor tensor_{};
  Evaluator custom_;
};

/// |K^T(s) s|^2 - (K^T(s) s . t)^2, the anisotropy left behind in the
/// thin-wire limit.
double anisotropy_density(const PerturbationModel& model, const Vec3& s, const Vec3& t);
/// Same quantity written with the normal and binormal:
/// (K^T s . n)^2 + (K^T s . b)^2.
double anisotropy_density_nb(const PerturbationModel& model, const Vec3& s, const Vec3& n, const Vec3& b);
/// Euclidean gradient of anisotropy_density with respect to s.
Vec3 anisotropy_gradient(const PerturbationModel& model, const Vec3& s, const Vec3& t);

/// |G : K(s) - kappa s . c(G)| for the DMI matrix, where
/// c(G) = (G32 - G23, G13 - G31, G21 - G12). Zero up to rounding.
double frobenius_coupling_residual(double kappa, const Mat3& g, const Vec3& s);

struct BoundReport {
  double max_norm = 0.0;        // max |K| over the sphere sample
  double max_lipschitz = 0.0;   // max |K(a)-K(b)|/|a-b| over random pairs
  bool within_bound = false;
};

/// Samples |K| on a Fibonacci sphere and Lipschitz ratios on random pairs.
BoundReport check_bound(const PerturbationModel& model, int sphere_points = 1000, int pairs = 1000,
                        std::uint64_t seed = 7);

}  // namespace curvemag
