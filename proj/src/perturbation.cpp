#include "curvemag/perturbation.hpp"

#include <cmath>
#include <random>

namespace curvemag {

PerturbationModel PerturbationModel::zero() { return PerturbationModel{}; }

PerturbationModel PerturbationModel::dmi(double kappa) {
  PerturbationModel m;
  m.kind_ = PerturbationKind::dmi;
  m.name_ = "dmi";
  m.coef_ = kappa;
  m.bound_ = std::sqrt(2.0) * std::abs(kappa);
  return m;
}

PerturbationModel PerturbationModel::ado(double beta) {
  PerturbationModel m;
  m.kind_ = PerturbationKind::ado;
  m.name_ = "ado";
  m.coef_ = beta;
  // |K| = sqrt(3)|beta s1 s2 s3| <= |beta|/3, and the Lipschitz constant of
  // sqrt(3) s1 s2 s3 on the sphere is 1.
  m.bound_ = std::abs(beta);
  return m;
}

PerturbationModel PerturbationModel::linear(const CouplingTensor& tensor) {
  PerturbationModel m;
  m.kind_ = PerturbationKind::linear;
  m.name_ = "linear";
  m.tensor_ = tensor;
  double sq = 0.0;
  for (double v : tensor) sq += v * v;
  m.bound_ = std::sqrt(sq);
  return m;
}

PerturbationModel PerturbationModel::custom(Evaluator k, double bound, std::string name) {
  if (!k) throw DomainError("custom perturbation needs an evaluator");
  PerturbationModel m;
  m.kind_ = PerturbationKind::custom;
  m.name_ = std::move(name);
  m.bound_ = bound;
  m.custom_ = std::move(k);
  return m;
}

Mat3 PerturbationModel::K(const Vec3& s) const {
  if (std::abs(s.norm() - 1.0) > 1e-10) {
    throw DomainError("perturbation evaluated at a non-unit vector (|s| - 1 = " +
                      std::to_string(s.norm() - 1.0) + ")");
  }
  return K_unchecked(s);
}

Mat3 PerturbationModel::K_unchecked(const Vec3& s) const {
  switch (kind_) {
    case PerturbationKind::zero:
      return Mat3::Zero();
    case PerturbationKind::dmi:
      return coef_ * cross_matrix(s);
    case PerturbationKind::ado:
      return (coef_ * s.x() * s.y() * s.z()) * Mat3::Identity();
    case PerturbationKind::linear: {
      Mat3 k;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          k(i, j) = tensor_[9 * i + 3 * j] * s.x() + tensor_[9 * i + 3 * j + 1] * s.y() +
                    tensor_[9 * i + 3 * j + 2] * s.z();
      return k;
    }
    case PerturbationKind::custom:
      return custom_(s);
  }
  return Mat3::Zero();
}

std::array<Mat3, 3> PerturbationModel::dK(const Vec3& s) const {
  std::array<Mat3, 3> d;
  switch (kind_) {
    case PerturbationKind::zero:
      d.fill(Mat3::Zero());
      break;
    case PerturbationKind::dmi:
      for (int k = 0; k < 3; ++k) d[k] = coef_ * cross_matrix(Vec3::Unit(k));
      break;
    case PerturbationKind::ado:
      d[0] = (coef_ * s.y() * s.z()) * Mat3::Identity();
      d[1] = (coef_ * s.x() * s.z()) * Mat3::Identity();
      d[2] = (coef_ * s.x() * s.y()) * Mat3::Identity();
      break;
    case PerturbationKind::linear:
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) d[k](i, j) = tensor_[9 * i + 3 * j + k];
      break;
    case PerturbationKind::custom: {
      // Central differences of K(normalize(s)); the radial part is zero.
      constexpr double step = 1e-6;
      for (int k = 0; k < 3; ++k) {
        const Vec3 e = Vec3::Unit(k);
        d[k] = (custom_((s + step * e).normalized()) - custom_((s - step * e).normalized())) / (2.0 * step);
      }
      break;
    }
  }
  return d;
}

double anisotropy_density(const PerturbationModel& model, const Vec3& s, const Vec3& t) {
  const Vec3 u = model.K_unchecked(s).transpose() * s;
  const double ut = u.dot(t);
  return u.squaredNorm() - ut * ut;
}

double anisotropy_density_nb(const PerturbationModel& model, const Vec3& s, const Vec3& n, const Vec3& b) {
  const Vec3 u = model.K_unchecked(s).transpose() * s;
  const double un = u.dot(n), ub = u.dot(b);
  return un * un + ub * ub;
}

Vec3 anisotropy_gradient(const PerturbationModel& model, const Vec3& s, const Vec3& t) {
  if (model.kind() == PerturbationKind::zero) return Vec3::Zero();
  const Mat3 k = model.K_unchecked(s);
  const Vec3 u = k.transpose() * s;
  const Vec3 q = 2.0 * (u - u.dot(t) * t);
  const auto dk = model.dK(s);
  // d/ds_k of u = (dK/ds_k)^T s + K^T e_k.
  Vec3 g = k * q;
  for (int c = 0; c < 3; ++c) g[c] += s.dot(dk[c] * q);
  return g;
}

double frobenius_coupling_residual(double kappa, const Mat3& g, const Vec3& s) {
  const Mat3 k = kappa * cross_matrix(s);
  const Vec3 curl(g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1));
  return std::abs((g.array() * k.array()).sum() - kappa * s.dot(curl));
}

BoundReport check_bound(const PerturbationModel& model, int sphere_points, int pairs, std::uint64_t seed) {
  BoundReport r;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < sphere_points; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / sphere_points;
    const double rad = std::sqrt(1.0 - z * z);
    const Vec3 s(rad * std::cos(golden * i), rad * std::sin(golden * i), z);
    r.max_norm = std::max(r.max_norm, model.K_unchecked(s.normalized()).norm());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int i = 0; i < pairs; ++i) {
    const Vec3 a = Vec3(g(rng), g(rng), g(rng)).normalized();
    const Vec3 b = Vec3(g(rng), g(rng), g(rng)).normalized();
    const double d = (a - b).norm();
    if (d < 1e-12) continue;
    r.max_lipschitz = std::max(r.max_lipschitz, (model.K_unchecked(a) - model.K_unchecked(b)).norm() / d);
  }
  const double tol = 1e-12 * std::max(1.0, model.bound());
  r.within_bound = r.max_norm <= model.bound() + tol && r.max_lipschitz <= model.bound() + tol;
  return r;
}

}  // namespace curvemag
