#include "curvemag/reduced_energy.hpp"

#include <cmath>
#include <string>

namespace curvemag {

DirectorField::DirectorField(std::vector<Vec3> values, BoundaryCondition bc) : v_(std::move(values)), bc_(bc) {
  if (v_.size() < 2) throw DomainError("director field needs at least two nodes");
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const double n = v_[i].norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("director field node " + std::to_string(i) + " is zero or non-finite");
    v_[i] /= n;
  }
  enforce_bc();
}

void DirectorField::enforce_bc() {
  if (bc_.kind == BoundaryKind::periodic) {
    v_.back() = v_.front();
  } else if (bc_.kind == BoundaryKind::pinned) {
    v_.front() = bc_.left;
    v_.back() = bc_.right;
  }
}

bool DirectorField::is_fixed(int i) const {
  return bc_.kind == BoundaryKind::pinned && (i == 0 || i == nodes() - 1);
}

void DirectorField::set(int i, const Vec3& value) {
  if (is_fixed(i)) return;
  v_[i] = value.normalized();
  if (bc_.kind == BoundaryKind::periodic) {
    if (i == 0) v_.back() = v_.front();
    if (i == nodes() - 1) v_.front() = v_.back();
  }
}

void DirectorField::retract(std::span<const Vec3> direction, double step) {
  if (static_cast<int>(direction.size()) != nodes()) throw DomainError("retraction direction has the wrong size");
  for (int i = 0; i < nodes(); ++i) {
    if (is_fixed(i)) continue;
    v_[i] = (v_[i] + step * direction[i]).normalized();
  }
  enforce_bc();
}

ReducedEnergy::ReducedEnergy(const Curve& curve, PerturbationModel model, std::optional<DemagMatrix> demag)
    : curve_(&curve), model_(std::move(model)), demag_(std::move(demag)) {
  const auto& t = curve.frame().t;
  t_mid_.resize(curve.segments());
  for (int i = 0; i < curve.segments(); ++i) t_mid_[i] = (t[i] + t[i + 1]).normalized();
}

double ReducedEnergy::node_weight(int i) const {
  const double h = curve_->spacing();
  return (i == 0 || i == curve_->segments()) ? 0.5 * h : h;
}

void ReducedEnergy::check(const DirectorField& field) const {
  if (field.nodes() != curve_->nodes()) {
    throw DomainError("field has " + std::to_string(field.nodes()) + " nodes but the curve grid has " +
                      std::to_string(curve_->nodes()));
  }
  if (field.bc().kind == BoundaryKind::periodic && !curve_->closed()) {
    throw DomainError("periodic boundary condition on an open curve");
  }
}

EnergyBreakdown ReducedEnergy::energy(const DirectorField& field, Exec exec) const {
  check(field);
  return evaluate(field.values(), nullptr, exec);
}

EnergyBreakdown ReducedEnergy::energy(std::span<const Vec3> v, Exec exec) const {
  if (static_cast<int>(v.size()) != curve_->nodes()) throw DomainError("field size does not match the curve grid");
  return evaluate(v, nullptr, exec);
}

std::vector<Vec3> ReducedEnergy::gradient(const DirectorField& field, Exec exec) const {
  std::vector<Vec3> g;
  energy_and_gradient(field, g, exec);
  return g;
}

EnergyBreakdown ReducedEnergy::energy_and_gradient(const DirectorField& field, std::vector<Vec3>& grad,
                                                   Exec exec) const {
  check(field);
  const auto& v = field.values();
  const EnergyBreakdown e = evaluate(v, &grad, exec);
  const int last = field.nodes() - 1;
  if (field.bc().kind == BoundaryKind::periodic) {
    const Vec3 g0 = grad[0] + grad[last];
    grad[0] = g0;
    grad[last] = g0;
  }
  for (int i = 0; i <= last; ++i) grad[i] -= grad[i].dot(v[i]) * v[i];
  if (field.bc().kind == BoundaryKind::pinned) {
    grad[0].setZero();
    grad[last].setZero();
  }
  return e;
}

EnergyBreakdown ReducedEnergy::evaluate(std::span<const Vec3> v, std::vector<Vec3>* grad, Exec exec) const {
  const int ns = curve_->segments();
  const int nn = ns + 1;
  const double h = curve_->spacing();
  const auto& frame = curve_->frame();
  for (int i = 0; i < nn; ++i) {
    if (std::abs(v[i].squaredNorm() - 1.0) > 2e-10) {
      throw DomainError("field node " + std::to_string(i) + " is not a unit vector");
    }
  }
  const bool want_grad = grad != nullptr;

  std::vector<double> seg_e(ns);
  std::vector<Vec3> seg_gl, seg_gr;
  if (want_grad) {
    seg_gl.resize(ns);
    seg_gr.resize(ns);
  }
  detail::for_each_index(exec, ns, [&](std::ptrdiff_t i) {
    const Vec3 p = v[i] + v[i + 1];
    const double pn = p.norm();
    const Vec3 m = p / pn;
    const Vec3& t = t_mid_[i];
    const Vec3 r = (v[i + 1] - v[i]) / h + model_.K_unchecked(m) * t;
    seg_e[i] = 0.5 * h * r.squaredNorm();
    if (want_grad) {
      // d/dp of K(m) t with m = p/|p|: C P, C_k = (dK/dm_k) t, P = (I - m m^T)/|p|.
      Vec3 ct_r = Vec3::Zero();
      if (model_.kind() != PerturbationKind::zero) {
        const auto dk = model_.dK(m);
        for (int k = 0; k < 3; ++k) ct_r[k] = (dk[k] * t).dot(r);
      }
      const Vec3 through_mid = h * (ct_r - m.dot(ct_r) * m) / pn;
      seg_gl[i] = -r + through_mid;
      seg_gr[i] = r + through_mid;
    }
  });

  std::vector<double> aniso_e(nn), mag_e(nn);
  std::vector<Vec3> node_g;
  if (want_grad) node_g.resize(nn);
  const bool has_aniso = model_.kind() != PerturbationKind::zero && model_.kind() != PerturbationKind::dmi;
  detail::for_each_index(exec, nn, [&](std::ptrdiff_t i) {
    const double w = node_weight(static_cast<int>(i));
    aniso_e[i] = 0.0;
    mag_e[i] = 0.0;
    Vec3 g = Vec3::Zero();
    // K^T(v) v vanishes identically for DMI, so its anisotropy is skipped.
    if (has_aniso) {
      aniso_e[i] = 0.5 * w * anisotropy_density(model_, v[i], frame.t[i]);
      if (want_grad) g += 0.5 * w * anisotropy_gradient(model_, v[i], frame.t[i]);
    }
    if (demag_) {
      mag_e[i] = w * magnetostatic_density(demag_->m, v[i], frame.n[i], frame.b[i]);
      if (want_grad) g += w * magnetostatic_gradient(demag_->m, v[i], frame.n[i], frame.b[i]);
    }
    if (want_grad) node_g[i] = g;
  });

  if (want_grad) {
    grad->assign(nn, Vec3::Zero());
    detail::for_each_index(exec, nn, [&](std::ptrdiff_t i) {
      Vec3 g = node_g[i];
      if (i < ns) g += seg_gl[i];
      if (i > 0) g += seg_gr[i - 1];
      (*grad)[i] = g;
    });
  }

  const long double ex = detail::ordered_sum_wide(seg_e);
  const long double an = detail::ordered_sum_wide(aniso_e);
  const long double mg = detail::ordered_sum_wide(mag_e);
  EnergyBreakdown e;
  e.exchange_perturb = static_cast<double>(ex);
  e.anisotropy = static_cast<double>(an);
  e.magnetostatic = static_cast<double>(mg);
  e.total = static_cast<double>(ex + an + mg);
  return e;
}

NormalizedEnergy energy_normalization(const EnergyBreakdown& raw, const PerturbationModel& model,
                                      const DirectorField& field, const Curve& curve) {
  NormalizedEnergy out;
  out.limit = raw.total;
  double shift = 0.0;
  if (model.kind() == PerturbationKind::dmi) {
    shift = model.kappa() * model.kappa() * curve.length();
  } else if (model.kind() != PerturbationKind::zero) {
    const double h = curve.spacing();
    for (int i = 0; i < field.nodes(); ++i) {
      const double w = (i == 0 || i == field.nodes() - 1) ? 0.5 * h : h;
      shift += 0.5 * w * model.K_unchecked(field[i]).squaredNorm();
    }
  }
  out.exchange_convention = raw.total - shift;
  return out;
}

double sup_norm(std::span<const Vec3> g) {
  double m = 0.0;
  for (const auto& x : g) m = std::max(m, x.norm());
  return m;
}

std::vector<Vec3> project_tangent(std::span<const Vec3> v, std::span<const Vec3> d) {
  std::vector<Vec3> out(d.begin(), d.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= out[i].dot(v[i]) * v[i];
  return out;
}

}  // namespace curvemag
