#include "curvemag/dimension3d.hpp"

#include <cmath>
#include <string>

namespace curvemag {

CrossSectionQuadrature CrossSectionQuadrature::polar(const CrossSection& disk, int radial, int angular) {
  if (disk.kind() != CrossSectionKind::disk) throw DomainError("polar quadrature needs a disk");
  if (radial < 3 || angular < 8) throw DomainError("polar quadrature needs >= 3 radial and >= 8 angular nodes");
  CrossSectionQuadrature q;
  q.polar_ = true;
  q.n1_ = radial;
  q.n2_ = angular;
  q.d1_ = disk.radius() / radial;
  q.d2_ = 2.0 * kPi / angular;
  for (int j = 0; j < radial; ++j) {
    const double r = (j + 0.5) * q.d1_;
    for (int k = 0; k < angular; ++k) {
      const double th = k * q.d2_;
      q.nodes_.emplace_back(r * std::cos(th), r * std::sin(th));
      q.weights_.push_back(r * q.d1_ * q.d2_);
    }
  }
  return q;
}

CrossSectionQuadrature CrossSectionQuadrature::tensor(const CrossSection& square, int per_side) {
  if (square.kind() != CrossSectionKind::square) throw DomainError("tensor quadrature needs a square");
  if (per_side < 3) throw DomainError("tensor quadrature needs >= 3 nodes per side");
  CrossSectionQuadrature q;
  q.polar_ = false;
  q.n1_ = q.n2_ = per_side;
  q.d1_ = q.d2_ = square.side() / per_side;
  const double lo = -0.5 * square.side();
  for (int j = 0; j < per_side; ++j) {
    for (int k = 0; k < per_side; ++k) {
      q.nodes_.emplace_back(lo + (j + 0.5) * q.d1_, lo + (k + 0.5) * q.d2_);
      q.weights_.push_back(q.d1_ * q.d2_);
    }
  }
  return q;
}

CrossSectionQuadrature CrossSectionQuadrature::for_section(const CrossSection& q, int radial, int angular,
                                                           int per_side) {
  switch (q.kind()) {
    case CrossSectionKind::disk:
      return polar(q, radial, angular);
    case CrossSectionKind::square:
      return tensor(q, per_side);
    default:
      throw DomainError("no cross-section quadrature for general polygons");
  }
}

double CrossSectionQuadrature::area() const {
  double a = 0.0;
  for (double w : weights_) a += w;
  return a;
}

namespace {

// Second-order first derivative along a line of n samples f(idx(0..n-1)).
template <typename Get>
Vec3 diff2(Get f, int j, int n, double h) {
  if (j == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  if (j == n - 1) return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
  return (f(j + 1) - f(j - 1)) / (2.0 * h);
}

}  // namespace

void CrossSectionQuadrature::derivatives(std::span<const Vec3> f, std::span<Vec3> d1, std::span<Vec3> d2,
                                         std::span<Vec3> rot) const {
  if (polar_) {
    const int nr = n1_, nt = n2_;
    for (int j = 0; j < nr; ++j) {
      const double r = (j + 0.5) * d1_;
      for (int k = 0; k < nt; ++k) {
        auto at = [&](int jj, int kk) -> const Vec3& { return f[jj * nt + ((kk % nt) + nt) % nt]; };
        const Vec3 fr = diff2([&](int jj) { return at(jj, k); }, j, nr, d1_);
        const Vec3 ft = (-at(j, k + 2) + 8.0 * at(j, k + 1) - 8.0 * at(j, k - 1) + at(j, k - 2)) / (12.0 * d2_);
        const double th = k * d2_;
        const double c = std::cos(th), s = std::sin(th);
        const int idx = j * nt + k;
        d1[idx] = c * fr - s / r * ft;
        d2[idx] = s * fr + c / r * ft;
        rot[idx] = -ft;
      }
    }
  } else {
    const int n = n1_;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const int idx = j * n + k;
        d1[idx] = diff2([&](int jj) { return f[jj * n + k]; }, j, n, d1_);
        d2[idx] = diff2([&](int kk) { return f[j * n + kk]; }, k, n, d2_);
        const Vec2& z = nodes_[idx];
        rot[idx] = z.y() * d1[idx] - z.x() * d2[idx];
      }
    }
  }
}

CylinderField CylinderField::lifted(const DirectorField& v, const CrossSectionQuadrature& quad) {
  CylinderField c{v.nodes(), quad, {}};
  c.w.reserve(static_cast<std::size_t>(v.nodes()) * quad.size());
  for (int i = 0; i < v.nodes(); ++i)
    for (int j = 0; j < quad.size(); ++j) c.w.push_back(v[i]);
  return c;
}

double pullback_integrand(const TubeChart& chart, const CurvePoint& p, const Vec2& z, const Vec3& w,
                          const Vec3& ws, const Vec3& w1, const Vec3& w2, const PerturbationModel& model) {
  const double eps = chart.epsilon();
  const double alpha = 1.0 - eps * p.curvature * z.x();
  const Mat3 k = model.K_unchecked(w);
  const Vec3 a = ws + p.torsion * (z.y() * w1 - z.x() * w2) + alpha * k * p.t;
  const Vec3 b1 = w1 / eps + k * p.n;
  const Vec3 b2 = w2 / eps + k * p.b;
  return a.squaredNorm() / alpha + alpha * (b1.squaredNorm() + b2.squaredNorm());
}

double pullback_energy(const CylinderField& w, const TubeChart& chart, const PerturbationModel& model, Exec exec) {
  const Curve& curve = chart.curve();
  const int nn = curve.nodes();
  const int ns = curve.segments();
  const auto& quad = w.quadrature;
  const int nq = quad.size();
  if (w.s_nodes != nn) throw DomainError("cylinder field and curve grids differ");
  for (const auto& x : w.w) {
    if (std::abs(x.squaredNorm() - 1.0) > 2e-10) throw DomainError("cylinder field is not unit-valued");
  }
  const double h = curve.spacing();
  const double eps = chart.epsilon();
  const auto& f = curve.frame();
  const auto& zs = quad.nodes();
  const auto& wz = quad.weights();

  std::vector<Vec3> rot(static_cast<std::size_t>(nn) * nq);
  std::vector<double> node_terms(nn);
  detail::for_each_index(exec, nn, [&](std::ptrdiff_t i) {
    std::vector<Vec3> d1(nq), d2(nq);
    const std::span<const Vec3> wi(w.w.data() + i * nq, nq);
    quad.derivatives(wi, d1, d2, std::span<Vec3>(rot.data() + i * nq, nq));
    const double trap = (i == 0 || i == ns) ? 0.5 * h : h;
    double acc = 0.0;
    for (int j = 0; j < nq; ++j) {
      const double alpha = 1.0 - eps * f.curvature[i] * zs[j].x();
      const Mat3 k = model.K_unchecked(wi[j]);
      acc += wz[j] * alpha * ((d1[j] / eps + k * f.n[i]).squaredNorm() + (d2[j] / eps + k * f.b[i]).squaredNorm());
    }
    node_terms[i] = trap * acc;
  });

  std::vector<double> seg_terms(ns);
  detail::for_each_index(exec, ns, [&](std::ptrdiff_t i) {
    const Vec3 tm = (f.t[i] + f.t[i + 1]).normalized();
    const double km = 0.5 * (f.curvature[i] + f.curvature[i + 1]);
    const double tau = 0.5 * (f.torsion[i] + f.torsion[i + 1]);
    double acc = 0.0;
    for (int j = 0; j < nq; ++j) {
      const Vec3& a = w.at(static_cast<int>(i), j);
      const Vec3& b = w.at(static_cast<int>(i) + 1, j);
      const Vec3 m = (a + b).normalized();
      const Vec3 r_avg = 0.5 * (rot[i * nq + j] + rot[(i + 1) * nq + j]);
      const double alpha = 1.0 - eps * km * zs[j].x();
      const Vec3 r = (b - a) / h + tau * r_avg + alpha * model.K_unchecked(m) * tm;
      acc += wz[j] * r.squaredNorm() / alpha;
    }
    seg_terms[i] = h * acc;
  });

  return (detail::ordered_sum(seg_terms) + detail::ordered_sum(node_terms)) / (2.0 * quad.area());
}

std::pair<Vec3, Vec3> recovery_correctors(const Vec3& v0, const Vec3& n, const Vec3& b,
                                          const PerturbationModel& model) {
  const Mat3 k = model.K(v0);
  return {v0.cross(v0.cross(k * n)), v0.cross(v0.cross(k * b))};
}

CylinderField recovery_field(const DirectorField& v0, const TubeChart& chart, const PerturbationModel& model,
                             const CrossSectionQuadrature& quad) {
  const Curve& curve = chart.curve();
  if (v0.nodes() != curve.nodes()) throw DomainError("field and curve grids differ");
  const auto& f = curve.frame();
  const double eps = chart.epsilon();
  CylinderField c{v0.nodes(), quad, std::vector<Vec3>(static_cast<std::size_t>(v0.nodes()) * quad.size())};
  for (int i = 0; i < v0.nodes(); ++i) {
    const auto [d1, d2] = recovery_correctors(v0[i], f.n[i], f.b[i], model);
    for (int j = 0; j < quad.size(); ++j) {
      const Vec2& z = quad.nodes()[j];
      c.at(i, j) = (v0[i] + eps * (z.x() * d1 + z.y() * d2)).normalized();
    }
  }
  return c;
}

std::vector<GammaStudyRow> gamma_convergence_study(const CurveFactory& make_curve, const FieldFactory& make_field,
                                                   const PerturbationModel& model, const CrossSection& q,
                                                   std::span<const double> eps_list,
                                                   const GammaStudyOptions& opts) {
  if (eps_list.empty()) throw DomainError("empty epsilon list");
  for (std::size_t k = 1; k < eps_list.size(); ++k) {
    if (!(eps_list[k] < eps_list[k - 1])) throw DomainError("epsilon list must be strictly decreasing");
  }
  const auto quad = CrossSectionQuadrature::for_section(q, opts.radial, opts.angular, opts.per_side);
  const Curve probe = make_curve(opts.min_segments);
  std::vector<GammaStudyRow> rows;
  for (double eps : eps_list) {
    const int need = static_cast<int>(std::ceil(probe.length() / (opts.h_factor * eps)));
    const int segments = std::max(opts.min_segments, need);
    const Curve curve = make_curve(segments);
    const TubeChart chart(curve, eps, q.rho());
    const DirectorField v0 = make_field(curve);
    GammaStudyRow row;
    row.epsilon = eps;
    row.segments = segments;
    row.e3d = pullback_energy(recovery_field(v0, chart, model, quad), chart, model, opts.exec);
    row.e1d = ReducedEnergy(curve, model).energy(v0, opts.exec).total;
    row.gap = std::abs(row.e3d - row.e1d);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace curvemag
