#include "curvemag/geometry.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <memory>
#include <string>

namespace curvemag {
namespace {

constexpr double kFlatCurvature = 1e-10;

void require_segments(int segments) {
  if (segments < 8) {
    throw DomainError("curve needs at least 8 segments, got " + std::to_string(segments));
  }
}

// Fornberg's recursion: weights of the derivatives 0..m at x0 for the
// stencil nodes x. Returns w[k][j] for derivative k and node j.
std::vector<std::vector<double>> fd_weights(double x0, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

struct Derivatives {
  Vec3 d1, d2, d3;
};

// Derivatives of uniformly spaced points at node i from a five-point stencil:
// centered in the interior, shifted (one-sided) near the ends of open curves,
// wrapped for closed ones (points[N] == points[0]).
Derivatives stencil_derivatives(const std::vector<Vec3>& p, int i, double h, bool closed) {
  const int n_unique = closed ? static_cast<int>(p.size()) - 1 : static_cast<int>(p.size());
  int first = i - 2;
  if (!closed) first = std::clamp(first, 0, n_unique - 5);
  std::vector<double> offsets(5);
  for (int k = 0; k < 5; ++k) offsets[k] = static_cast<double>(first + k - i);
  const auto w = fd_weights(0.0, offsets, 3);
  Derivatives d{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  for (int k = 0; k < 5; ++k) {
    int idx = first + k;
    if (closed) idx = ((idx % n_unique) + n_unique) % n_unique;
    d.d1 += w[1][k] * p[idx];
    d.d2 += w[2][k] * p[idx];
    d.d3 += w[3][k] * p[idx];
  }
  d.d1 /= h;
  d.d2 /= h * h;
  d.d3 /= h * h * h;
  return d;
}

struct GslSpline {
  std::unique_ptr<gsl_interp_accel, decltype(&gsl_interp_accel_free)> acc{gsl_interp_accel_alloc(),
                                                                         gsl_interp_accel_free};
  std::unique_ptr<gsl_spline, decltype(&gsl_spline_free)> spline{nullptr, gsl_spline_free};

  GslSpline(const std::vector<double>& u, const std::vector<double>& y, bool periodic) {
    const gsl_interp_type* type = periodic ? gsl_interp_cspline_periodic : gsl_interp_cspline;
    spline.reset(gsl_spline_alloc(type, u.size()));
    if (gsl_spline_init(spline.get(), u.data(), y.data(), u.size()) != GSL_SUCCESS) {
      throw DomainError("spline fit of curve samples failed");
    }
  }
  double value(double u) const { return gsl_spline_eval(spline.get(), u, acc.get()); }
  double deriv(double u) const { return gsl_spline_eval_deriv(spline.get(), u, acc.get()); }
};

}  // namespace

void complete_frame(const Vec3& t, Vec3& n, Vec3& b) {
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(t[k]) < std::abs(t[axis])) axis = k;
  }
  Vec3 e = Vec3::Unit(axis);
  n = (e - e.dot(t) * t).normalized();
  b = t.cross(n);
}

Curve Curve::line(double length, int segments) {
  require_segments(segments);
  if (!(length > 0.0)) throw DomainError("line length must be positive");
  Curve c;
  c.kind_ = CurveKind::line;
  c.closed_ = false;
  c.h_ = length / segments;
  c.p0_ = length;
  Vec3 n, b;
  const Vec3 t = Vec3::UnitX();
  complete_frame(t, n, b);
  for (int i = 0; i <= segments; ++i) {
    const double s = -0.5 * length + i * c.h_;
    c.s_.push_back(s);
    c.points_.push_back(s * t);
    c.frame_.t.push_back(t);
    c.frame_.n.push_back(n);
    c.frame_.b.push_back(b);
    c.frame_.curvature.push_back(0.0);
    c.frame_.torsion.push_back(0.0);
  }
  c.check_invariants();
  return c;
}

Curve Curve::ring(double radius, int segments) {
  require_segments(segments);
  if (!(radius > 0.0)) throw DomainError("ring radius must be positive");
  Curve c;
  c.kind_ = CurveKind::ring;
  c.closed_ = true;
  c.h_ = 2.0 * kPi * radius / segments;
  c.p0_ = radius;
  for (int i = 0; i <= segments; ++i) {
    const double s = i * c.h_;
    const CurvePoint p = *c.exact_at(s);
    c.s_.push_back(s);
    c.points_.push_back(p.position);
    c.frame_.t.push_back(p.t);
    c.frame_.n.push_back(p.n);
    c.frame_.b.push_back(p.b);
    c.frame_.curvature.push_back(p.curvature);
    c.frame_.torsion.push_back(p.torsion);
  }
  // Exact closure: the last node is the first one.
  c.points_.back() = c.points_.front();
  c.frame_.t.back() = c.frame_.t.front();
  c.frame_.n.back() = c.frame_.n.front();
  c.frame_.b.back() = c.frame_.b.front();
  c.check_invariants();
  return c;
}

Curve Curve::helix(double a, double b, double turns, int segments) {
  require_segments(segments);
  if (!(a > 0.0) || !(turns > 0.0)) throw DomainError("helix needs a > 0 and turns > 0");
  Curve c;
  c.kind_ = CurveKind::helix;
  c.closed_ = false;
  c.p0_ = a;
  c.p1_ = b;
  const double speed = std::hypot(a, b);
  c.h_ = 2.0 * kPi * speed * turns / segments;
  for (int i = 0; i <= segments; ++i) {
    const double s = i * c.h_;
    const CurvePoint p = *c.exact_at(s);
    c.s_.push_back(s);
    c.points_.push_back(p.position);
    c.frame_.t.push_back(p.t);
    c.frame_.n.push_back(p.n);
    c.frame_.b.push_back(p.b);
    c.frame_.curvature.push_back(p.curvature);
    c.frame_.torsion.push_back(p.torsion);
  }
  c.check_invariants();
  return c;
}

Curve Curve::from_samples(std::span<const Vec3> points, int segments) {
  require_segments(segments);
  if (points.size() < 4) throw DomainError("sampled curve needs at least 4 points");

  double chord_total = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double d = (points[k] - points[k - 1]).norm();
    if (!(d > 0.0)) {
      throw DomainError("non-regular curve samples: repeated point at row " + std::to_string(k));
    }
    chord_total += d;
  }
  const bool closed = (points.front() - points.back()).norm() <= 1e-9 * chord_total;

  std::vector<double> u(points.size(), 0.0);
  std::array<std::vector<double>, 3> xyz;
  for (auto& v : xyz) v.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k > 0) u[k] = u[k - 1] + (points[k] - points[k - 1]).norm();
    for (int d = 0; d < 3; ++d) xyz[d][k] = points[k][d];
  }
  if (closed) {
    for (int d = 0; d < 3; ++d) xyz[d].back() = xyz[d].front();
  }

  gsl_error_handler_t* old_handler = gsl_set_error_handler_off();
  const GslSpline sx(u, xyz[0], closed), sy(u, xyz[1], closed), sz(u, xyz[2], closed);
  gsl_set_error_handler(old_handler);

  auto speed = [&](double uu) { return std::sqrt(std::pow(sx.deriv(uu), 2) + std::pow(sy.deriv(uu), 2) + std::pow(sz.deriv(uu), 2)); };
  // Three-point Gauss-Legendre on [lo, hi].
  auto arc = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const double q = std::sqrt(0.6);
    return half * (5.0 * speed(mid - half * q) + 8.0 * speed(mid) + 5.0 * speed(mid + half * q)) / 9.0;
  };

  constexpr int kSub = 64;
  std::vector<double> fine_u, fine_s;
  fine_u.push_back(u.front());
  fine_s.push_back(0.0);
  for (std::size_t k = 1; k < u.size(); ++k) {
    for (int j = 1; j <= kSub; ++j) {
      const double lo = fine_u.back();
      const double hi = j == kSub ? u[k] : u[k - 1] + (u[k] - u[k - 1]) * j / kSub;
      fine_s.push_back(fine_s.back() + arc(lo, hi));
      fine_u.push_back(hi);
    }
  }
  const double total = fine_s.back();

  Curve c;
  c.kind_ = CurveKind::samples;
  c.closed_ = closed;
  c.h_ = total / segments;
  for (int i = 0; i <= segments; ++i) {
    const double target = i * c.h_;
    auto it = std::upper_bound(fine_s.begin(), fine_s.end(), target);
    std::size_t hi = std::min<std::size_t>(std::distance(fine_s.begin(), it), fine_s.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    double uu = fine_u[lo];
    if (fine_s[hi] > fine_s[lo]) {
      uu += (fine_u[hi] - fine_u[lo]) * (target - fine_s[lo]) / (fine_s[hi] - fine_s[lo]);
    }
    uu = std::clamp(uu, u.front(), u.back());
    for (int it_newton = 0; it_newton < 4; ++it_newton) {
      const double residual = fine_s[lo] + arc(fine_u[lo], uu) - target;
      uu = std::clamp(uu - residual / speed(uu), u.front(), u.back());
    }
    c.s_.push_back(target);
    c.points_.emplace_back(sx.value(uu), sy.value(uu), sz.value(uu));
  }
  if (closed) c.points_.back() = c.points_.front();

  const int n = c.nodes();
  std::vector<Derivatives> der(n);
  std::vector<double> kappa(n);
  for (int i = 0; i < n; ++i) {
    der[i] = stencil_derivatives(c.points_, i, c.h_, closed);
    const Vec3 cr = der[i].d1.cross(der[i].d2);
    kappa[i] = cr.norm() / std::pow(der[i].d1.norm(), 3);
  }
  const bool flat = std::all_of(kappa.begin(), kappa.end(), [](double k) { return k < kFlatCurvature; });
  for (int i = 0; i < n; ++i) {
    const double d1n = der[i].d1.norm();
    if (!(d1n > 0.0)) throw DomainError("non-regular curve: zero tangent at node " + std::to_string(i));
    const Vec3 t = der[i].d1 / d1n;
    Vec3 nn, bb;
    double tau = 0.0;
    if (flat) {
      complete_frame(t, nn, bb);
      kappa[i] = 0.0;
    } else {
      const bool interior = closed || (i > 0 && i < n - 1);
      if (kappa[i] < kFlatCurvature) {
        if (interior) {
          throw DomainError("curvature vanishes at node " + std::to_string(i) +
                            "; the Frenet frame is undefined there");
        }
        // Straight end of an otherwise curved sample: borrow the neighbour's normal.
        const int j = i == 0 ? 1 : n - 2;
        const Vec3 tj = der[j].d1.normalized();
        nn = (der[j].d2 - der[j].d2.dot(tj) * tj).normalized();
        nn = (nn - nn.dot(t) * t).normalized();
      } else {
        nn = (der[i].d2 - der[i].d2.dot(t) * t).normalized();
        const Vec3 cr = der[i].d1.cross(der[i].d2);
        tau = cr.dot(der[i].d3) / cr.squaredNorm();
      }
      bb = t.cross(nn);
    }
    c.frame_.t.push_back(t);
    c.frame_.n.push_back(nn);
    c.frame_.b.push_back(bb);
    c.frame_.curvature.push_back(kappa[i]);
    c.frame_.torsion.push_back(tau);
  }
  c.check_invariants();
  return c;
}

std::optional<CurvePoint> Curve::exact_at(double s) const {
  CurvePoint p;
  switch (kind_) {
    case CurveKind::line: {
      p.position = s * Vec3::UnitX();
      p.t = Vec3::UnitX();
      complete_frame(p.t, p.n, p.b);
      return p;
    }
    case CurveKind::ring: {
      const double r = p0_;
      const double phi = s / r;
      const double c = std::cos(phi), sn = std::sin(phi);
      p.position = Vec3(r * c, r * sn, 0.0);
      p.t = Vec3(-sn, c, 0.0);
      p.n = Vec3(-c, -sn, 0.0);
      p.b = p.t.cross(p.n);
      p.curvature = 1.0 / r;
      return p;
    }
    case CurveKind::helix: {
      const double a = p0_, b = p1_;
      const double speed2 = a * a + b * b;
      const double speed = std::sqrt(speed2);
      const double u = s / speed;
      const double c = std::cos(u), sn = std::sin(u);
      p.position = Vec3(a * c, a * sn, b * u);
      p.t = Vec3(-a * sn, a * c, b) / speed;
      p.n = Vec3(-c, -sn, 0.0);
      p.b = p.t.cross(p.n);
      p.curvature = a / speed2;
      p.torsion = b / speed2;
      return p;
    }
    case CurveKind::samples:
      return std::nullopt;
  }
  return std::nullopt;
}

double Curve::max_curvature() const {
  return *std::max_element(frame_.curvature.begin(), frame_.curvature.end());
}

void Curve::check_invariants() const {
  if (!(h_ > 0.0)) throw DomainError("curve spacing must be positive");
  for (int i = 0; i < nodes(); ++i) {
    if (std::abs(s_[i] - (s_[0] + i * h_)) > 1e-12 * std::max(1.0, length())) {
      throw NumericalError("curve grid is not uniform");
    }
  }
  if (closed_ && (points_.front() - points_.back()).norm() > 1e-12 * std::max(1.0, length())) {
    throw NumericalError("closed curve does not close");
  }
}

TubeJacobian tube_jacobian(const CurvePoint& p, double eps, const Vec2& z) {
  const double alpha = 1.0 - eps * p.curvature * z.x();
  if (alpha == 0.0) throw DomainError("tube map is singular at this point (alpha = 0)");
  Mat3 frame;
  frame.col(0) = p.t;
  frame.col(1) = p.n;
  frame.col(2) = p.b;
  Mat3 a;
  a << alpha, 0.0, 0.0,
       -eps * p.torsion * z.y(), eps, 0.0,
       eps * p.torsion * z.x(), 0.0, eps;
  // Exact inverse of the lower-triangular factor; alpha multiplies the
  // cross-sectional diagonal so that (1/alpha) Phi = a^{-1}.
  Mat3 phi;
  phi << 1.0, 0.0, 0.0,
         p.torsion * z.y(), alpha / eps, 0.0,
         -p.torsion * z.x(), 0.0, alpha / eps;
  TubeJacobian j;
  j.d_phi = frame * a;
  j.det = eps * eps * alpha;
  j.inverse = (phi * frame.transpose()) / alpha;
  return j;
}

TubeChart::TubeChart(const Curve& curve, double eps, double rho_q)
    : curve_(&curve), eps_(eps), rho_q_(rho_q), eps_max_(max_epsilon(curve, rho_q)) {
  if (!(eps > 0.0)) throw DomainError("tube thickness must be positive");
  if (!(eps < eps_max_)) {
    throw DomainError("tube thickness " + std::to_string(eps) + " is not below eps_max = " +
                      std::to_string(eps_max_));
  }
}

double TubeChart::max_epsilon(const Curve& curve, double rho_q) {
  const double k = curve.max_curvature();
  if (k <= 0.0 || rho_q <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (k * rho_q);
}

CurvePoint TubeChart::curve_point(int node) const {
  const auto& f = curve_->frame();
  return CurvePoint{curve_->point(node), f.t[node], f.n[node], f.b[node], f.curvature[node], f.torsion[node]};
}

Vec3 TubeChart::map(int node, const Vec2& z) const {
  const auto& f = curve_->frame();
  return curve_->point(node) + eps_ * (z.x() * f.n[node] + z.y() * f.b[node]);
}

TubeJacobian TubeChart::jacobian(int node, const Vec2& z) const {
  if (z.norm() > rho_q_ * (1.0 + 1e-12)) throw DomainError("chart point lies outside the cross-section radius");
  return tube_jacobian(curve_point(node), eps_, z);
}

}  // namespace curvemag
