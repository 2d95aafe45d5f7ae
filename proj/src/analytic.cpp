#include "curvemag/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvemag {

namespace {

void require_ring(const Curve& ring) {
  if (ring.kind() != CurveKind::ring) throw DomainError("ring oracle called on a non-ring curve");
}

double node_angle(const Curve& ring, int i) { return 2.0 * kPi * i / ring.segments(); }

}  // namespace

double WallProfile::theta(double x) const { return 2.0 * std::atan(std::exp(-lambda * x)); }

double WallProfile::theta_prime(double x) const { return -lambda * std::sin(theta(x)); }

Vec3 WallProfile::direction(double x) const {
  const double th = theta(x);
  const double ph = phi(x);
  return {std::cos(th), std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)};
}

double WallProfile::energy() const { return 2.0 * std::sqrt(2.0 * q_tilde); }

WallProfile wall_profile(double kappa, double q_tilde) {
  if (!(q_tilde > 0.0)) throw DomainError("wall anisotropy coefficient must be positive");
  return {std::sqrt(2.0 * q_tilde), kappa, q_tilde};
}

WallField wall_field(double kappa, double q_tilde, const Curve& line) {
  if (line.kind() != CurveKind::line) throw DomainError("wall field needs a straight curve");
  const WallProfile p = wall_profile(kappa, q_tilde);
  std::vector<Vec3> v(line.nodes());
  for (int i = 0; i < line.nodes(); ++i) v[i] = p.direction(line.s(i));
  return {DirectorField(std::move(v), BoundaryCondition::pinned(-Vec3::UnitX(), Vec3::UnitX())), p, p.energy()};
}

WallFit fit_wall_rate(const DirectorField& field, const Curve& line, double q_tilde, double cutoff) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = 0; i < field.nodes(); ++i) {
    const double th = std::acos(std::clamp(field[i].x(), -1.0, 1.0));
    const double y = std::log(std::tan(0.5 * th));
    if (!std::isfinite(y) || std::abs(y) > cutoff) continue;
    const double x = line.s(i);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw NumericalError("too few wall samples to fit a decay rate");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  WallFit fit;
  fit.lambda = -slope;
  fit.center = -intercept / slope;
  fit.samples = n;
  fit.first_integral_rate = std::sqrt(2.0 * q_tilde);
  fit.reference_rate = 1.0 / std::sqrt(4.0 * kPi);
  return fit;
}

double RingSolution::omega() const { return std::sqrt(1.0 + radius * radius * kappa * kappa); }

Vec3 RingSolution::frenet_components(double phi) const {
  const double w = omega();
  const double rk = radius * kappa;
  const double c = std::cos(w * phi + phi0);
  const double s = std::sin(w * phi + phi0);
  return {a / w * c - rk * b, -a * s, a * rk / w * c + b};
}

double RingSolution::constraint_residual() const {
  const double w = omega();
  return a * a + b * b * w * w - 1.0;
}

bool RingSolution::periodic() const {
  if (a == 0.0) return true;
  const double w = omega();
  return std::abs(w - std::round(w)) <= 1e-12 * w;
}

double ring_radius(const Curve& ring) {
  double acc = 0.0;
  for (int i = 0; i < ring.segments(); ++i) acc += ring.point(i).norm();
  return acc / ring.segments();
}

DirectorField ring_family(const RingSolution& sol, const Curve& ring, bool force) {
  require_ring(ring);
  if (std::abs(ring_radius(ring) - sol.radius) > 1e-9 * sol.radius) {
    throw DomainError("ring solution radius does not match the curve");
  }
  if (std::abs(sol.constraint_residual()) > 1e-12) {
    throw DomainError("amplitudes violate A^2 + B^2 (1 + R^2 kappa^2) = 1 (residual " +
                      std::to_string(sol.constraint_residual()) + ")");
  }
  if (!force && !sol.periodic()) {
    throw DomainError("A != 0 needs sqrt(1 + R^2 kappa^2) to be an integer for a periodic field");
  }
  const auto& f = ring.frame();
  std::vector<Vec3> v(ring.nodes());
  for (int i = 0; i < ring.nodes(); ++i) {
    const Vec3 c = sol.frenet_components(node_angle(ring, i));
    v[i] = c.x() * f.t[i] + c.y() * f.n[i] + c.z() * f.b[i];
  }
  return DirectorField(std::move(v), BoundaryCondition::periodic());
}

RingSolution ring_constant_minimizer(double radius, double kappa, int sign) {
  RingSolution s;
  s.radius = radius;
  s.kappa = kappa;
  s.a = 0.0;
  s.b = (sign >= 0 ? 1.0 : -1.0) / s.omega();
  return s;
}

Vec3 ring_rotate(const Vec3& v, double phi, double alpha) {
  const double cp = std::cos(phi), sp = std::sin(phi);
  const Vec3 y(cp * v.x() + sp * v.y(), -sp * v.x() + cp * v.y(), v.z());
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  return {y.x(), ca * y.y() + sa * y.z(), -sa * y.y() + ca * y.z()};
}

Vec3 ring_unrotate(const Vec3& vt, double phi, double alpha) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const Vec3 y(vt.x(), ca * vt.y() - sa * vt.z(), sa * vt.y() + ca * vt.z());
  const double cp = std::cos(phi), sp = std::sin(phi);
  return {cp * y.x() - sp * y.y(), sp * y.x() + cp * y.y(), y.z()};
}

std::vector<Vec3> ring_rotated(const DirectorField& field, const Curve& ring, double kappa) {
  require_ring(ring);
  if (field.nodes() != ring.nodes()) throw DomainError("field and ring grids differ");
  const double alpha = std::atan(ring_radius(ring) * kappa);
  std::vector<Vec3> out(field.nodes());
  for (int i = 0; i < field.nodes(); ++i) out[i] = ring_rotate(field[i], node_angle(ring, i), alpha);
  return out;
}

DirectorField ring_unrotated(std::span<const Vec3> vt, const Curve& ring, double kappa) {
  require_ring(ring);
  if (static_cast<int>(vt.size()) != ring.nodes()) throw DomainError("field and ring grids differ");
  const double alpha = std::atan(ring_radius(ring) * kappa);
  std::vector<Vec3> v(vt.size());
  for (int i = 0; i < ring.nodes(); ++i) v[i] = ring_unrotate(vt[i], node_angle(ring, i), alpha);
  return DirectorField(std::move(v), BoundaryCondition::periodic());
}

double rotated_ring_energy(std::span<const Vec3> vt, double radius, double kappa) {
  const int n = static_cast<int>(vt.size()) - 1;
  if (n < 1) throw DomainError("need at least two samples");
  const double dphi = 2.0 * kPi / n;
  const double w = std::sqrt(1.0 + radius * radius * kappa * kappa);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 m = (vt[i] + vt[i + 1]).normalized();
    const Vec3 r = (vt[i + 1] - vt[i]) / dphi + w * Vec3(-m.y(), m.x(), 0.0);
    acc += dphi * r.squaredNorm();
  }
  return acc / (2.0 * radius * radius);
}

void ring_spherical_angles(std::span<const Vec3> vt, std::vector<double>& theta, std::vector<double>& psi) {
  theta.resize(vt.size());
  psi.resize(vt.size());
  for (std::size_t i = 0; i < vt.size(); ++i) {
    theta[i] = std::acos(std::clamp(vt[i].z(), -1.0, 1.0));
    double p = std::atan2(-vt[i].y(), vt[i].x());
    if (i > 0) {
      while (p - psi[i - 1] > kPi) p -= 2.0 * kPi;
      while (p - psi[i - 1] <= -kPi) p += 2.0 * kPi;
    }
    psi[i] = p;
  }
}

Vec3 ring_from_angles(double theta, double psi) {
  return {std::sin(theta) * std::cos(psi), -std::sin(theta) * std::sin(psi), std::cos(theta)};
}

double ring_spherical_energy(std::span<const double> theta, std::span<const double> psi, double radius,
                             double kappa) {
  const int n = static_cast<int>(theta.size()) - 1;
  if (n < 1 || psi.size() != theta.size()) throw DomainError("angle samples have inconsistent sizes");
  const double h = 2.0 * kPi / n;
  const double w = std::sqrt(1.0 + radius * radius * kappa * kappa);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dt = (theta[i + 1] - theta[i]) / h;
    const double p = (psi[i + 1] - psi[i]) / h - w;
    const double s = 0.5 * (std::pow(std::sin(theta[i]), 2) + std::pow(std::sin(theta[i + 1]), 2));
    acc += h * (dt * dt + s * p * p);
  }
  return acc / (2.0 * radius * radius);
}

RingResidual ring_el_residual(std::span<const double> theta, std::span<const double> psi, double radius,
                              double kappa) {
  const int n = static_cast<int>(theta.size()) - 1;
  if (n < 2 || psi.size() != theta.size()) throw DomainError("angle samples have inconsistent sizes");
  const double h = 2.0 * kPi / n;
  const double w = std::sqrt(1.0 + radius * radius * kappa * kappa);
  // Segment quantities, with index -1 taken from the periodic lift.
  auto p_at = [&](int i) {
    if (i < 0) i += n;
    return (psi[i + 1] - psi[i]) / h - w;
  };
  auto s_at = [&](int i) {
    if (i < 0) i += n;
    return 0.5 * (std::pow(std::sin(theta[i]), 2) + std::pow(std::sin(theta[i + 1]), 2));
  };
  const double theta_jump = theta[n] - theta[0];
  RingResidual r;
  r.r1.resize(n);
  r.r2.resize(n);
  for (int j = 0; j < n; ++j) {
    const double prev = (j == 0) ? theta[n - 1] - theta_jump : theta[j - 1];
    const double d2 = (theta[j + 1] - 2.0 * theta[j] + prev) / (h * h);
    const double pl = p_at(j - 1), pr = p_at(j);
    r.r1[j] = -d2 + std::sin(theta[j]) * std::cos(theta[j]) * 0.5 * (pl * pl + pr * pr);
    r.r2[j] = -(s_at(j) * pr - s_at(j - 1) * pl) / h;
    r.sup1 = std::max(r.sup1, std::abs(r.r1[j]));
    r.sup2 = std::max(r.sup2, std::abs(r.r2[j]));
  }
  return r;
}

DirectorField ring_planar_spiral(const Curve& ring, double kappa, int n, double phi0) {
  require_ring(ring);
  std::vector<Vec3> vt(ring.nodes());
  for (int i = 0; i < ring.nodes(); ++i) {
    const double a = n * node_angle(ring, i) + phi0;
    vt[i] = Vec3(std::sin(a), std::cos(a), 0.0);
  }
  return ring_unrotated(vt, ring, kappa);
}

double ring_demag_gamma(double radius, double kappa, double m) {
  if (!(radius > 0.0)) throw DomainError("ring radius must be positive");
  if (kappa == 0.0) {
    throw DomainError("the constant-angle solution is singular at kappa = 0; the DMI-free ring needs the "
                      "separate exchange-only analysis");
  }
  const double rk = radius * kappa;
  const double d = rk * rk + m * radius * radius - 1.0;
  return (std::sqrt(4.0 * rk * rk + d * d) + d) / (2.0 * rk);
}

RingDemagSolution ring_demag_solution(const Curve& ring, double kappa, int sign, double m) {
  require_ring(ring);
  const double gamma = ring_demag_gamma(ring_radius(ring), kappa, m);
  const double sgn = sign >= 0 ? 1.0 : -1.0;
  const double c = 1.0 / std::sqrt(1.0 + gamma * gamma);
  const auto& f = ring.frame();
  std::vector<Vec3> v(ring.nodes());
  for (int i = 0; i < ring.nodes(); ++i) v[i] = sgn * (-gamma * c * f.t[i] + c * f.b[i]);
  return {gamma, DirectorField(std::move(v), BoundaryCondition::periodic())};
}

}  // namespace curvemag
