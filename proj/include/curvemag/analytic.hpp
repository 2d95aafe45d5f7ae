#pragma once

#include "curvemag/reduced_energy.hpp"

#include <span>
#include <vector>

namespace curvemag {

/// Domain wall theta(x) = 2 atan(exp(-lambda x)), phi(x) = kappa x, minimizing
/// 1/2 theta'^2 + q sin^2 theta; lambda = sqrt(2 q) from the first integral.
struct WallProfile {
  double lambda = 0.0;
  double kappa = 0.0;
  double q_tilde = 0.0;

  double theta(double x) const;
  double theta_prime(double x) const;
  double phi(double x) const { return kappa * x; }
  Vec3 direction(double x) const;
  /// 2 sqrt(2 q).
  double energy() const;
};

WallProfile wall_profile(double kappa, double q_tilde);

struct WallField {
  DirectorField field;
  WallProfile profile;
  double energy = 0.0;
};

/// The wall sampled on a straight curve, pinned to -e1 / +e1.
WallField wall_field(double kappa, double q_tilde, const Curve& line);

struct WallFit {
  double lambda = 0.0;
  double center = 0.0;           // x where theta = pi/2
  int samples = 0;
  double first_integral_rate = 0.0;  // sqrt(2 q)
  double reference_rate = 0.0;         // 1/sqrt(4 pi)
};

/// Least-squares fit of ln tan(theta/2) = -lambda (x - x0), theta = acos(v1),
/// over nodes with |ln tan(theta/2)| <= cutoff.
WallFit fit_wall_rate(const DirectorField& field, const Curve& line, double q_tilde, double cutoff = 6.0);

/// One member of the ring family in strict Frenet components (t, n, b):
///   v_t = (A/w) cos(w phi + phi0) - R kappa B
///   v_n = -A sin(w phi + phi0)
///   v_b = (A R kappa / w) cos(w phi + phi0) + B,     w = sqrt(1 + R^2 kappa^2).
/// (The outward ring normal (cos phi, sin phi, 0) is -n.)
struct RingSolution {
  double radius = 1.0;
  double kappa = 0.0;
  double a = 0.0;
  double b = 0.0;
  double phi0 = 0.0;

  double omega() const;
  Vec3 frenet_components(double phi) const;
  /// a^2 + b^2 w^2 - 1.
  double constraint_residual() const;
  bool periodic() const;
};

/// Samples a ring solution on a ring curve of the same radius as a periodic
/// field. Requires the amplitude constraint to 1e-12 and, for a != 0, an
/// integer w, unless force is set.
DirectorField ring_family(const RingSolution& sol, const Curve& ring, bool force = false);

/// B-branch constant minimizer, sign = +1: v = -(R kappa/w) t + (1/w) b.
RingSolution ring_constant_minimizer(double radius, double kappa, int sign = 1);

/// Rotated field v~ = Rx(alpha) Rz(phi) v, alpha = atan(R kappa), with
/// Rz(phi) v = (v.(cos phi, sin phi, 0), v.(-sin phi, cos phi, 0), v3) and
/// Rx(alpha) = [[1,0,0],[0,cos,sin],[0,-sin,cos]].
Vec3 ring_rotate(const Vec3& v, double phi, double alpha);
Vec3 ring_unrotate(const Vec3& vt, double phi, double alpha);
std::vector<Vec3> ring_rotated(const DirectorField& field, const Curve& ring, double kappa);
DirectorField ring_unrotated(std::span<const Vec3> vt, const Curve& ring, double kappa);

/// Discrete rotated-frame energy per unit angle,
///   1/(2R^2) sum_i dphi |(v~_{i+1} - v~_i)/dphi + w e3 x m_i|^2,
/// m_i the normalized segment mean; R times this matches the curve energy.
double rotated_ring_energy(std::span<const Vec3> vt, double radius, double kappa);

/// Angles with v~ = (sin th cos psi, -sin th sin psi, cos th), so that the
/// energy density reads 1/(2R^2)(th'^2 + sin^2 th (psi' - w)^2).
void ring_spherical_angles(std::span<const Vec3> vt, std::vector<double>& theta, std::vector<double>& psi);
Vec3 ring_from_angles(double theta, double psi);

/// Discrete spherical ring energy
///   F = 1/(2R^2) sum_i dphi [(dth_i/dphi)^2 + S_i (dpsi_i/dphi - w)^2],
///   S_i = (sin^2 th_i + sin^2 th_{i+1})/2,
/// on N+1 samples over [0, 2 pi] (the last sample may differ by 2 k pi).
double ring_spherical_energy(std::span<const double> theta, std::span<const double> psi, double radius,
                             double kappa);

struct RingResidual {
  std::vector<double> r1;  // -th'' + sin th cos th |psi' - w|^2
  std::vector<double> r2;  // -(sin^2 th psi')' + w (sin^2 th)'
  double sup1 = 0.0;
  double sup2 = 0.0;
};

/// Finite-difference Euler-Lagrange residuals at the N distinct nodes;
/// equal to (R^2/dphi) dF/dth_j and (R^2/dphi) dF/dpsi_j.
RingResidual ring_el_residual(std::span<const double> theta, std::span<const double> psi, double radius,
                              double kappa);

/// v~ = (sin(n phi + phi0), cos(n phi + phi0), 0) mapped back to the curve.
DirectorField ring_planar_spiral(const Curve& ring, double kappa, int n, double phi0);

struct RingDemagSolution {
  double gamma = 0.0;
  DirectorField field;
};

/// Constant-angle critical point with the disk magnetostatic term,
///   gamma = (sqrt(4 R^2 k^2 + D^2) + D) / (2 R k),  D = R^2 k^2 + m R^2 - 1,
///   v = -sign gamma/sqrt(1+gamma^2) t + sign/sqrt(1+gamma^2) b,
/// with m = 1/(2 pi) the disk coefficient in reduced units.
double ring_demag_gamma(double radius, double kappa, double m = 1.0 / (2.0 * kPi));
RingDemagSolution ring_demag_solution(const Curve& ring, double kappa, int sign = 1,
                                      double m = 1.0 / (2.0 * kPi));

/// Radius of a ring curve (mean distance of its nodes from the origin).
double ring_radius(const Curve& ring);

}  // namespace curvemag
