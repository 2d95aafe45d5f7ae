#pragma once

#include "curvemag/reduced_energy.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace curvemag {

enum class InitKind { constant, tangent, random, wall_ansatz, custom };

struct MinimizeOptions {
  int max_iters = 50000;
  double tolerance = 1e-8;  // on sup_i |g_i|
  double armijo = 1e-4;
  int max_halvings = 60;
  std::uint64_t seed = 1;
  InitKind init = InitKind::constant;
  Vec3 constant_value = Vec3::UnitZ();
  double wall_rate = 0.398942280401432678;  // sqrt(1/(2 pi))
  double wall_kappa = 0.0;
  std::vector<Vec3> custom;
  Exec exec = Exec::parallel;
};

struct MinimizeReport {
  EnergyBreakdown energy;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  bool line_search_failed = false;
  std::vector<double> history;  // total energy after each accepted step, starting with the initial value
};

struct MinimizeResult {
  DirectorField field;
  MinimizeReport report;
};

/// Starting field for the given curve and boundary condition.
///   constant:    constant_value everywhere
///   tangent:     v = t
///   random:      independent uniform directions from seed
///   wall_ansatz: v = (cos th, sin th cos kx, sin th sin kx), th = 2 atan(exp(-rate x))
///   custom:      the supplied values
DirectorField initial_field(const Curve& curve, const BoundaryCondition& bc, const MinimizeOptions& opts);

/// Projected gradient descent with normalization retraction, Barzilai-Borwein
/// steps and Armijo backtracking. Returns the best iterate.
MinimizeResult minimize(DirectorField field0, const ReducedEnergy& energy, const MinimizeOptions& opts = {});

/// (E(R(v + d d)) - 2 E(v) + E(R(v - d d))) / d^2 along a tangent direction,
/// R the normalization retraction. Negative values certify descent.
double hessian_probe(const DirectorField& field, std::span<const Vec3> direction, const ReducedEnergy& energy,
                     double step = 1e-4, Exec exec = Exec::parallel);

/// Smooth random tangent direction: Frenet-frame components built from
/// Fourier modes up to max_mode with decaying amplitudes, normalized to
/// sum_i w_i |d_i|^2 = 1 and compatible with the field's boundary condition.
std::vector<Vec3> random_tangent_direction(const DirectorField& field, const Curve& curve, std::uint64_t seed,
                                           int max_mode = 3);

}  // namespace curvemag
