#include "curvemag/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace curvemag {

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 x;
  do {
    x = Vec3(g(rng), g(rng), g(rng));
  } while (x.norm() < 1e-8);
  return x.normalized();
}

double dot_fields(std::span<const Vec3> a, std::span<const Vec3> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].dot(b[i]);
  return acc;
}

}  // namespace

DirectorField initial_field(const Curve& curve, const BoundaryCondition& bc, const MinimizeOptions& opts) {
  const int nn = curve.nodes();
  std::vector<Vec3> v(nn);
  switch (opts.init) {
    case InitKind::constant:
      if (opts.constant_value.norm() == 0.0) throw DomainError("constant initial value is zero");
      std::fill(v.begin(), v.end(), opts.constant_value.normalized());
      break;
    case InitKind::tangent:
      v = curve.frame().t;
      break;
    case InitKind::random: {
      std::mt19937_64 rng(opts.seed);
      for (auto& x : v) x = random_unit(rng);
      break;
    }
    case InitKind::wall_ansatz:
      for (int i = 0; i < nn; ++i) {
        const double x = curve.s(i);
        const double th = 2.0 * std::atan(std::exp(-opts.wall_rate * x));
        v[i] = Vec3(std::cos(th), std::sin(th) * std::cos(opts.wall_kappa * x),
                    std::sin(th) * std::sin(opts.wall_kappa * x));
      }
      break;
    case InitKind::custom:
      if (static_cast<int>(opts.custom.size()) != nn) throw DomainError("custom initial field has the wrong size");
      v = opts.custom;
      break;
  }
  return DirectorField(std::move(v), bc);
}

MinimizeResult minimize(DirectorField field, const ReducedEnergy& energy, const MinimizeOptions& opts) {
  if (!(opts.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (opts.max_iters < 1) throw DomainError("max_iters must be at least 1");

  MinimizeReport rep;
  std::vector<Vec3> g;
  EnergyBreakdown e = energy.energy_and_gradient(field, g, opts.exec);
  rep.history.push_back(e.total);
  double gnorm = sup_norm(g);
  const double h = energy.curve().spacing();
  double step = 0.5 * h * h;

  const double eps_mach = std::numeric_limits<double>::epsilon();
  std::vector<Vec3> dir(g.size()), g_new;
  int it = 0;
  while (gnorm >= opts.tolerance && it < opts.max_iters) {
    for (std::size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
    const double slope = dot_fields(g, g);

    double a = step;
    bool accepted = false;
    DirectorField trial = field;
    EnergyBreakdown e_trial;
    for (int k = 0; k <= opts.max_halvings; ++k) {
      trial = field;
      trial.retract(dir, a);
      e_trial = energy.energy_and_gradient(trial, g_new, opts.exec);
      if (e_trial.total <= e.total - opts.armijo * a * slope) {
        accepted = true;
        break;
      }
      // Once the predicted decrease is below rounding in E, fall back to
      // requiring no increase in E and a smaller gradient.
      if (opts.armijo * a * slope <= 64.0 * eps_mach * std::max(1.0, std::abs(e.total)) &&
          e_trial.total <= e.total && dot_fields(g_new, g_new) < slope) {
        accepted = true;
        break;
      }
      a *= 0.5;
    }
    if (!accepted) {
      rep.line_search_failed = true;
      break;
    }

    // Barzilai-Borwein from ambient differences of iterates and gradients.
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec3 s = trial[static_cast<int>(i)] - field[static_cast<int>(i)];
      const Vec3 y = g_new[i] - g[i];
      ss += s.squaredNorm();
      sy += s.dot(y);
    }
    step = (sy > 0.0) ? ss / sy : 2.0 * a;
    step = std::clamp(step, 1e-3 * h * h, 1e6);

    field = std::move(trial);
    g.swap(g_new);
    e = e_trial;
    gnorm = sup_norm(g);
    rep.history.push_back(e.total);
    ++it;
  }

  rep.energy = e;
  rep.iterations = it;
  rep.gradient_norm = gnorm;
  rep.converged = gnorm < opts.tolerance;
  return {std::move(field), std::move(rep)};
}

double hessian_probe(const DirectorField& field, std::span<const Vec3> direction, const ReducedEnergy& energy,
                     double step, Exec exec) {
  const int nn = field.nodes();
  if (static_cast<int>(direction.size()) != nn) throw DomainError("probe direction has the wrong size");
  for (int i = 0; i < nn; ++i) {
    if (std::abs(direction[i].dot(field[i])) > 1e-10 * std::max(1.0, direction[i].norm())) {
      throw DomainError("probe direction is not tangent at node " + std::to_string(i));
    }
    if (field.is_fixed(i) && direction[i].norm() > 0.0) {
      throw DomainError("probe direction moves a pinned node");
    }
  }
  if (field.bc().kind == BoundaryKind::periodic && (direction[0] - direction[nn - 1]).norm() > 1e-12) {
    throw DomainError("probe direction is not periodic");
  }
  DirectorField plus = field, minus = field;
  plus.retract(direction, step);
  minus.retract(direction, -step);
  const double e0 = energy.energy(field, exec).total;
  const double ep = energy.energy(plus, exec).total;
  const double em = energy.energy(minus, exec).total;
  return (ep - 2.0 * e0 + em) / (step * step);
}

std::vector<Vec3> random_tangent_direction(const DirectorField& field, const Curve& curve, std::uint64_t seed,
                                           int max_mode) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const int nn = field.nodes();
  const double len = curve.length();
  const double s0 = curve.s(0);
  const bool periodic = field.bc().kind == BoundaryKind::periodic;
  std::vector<Vec3> d(nn, Vec3::Zero());
  const auto& fr = curve.frame();
  for (int k = 0; k <= max_mode; ++k) {
    const Vec3 ac(g(rng), g(rng), g(rng));
    const Vec3 as(g(rng), g(rng), g(rng));
    const double amp = 1.0 / (1.0 + k * k);
    for (int i = 0; i < nn; ++i) {
      const double x = (curve.s(i) - s0) / len;
      // Open curves use a half-period sine basis so pinned ends stay fixed.
      const double arg = periodic ? 2.0 * kPi * k * x : kPi * (k + 1) * x;
      const Vec3 c = amp * (periodic ? ac * std::cos(arg) + as * std::sin(arg) : ac * std::sin(arg) + as * std::cos(arg));
      d[i] += c.x() * fr.t[i] + c.y() * fr.n[i] + c.z() * fr.b[i];
    }
  }
  if (periodic) d[nn - 1] = d[0];
  for (int i = 0; i < nn; ++i) {
    if (field.is_fixed(i)) d[i].setZero();
    d[i] -= d[i].dot(field[i]) * field[i];
  }
  const double h = curve.spacing();
  double norm2 = 0.0;
  for (int i = 0; i < nn; ++i) norm2 += ((i == 0 || i == nn - 1) ? 0.5 * h : h) * d[i].squaredNorm();
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& x : d) x *= scale;
  return d;
}

}  // namespace curvemag
