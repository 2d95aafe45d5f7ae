#include "curvemag/reduced_energy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace curvemag;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

std::vector<Vec3> random_values(int n, std::mt19937_64& rng) {
  std::vector<Vec3> v(n);
  for (auto& x : v) x = random_unit(rng);
  return v;
}

// Smooth field on a curve: a slowly varying unit vector.
std::vector<Vec3> smooth_values(const Curve& c, bool periodic) {
  std::vector<Vec3> v(c.nodes());
  const double w = 2 * kPi / c.length();
  for (int i = 0; i < c.nodes(); ++i) {
    const double x = periodic ? w * c.s(i) : 0.7 * c.s(i);
    v[i] = Vec3(std::cos(x), std::sin(2 * x), 1.5 + std::cos(3 * x)).normalized();
  }
  return v;
}

std::vector<Vec3> random_tangent(const DirectorField& f, std::mt19937_64& rng) {
  std::vector<Vec3> d(f.nodes());
  for (int i = 0; i < f.nodes(); ++i) d[i] = random_unit(rng);
  if (f.bc().kind == BoundaryKind::periodic) d.back() = d.front();
  for (int i = 0; i < f.nodes(); ++i) {
    if (f.is_fixed(i)) d[i].setZero();
  }
  return project_tangent(f.values(), d);
}

double directional_fd(const ReducedEnergy& e, const DirectorField& f, const std::vector<Vec3>& d, double step) {
  auto shifted = [&](double t) {
    std::vector<Vec3> v = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + t * d[i]).normalized();
    return e.energy(std::span<const Vec3>(v), Exec::serial).total;
  };
  return (shifted(step) - shifted(-step)) / (2 * step);
}

double directional_analytic(const DirectorField& f, const std::vector<Vec3>& g, const std::vector<Vec3>& d) {
  const int last = f.bc().kind == BoundaryKind::periodic ? f.nodes() - 1 : f.nodes();
  double s = 0.0;
  for (int i = 0; i < last; ++i) s += g[i].dot(d[i]);
  return s;
}

DemagMatrix disk_demag() { return demag_matrix(CrossSection::unit_disk(), 512); }

}  // namespace

TEST(DirectorField, NormalizesAndKeepsBoundaryValues) {
  DirectorField p({Vec3(2, 0, 0), Vec3(0, 3, 0), Vec3(0, 0, 4), Vec3(5, 0, 0)}, BoundaryCondition::periodic());
  EXPECT_EQ(p[1], Vec3::UnitY());
  EXPECT_EQ(p[3], p[0]);
  p.set(0, Vec3(0, 0, 7));
  EXPECT_EQ(p[3], Vec3::UnitZ());

  DirectorField q({Vec3(0, 1, 0), Vec3(0, 1, 0), Vec3(0, 1, 0)}, BoundaryCondition::pinned(-Vec3::UnitX(), Vec3::UnitX()));
  EXPECT_EQ(q[0], -Vec3::UnitX());
  EXPECT_EQ(q[2], Vec3::UnitX());
  std::vector<Vec3> d(3, Vec3(0, 0, 1));
  q.retract(d, 0.5);
  EXPECT_EQ(q[0], -Vec3::UnitX());
  EXPECT_NEAR(q[1].norm(), 1.0, 1e-15);
  EXPECT_GT(q[1].z(), 0.0);
  EXPECT_THROW(DirectorField({Vec3::Zero(), Vec3::UnitX()}, BoundaryCondition::free()), DomainError);
}

TEST(ReducedEnergy, StraightWireAlongAxisIsGlobalMinimum) {
  const Curve line = Curve::line(20.0, 200);
  const ReducedEnergy e(line, PerturbationModel::dmi(0.9), disk_demag());
  const DirectorField f(std::vector<Vec3>(line.nodes(), Vec3::UnitX()), BoundaryCondition::pinned(Vec3::UnitX(), Vec3::UnitX()));
  std::vector<Vec3> g;
  const EnergyBreakdown b = e.energy_and_gradient(f, g);
  EXPECT_EQ(b.total, 0.0);
  EXPECT_LT(sup_norm(g), 1e-10);
}

TEST(ReducedEnergy, ConstantFieldWithoutPerturbation) {
  for (const Curve& c : {Curve::ring(1.0, 64), Curve::helix(1.0, 0.5, 1.0, 64)}) {
    const ReducedEnergy e(c, PerturbationModel::zero());
    const DirectorField f(std::vector<Vec3>(c.nodes(), Vec3(1, 2, 3)), BoundaryCondition::free());
    EXPECT_EQ(e.energy(f).total, 0.0);
  }
}

TEST(ReducedEnergy, RingConstantMinimizer) {
  const double r = 1.0, kappa = 1.0;
  const Curve ring = Curve::ring(r, 512);
  const ReducedEnergy e(ring, PerturbationModel::dmi(kappa));
  const double om = std::sqrt(1 + r * r * kappa * kappa);
  for (double sign : {1.0, -1.0}) {
    std::vector<Vec3> v(ring.nodes());
    for (int i = 0; i < ring.nodes(); ++i) {
      v[i] = sign * (-(r * kappa / om) * ring.frame().t[i] + ring.frame().b[i] / om);
    }
    const DirectorField f(v, BoundaryCondition::periodic());
    EXPECT_LE(e.energy(f).total, 1e-6);
  }
}

TEST(ReducedEnergy, PartsSumAndSigns) {
  std::mt19937_64 rng(2);
  const Curve c = Curve::helix(1.0, 0.3, 1.0, 100);
  const ReducedEnergy e(c, PerturbationModel::ado(1.4), disk_demag());
  const DirectorField f(random_values(c.nodes(), rng), BoundaryCondition::free());
  const EnergyBreakdown b = e.energy(f);
  EXPECT_NEAR(b.total, b.exchange_perturb + b.anisotropy + b.magnetostatic, 1e-12);
  EXPECT_GE(b.anisotropy, -1e-12);
  EXPECT_GE(b.magnetostatic, -1e-12);
}

TEST(ReducedEnergy, DmiHasNoAnisotropy) {
  std::mt19937_64 rng(3);
  const Curve c = Curve::helix(1.0, 0.3, 1.0, 100);
  const ReducedEnergy e(c, PerturbationModel::dmi(2.0));
  const DirectorField f(random_values(c.nodes(), rng), BoundaryCondition::free());
  EXPECT_LE(std::abs(e.energy(f).anisotropy), 1e-12);
}

TEST(ReducedEnergy, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  CouplingTensor t;
  for (auto& x : t) x = u(rng);
  const Curve ring = Curve::ring(1.2, 48);
  const Curve line = Curve::line(5.0, 40);
  const Curve helix = Curve::helix(1.0, 0.6, 1.0, 40);
  const PerturbationModel models[] = {PerturbationModel::dmi(0.8), PerturbationModel::ado(1.2), PerturbationModel::linear(t)};
  int trial = 0;
  for (int k = 0; k < 100; ++k) {
    const Curve& c = k % 3 == 0 ? ring : (k % 3 == 1 ? line : helix);
    const BoundaryCondition bc = k % 3 == 0   ? BoundaryCondition::periodic()
                                 : k % 2 == 0 ? BoundaryCondition::pinned(random_unit(rng), random_unit(rng))
                                              : BoundaryCondition::free();
    std::optional<DemagMatrix> demag;
    if (k % 2 == 1) demag = disk_demag();
    const ReducedEnergy e(c, models[k % 3], demag);
    const DirectorField f(random_values(c.nodes(), rng), bc);
    const auto g = e.gradient(f, Exec::serial);
    const auto d = random_tangent(f, rng);
    const double an = directional_analytic(f, g, d);
    const double fd = directional_fd(e, f, d, 1e-5);
    EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(fd))) << "trial " << k;
    ++trial;
  }
  EXPECT_EQ(trial, 100);
}

TEST(ReducedEnergy, GradientIsTangentAndZeroOnPinnedEnds) {
  std::mt19937_64 rng(5);
  const Curve line = Curve::line(4.0, 32);
  const ReducedEnergy e(line, PerturbationModel::dmi(1.0), disk_demag());
  const DirectorField f(random_values(line.nodes(), rng), BoundaryCondition::pinned(-Vec3::UnitX(), Vec3::UnitX()));
  const auto g = e.gradient(f);
  EXPECT_EQ(g.front(), Vec3::Zero());
  EXPECT_EQ(g.back(), Vec3::Zero());
  for (int i = 0; i < f.nodes(); ++i) EXPECT_LT(std::abs(g[i].dot(f[i])), 1e-13);
}

TEST(ReducedEnergy, PeriodicGradientCopiesAgree) {
  std::mt19937_64 rng(6);
  const Curve ring = Curve::ring(1.0, 32);
  const ReducedEnergy e(ring, PerturbationModel::dmi(1.0));
  const DirectorField f(random_values(ring.nodes(), rng), BoundaryCondition::periodic());
  EXPECT_EQ(f[0], f[ring.nodes() - 1]);
  const auto g = e.gradient(f);
  EXPECT_EQ(g.front(), g.back());
}

TEST(ReducedEnergy, RefinementIsSecondOrder) {
  auto energy_at = [](int n) {
    const Curve ring = Curve::ring(1.0, n);
    const ReducedEnergy e(ring, PerturbationModel::ado(1.5), disk_demag());
    return e.energy(DirectorField(smooth_values(ring, true), BoundaryCondition::periodic())).total;
  };
  const double e1 = energy_at(64), e2 = energy_at(128), e3 = energy_at(256);
  EXPECT_NEAR((e1 - e2) / (e2 - e3), 4.0, 0.2);

  auto line_at = [](int n) {
    const Curve line = Curve::line(4.0, n);
    const ReducedEnergy e(line, PerturbationModel::dmi(0.8));
    return e.energy(DirectorField(smooth_values(line, false), BoundaryCondition::free())).total;
  };
  const double l1 = line_at(64), l2 = line_at(128), l3 = line_at(256);
  EXPECT_NEAR((l1 - l2) / (l2 - l3), 4.0, 0.2);
}

TEST(ReducedEnergy, SerialAndParallelAgreeBitwise) {
  std::mt19937_64 rng(7);
  const Curve c = Curve::helix(1.0, 0.3, 2.0, 3000);
  const ReducedEnergy e(c, PerturbationModel::ado(1.1), disk_demag());
  const DirectorField f(random_values(c.nodes(), rng), BoundaryCondition::free());
  std::vector<Vec3> gs, gp;
  const EnergyBreakdown s = e.energy_and_gradient(f, gs, Exec::serial);
  const EnergyBreakdown p = e.energy_and_gradient(f, gp, Exec::parallel);
  EXPECT_EQ(s.total, p.total);
  EXPECT_EQ(s.exchange_perturb, p.exchange_perturb);
  EXPECT_EQ(s.anisotropy, p.anisotropy);
  EXPECT_EQ(s.magnetostatic, p.magnetostatic);
  EXPECT_EQ(gs, gp);
}

TEST(ReducedEnergy, Errors) {
  const Curve ring = Curve::ring(1.0, 32);
  const Curve line = Curve::line(1.0, 32);
  const ReducedEnergy e(ring, PerturbationModel::dmi(1.0));
  EXPECT_THROW(e.energy(DirectorField(std::vector<Vec3>(20, Vec3::UnitX()), BoundaryCondition::periodic())), DomainError);
  std::vector<Vec3> v(ring.nodes(), Vec3::UnitX());
  v[3] = Vec3(1, 1, 0);
  EXPECT_THROW(e.energy(std::span<const Vec3>(v)), DomainError);
  const ReducedEnergy el(line, PerturbationModel::dmi(1.0));
  EXPECT_THROW(el.energy(DirectorField(std::vector<Vec3>(line.nodes(), Vec3::UnitX()), BoundaryCondition::periodic())),
               DomainError);
}

TEST(EnergyNormalization, DmiSubtractsKappaSquaredLength) {
  const Curve line = Curve::line(6.0, 60);
  const PerturbationModel dmi = PerturbationModel::dmi(0.5);
  const ReducedEnergy e(line, dmi);
  const DirectorField f(std::vector<Vec3>(line.nodes(), Vec3::UnitX()), BoundaryCondition::free());
  const EnergyBreakdown b = e.energy(f);
  const NormalizedEnergy n = energy_normalization(b, dmi, f, line);
  EXPECT_EQ(n.limit, 0.0);
  EXPECT_NEAR(n.exchange_convention, -0.25 * 6.0, 1e-13);

  const Curve ring = Curve::ring(1.0, 64);
  const PerturbationModel k1 = PerturbationModel::dmi(1.0);
  const DirectorField fr(std::vector<Vec3>(ring.nodes(), Vec3::UnitZ()), BoundaryCondition::periodic());
  const NormalizedEnergy nr = energy_normalization(ReducedEnergy(ring, k1).energy(fr), k1, fr, ring);
  EXPECT_NEAR(nr.limit - nr.exchange_convention, 2 * kPi, 1e-12);
}

TEST(EnergyNormalization, AdoSubtractsHalfIntegralOfSquaredK) {
  std::mt19937_64 rng(8);
  const Curve c = Curve::line(3.0, 30);
  const PerturbationModel ado = PerturbationModel::ado(2.0);
  const DirectorField f(random_values(c.nodes(), rng), BoundaryCondition::free());
  double oracle = 0.0;
  for (int i = 0; i < c.nodes(); ++i) {
    const Vec3& s = f[i];
    const double w = (i == 0 || i == c.nodes() - 1) ? 0.5 * c.spacing() : c.spacing();
    oracle += w * 0.5 * 3.0 * std::pow(2.0 * s.x() * s.y() * s.z(), 2);
  }
  const NormalizedEnergy n = energy_normalization(ReducedEnergy(c, ado).energy(f), ado, f, c);
  EXPECT_NEAR(n.limit - n.exchange_convention, oracle, 1e-12);
}
