#include "curvemag/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace curvemag;

namespace {

MinimizeOptions random_init(std::uint64_t seed) {
  MinimizeOptions o;
  o.init = InitKind::random;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(InitialField, Kinds) {
  const Curve ring = Curve::ring(1.0, 32);
  MinimizeOptions o;
  o.init = InitKind::tangent;
  const DirectorField t = initial_field(ring, BoundaryCondition::periodic(), o);
  for (int i = 0; i < ring.nodes(); ++i) EXPECT_LT((t[i] - ring.frame().t[i]).norm(), 1e-15);
  o.init = InitKind::constant;
  o.constant_value = Vec3(0, 3, 4);
  EXPECT_EQ(initial_field(ring, BoundaryCondition::periodic(), o)[5], Vec3(0, 0.6, 0.8));
  o.constant_value = Vec3::Zero();
  EXPECT_THROW(initial_field(ring, BoundaryCondition::periodic(), o), DomainError);

  const Curve line = Curve::line(20.0, 64);
  o.init = InitKind::wall_ansatz;
  o.wall_rate = 0.5;
  const DirectorField w = initial_field(line, BoundaryCondition::pinned(-Vec3::UnitX(), Vec3::UnitX()), o);
  EXPECT_EQ(w[0], -Vec3::UnitX());
  EXPECT_EQ(w[64], Vec3::UnitX());
  EXPECT_NEAR(w[32].x(), 0.0, 1e-15);
}

TEST(Minimize, RingRandomStartReachesConstantMinimizer) {
  const Curve ring = Curve::ring(1.0, 128);
  const ReducedEnergy e(ring, PerturbationModel::dmi(1.0));
  const MinimizeOptions o = random_init(11);
  const MinimizeResult r = minimize(initial_field(ring, BoundaryCondition::periodic(), o), e, o);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.energy.total, 1e-8);
  EXPECT_LE(r.report.gradient_norm, o.tolerance);
  const double om = std::sqrt(2.0);
  const Vec3 expect_frame(-1 / om, 0.0, 1 / om);
  const double sign = r.field[0].dot(ring.frame().b[0]) > 0 ? 1.0 : -1.0;
  for (int i = 0; i < ring.nodes(); ++i) {
    const Vec3 f(r.field[i].dot(ring.frame().t[i]), r.field[i].dot(ring.frame().n[i]), r.field[i].dot(ring.frame().b[i]));
    EXPECT_LT((f - sign * expect_frame).norm(), 1e-3);
  }
}

TEST(Minimize, HistoryIsMonotoneAndNodesStayUnit) {
  const Curve helix = Curve::helix(1.0, 0.4, 1.0, 96);
  const ReducedEnergy e(helix, PerturbationModel::ado(1.5), demag_matrix(CrossSection::unit_disk(), 256));
  MinimizeOptions o = random_init(3);
  o.max_iters = 400;
  const MinimizeResult r = minimize(initial_field(helix, BoundaryCondition::free(), o), e, o);
  ASSERT_GE(r.report.history.size(), 2u);
  for (std::size_t k = 1; k < r.report.history.size(); ++k) EXPECT_LE(r.report.history[k], r.report.history[k - 1]);
  EXPECT_EQ(r.report.history.back(), r.report.energy.total);
  for (int i = 0; i < r.field.nodes(); ++i) EXPECT_LE(std::abs(r.field[i].norm() - 1.0), 1e-12);
}

TEST(Minimize, Deterministic) {
  const Curve ring = Curve::ring(1.3, 64);
  const ReducedEnergy e(ring, PerturbationModel::dmi(0.8), demag_matrix(CrossSection::unit_disk(), 256));
  const MinimizeOptions o = random_init(42);
  const MinimizeResult a = minimize(initial_field(ring, BoundaryCondition::periodic(), o), e, o);
  const MinimizeResult b = minimize(initial_field(ring, BoundaryCondition::periodic(), o), e, o);
  EXPECT_EQ(a.report.iterations, b.report.iterations);
  EXPECT_EQ(a.report.energy.total, b.report.energy.total);
  EXPECT_EQ(a.field.values(), b.field.values());
  MinimizeOptions serial = o;
  serial.exec = Exec::serial;
  const MinimizeResult c = minimize(initial_field(ring, BoundaryCondition::periodic(), serial), e, serial);
  EXPECT_EQ(a.report.iterations, c.report.iterations);
  EXPECT_EQ(a.report.energy.total, c.report.energy.total);
}

TEST(Minimize, ExactMinimizerIsFixedPoint) {
  const Curve line = Curve::line(10.0, 100);
  const ReducedEnergy e(line, PerturbationModel::dmi(0.5), demag_matrix(CrossSection::unit_disk(), 256));
  MinimizeOptions o;
  o.constant_value = Vec3::UnitX();
  const DirectorField f0 = initial_field(line, BoundaryCondition::pinned(Vec3::UnitX(), Vec3::UnitX()), o);
  const MinimizeResult r = minimize(f0, e, o);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.iterations, 1);
  for (int i = 0; i < f0.nodes(); ++i) EXPECT_LE((r.field[i] - f0[i]).norm(), o.tolerance);
}

TEST(Minimize, IterationCapReportsNonConvergence) {
  const Curve ring = Curve::ring(1.0, 64);
  const ReducedEnergy e(ring, PerturbationModel::dmi(1.0));
  MinimizeOptions o = random_init(5);
  o.max_iters = 1;
  const MinimizeResult r = minimize(initial_field(ring, BoundaryCondition::periodic(), o), e, o);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
  EXPECT_LT(r.report.energy.total, r.report.history.front());
}

TEST(Minimize, RejectsBadOptions) {
  const Curve ring = Curve::ring(1.0, 16);
  const ReducedEnergy e(ring, PerturbationModel::dmi(1.0));
  const DirectorField f = initial_field(ring, BoundaryCondition::periodic(), {});
  MinimizeOptions o;
  o.tolerance = 0.0;
  EXPECT_THROW(minimize(f, e, o), DomainError);
  o = {};
  o.max_iters = 0;
  EXPECT_THROW(minimize(f, e, o), DomainError);
}

TEST(HessianProbe, NonNegativeAtMinimizer) {
  const Curve ring = Curve::ring(1.0, 128);
  const ReducedEnergy e(ring, PerturbationModel::dmi(1.0));
  const MinimizeOptions o = random_init(2);
  const MinimizeResult r = minimize(initial_field(ring, BoundaryCondition::periodic(), o), e, o);
  ASSERT_TRUE(r.report.converged);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = random_tangent_direction(r.field, ring, seed);
    EXPECT_GE(hessian_probe(r.field, d, e), -1e-6);
  }
}

TEST(HessianProbe, QuadraticAlongDirection) {
  // Zero model, constant field: E along the retracted path is the Dirichlet
  // energy of normalize(v + t d), so the probe is sum over segments of |d_{i+1} - d_i|^2 / h.
  const Curve line = Curve::line(4.0, 40);
  const ReducedEnergy e(line, PerturbationModel::zero());
  const DirectorField f(std::vector<Vec3>(line.nodes(), Vec3::UnitZ()), BoundaryCondition::free());
  std::vector<Vec3> d(line.nodes());
  for (int i = 0; i < line.nodes(); ++i) d[i] = Vec3(std::sin(0.5 * line.s(i)), 0.0, 0.0);
  double oracle = 0.0;
  for (int i = 0; i + 1 < line.nodes(); ++i) oracle += (d[i + 1] - d[i]).squaredNorm() / line.spacing();
  EXPECT_NEAR(hessian_probe(f, d, e), oracle, 1e-5 * oracle);
}

TEST(HessianProbe, RejectsIncompatibleDirections) {
  const Curve line = Curve::line(4.0, 16);
  const ReducedEnergy e(line, PerturbationModel::dmi(1.0));
  const DirectorField f(std::vector<Vec3>(line.nodes(), Vec3::UnitZ()), BoundaryCondition::pinned(Vec3::UnitZ(), Vec3::UnitZ()));
  std::vector<Vec3> d(line.nodes(), Vec3::Zero());
  d[5] = Vec3::UnitZ();
  EXPECT_THROW(hessian_probe(f, d, e), DomainError);
  d[5] = Vec3::Zero();
  d[0] = Vec3::UnitX();
  EXPECT_THROW(hessian_probe(f, d, e), DomainError);
  d.pop_back();
  EXPECT_THROW(hessian_probe(f, d, e), DomainError);
}

TEST(RandomTangentDirection, NormalizedAndCompatible) {
  const Curve ring = Curve::ring(1.0, 64);
  const DirectorField f = initial_field(ring, BoundaryCondition::periodic(), random_init(9));
  const auto d = random_tangent_direction(f, ring, 4);
  double l2 = 0.0;
  for (int i = 0; i < ring.segments(); ++i) l2 += ring.spacing() * d[i].squaredNorm();
  EXPECT_NEAR(l2, 1.0, 1e-12);
  EXPECT_EQ(d.front(), d.back());
  for (int i = 0; i < f.nodes(); ++i) EXPECT_LT(std::abs(d[i].dot(f[i])), 1e-14);
  EXPECT_EQ(d, random_tangent_direction(f, ring, 4));
  EXPECT_NE(d, random_tangent_direction(f, ring, 5));
}
