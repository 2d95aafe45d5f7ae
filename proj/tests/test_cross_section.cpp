#include "curvemag/cross_section.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace curvemag;

namespace {

Mat2 rotation(double a) {
  Mat2 r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

CrossSection unit_triangle() {
  return CrossSection::polygon({Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 1.5)}).scaled_to_unit_area();
}

}  // namespace

TEST(CrossSection, AreasAndRadii) {
  const CrossSection d = CrossSection::unit_disk();
  EXPECT_NEAR(d.area(), 1.0, 1e-15);
  EXPECT_NEAR(d.radius(), 0.5641895835477563, 1e-15);
  EXPECT_NEAR(d.rho(), d.radius(), 0.0);
  const CrossSection s = CrossSection::square(1.0);
  EXPECT_DOUBLE_EQ(s.area(), 1.0);
  EXPECT_DOUBLE_EQ(s.rho(), std::sqrt(0.5));
  EXPECT_NEAR(unit_triangle().area(), 1.0, 1e-14);
}

TEST(CrossSection, DivergenceTheoremArea) {
  for (const auto& q : {CrossSection::unit_disk(), CrossSection::square(1.0), unit_triangle(), CrossSection::disk(2.0)}) {
    const BoundaryPanels bp = q.boundary(4096);
    EXPECT_NEAR(bp.enclosed_area() / q.area(), 1.0, 1e-6);
    for (int j = 0; j < bp.size(); ++j) {
      EXPECT_NEAR(bp.normals[j].norm(), 1.0, 1e-14);
      EXPECT_NEAR(bp.normals[j].dot(bp.tangents[j]), 0.0, 1e-14);
      EXPECT_GT(bp.lengths[j], 0.0);
    }
  }
}

TEST(CrossSection, PanelLogIntegralMatchesQuadrature) {
  const Vec2 c(0.3, -0.2), tau = Vec2(1.0, 2.0).normalized();
  const double half = 0.05;
  const Vec2 x(0.7, 0.4);
  double fine = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double u = -half + (k + 0.5) * 2 * half / n;
    fine += std::log((x - (c + u * tau)).norm()) * 2 * half / n;
  }
  EXPECT_NEAR(panel_log_integral(x, c, tau, half), fine, 1e-10);
  // Self panel: int ln|u| du = w (ln(w/2) - 1).
  EXPECT_NEAR(panel_log_integral(c, c, tau, half), 2 * half * (std::log(half) - 1.0), 1e-15);
}

TEST(Demag, UnitDiskRichardsonValue) {
  const double m1 = demag_matrix(CrossSection::unit_disk(), 512).m(0, 0);
  const double m2 = demag_matrix(CrossSection::unit_disk(), 1024).m(0, 0);
  const double m3 = demag_matrix(CrossSection::unit_disk(), 2048).m(0, 0);
  EXPECT_LT(std::abs(m3 - m2), std::abs(m2 - m1));
  EXPECT_NEAR((4 * m3 - m2) / 3, 1 / (2 * kPi), 1e-6);
  EXPECT_NEAR((4 * m2 - m1) / 3, 1 / (2 * kPi), 1e-6);
  EXPECT_NEAR(m3, 1 / (2 * kPi), 1e-5);
}

TEST(Demag, UnitDiskIsIsotropic) {
  const DemagMatrix d = demag_matrix(CrossSection::unit_disk(), 1024);
  EXPECT_NEAR(d.m(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(d.m(0, 0), d.m(1, 1), 1e-12);
  EXPECT_EQ(d.m(0, 1), d.m(1, 0));
  EXPECT_EQ(d.panels, 1024);
}

TEST(Demag, SiUnitsScaleByPi) {
  const DemagMatrix r = demag_matrix(CrossSection::unit_disk(), 512, DemagUnits::reduced);
  const DemagMatrix s = demag_matrix(CrossSection::unit_disk(), 512, DemagUnits::si);
  EXPECT_NEAR(s.m(0, 0), kPi * r.m(0, 0), 1e-14);
  EXPECT_NEAR(s.m(0, 0) + s.m(1, 1), 1.0, 1e-4);
}

TEST(Demag, UnitSquareSymmetry) {
  const DemagMatrix d = demag_matrix(CrossSection::square(1.0), 1024);
  EXPECT_LT(std::abs(d.m(0, 1)), 1e-10);
  EXPECT_NEAR(d.m(0, 0), d.m(1, 1), 1e-10);
  EXPECT_GT(d.m(0, 0), 0.0);
}

TEST(Demag, StartAngleInvariance) {
  const Mat2 a = demag_matrix(CrossSection::unit_disk(), 512, DemagUnits::reduced, Exec::parallel, 0.0).m;
  const Mat2 b = demag_matrix(CrossSection::unit_disk(), 512, DemagUnits::reduced, Exec::parallel, 0.77).m;
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Demag, RotationConjugates) {
  const CrossSection q = unit_triangle();
  const Mat2 m = demag_matrix(q, 1536).m;
  for (double a : {0.4, 1.3, -2.0}) {
    const Mat2 mr = demag_matrix(q.rotated(a), 1536).m;
    const Mat2 r = rotation(a);
    EXPECT_LT((mr - r * m * r.transpose()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Demag, SymmetricPositive) {
  for (const auto& q : {CrossSection::unit_disk(), CrossSection::square(1.0), unit_triangle()}) {
    const Mat2 m = demag_matrix(q, 768).m;
    EXPECT_LE(std::abs(m(0, 1) - m(1, 0)), 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat2> es(m);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Demag, SerialAndParallelAgreeBitwise) {
  const Mat2 a = demag_matrix(unit_triangle(), 999, DemagUnits::reduced, Exec::serial).m;
  const Mat2 b = demag_matrix(unit_triangle(), 999, DemagUnits::reduced, Exec::parallel).m;
  EXPECT_EQ(a, b);
}

TEST(Demag, Errors) {
  EXPECT_THROW(demag_matrix(CrossSection::unit_disk(), 63), DomainError);
  EXPECT_THROW(demag_matrix(CrossSection::disk(1.0), 256), DomainError);
  EXPECT_THROW(demag_matrix(CrossSection::square(2.0), 256), DomainError);
  EXPECT_THROW(CrossSection::polygon({Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)}), DomainError);
  EXPECT_THROW(CrossSection::polygon({Vec2(0, 0), Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}), DomainError);
}

TEST(Magnetostatic, DiskExamples) {
  const Mat2 m = demag_matrix(CrossSection::unit_disk(), 2048).m;
  const Vec3 t = Vec3::UnitX(), n = Vec3::UnitY(), b = Vec3::UnitZ();
  EXPECT_EQ(magnetostatic_density(m, t, n, b), 0.0);
  EXPECT_NEAR(magnetostatic_density(m, n, n, b), 1 / (4 * kPi), 1e-5);
  for (double th : {0.1, 0.7, 1.2, 2.9}) {
    const Vec3 s(std::cos(th), std::sin(th) * std::cos(0.4), std::sin(th) * std::sin(0.4));
    EXPECT_NEAR(magnetostatic_density(m, s, n, b), std::pow(std::sin(th), 2) / (4 * kPi), 1e-5);
  }
}

TEST(Magnetostatic, GradientAndFrameFlip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Mat2 m;
  m << 0.3, 0.05, 0.05, 0.1;
  for (int k = 0; k < 50; ++k) {
    const Vec3 t = Vec3(g(rng), g(rng), g(rng)).normalized();
    const Vec3 n = t.cross(Vec3(g(rng), g(rng), g(rng))).normalized();
    const Vec3 b = t.cross(n);
    const Vec3 s = Vec3(g(rng), g(rng), g(rng)).normalized();
    EXPECT_EQ(magnetostatic_density(m, s, n, b), magnetostatic_density(m, s, Vec3(-n), Vec3(-b)));
    EXPECT_GE(magnetostatic_density(m, s, n, b), 0.0);
    const Vec3 grad = magnetostatic_gradient(m, s, n, b);
    for (int c = 0; c < 3; ++c) {
      const Vec3 e = Vec3::Unit(c) * 1e-6;
      const double fd = (magnetostatic_density(m, s + e, n, b) - magnetostatic_density(m, s - e, n, b)) / 2e-6;
      EXPECT_NEAR(grad[c], fd, 1e-8);
    }
  }
}
