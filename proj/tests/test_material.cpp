#include <cosserat_dem/material.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cosserat_dem;

namespace {

// (xx, xy, yx, yy) row-major flattening of a 2x2 tensor
Eigen::Vector4d flat(double xx, double xy, double yx, double yy) { return {xx, xy, yx, yy}; }

CosseratMaterial2D patch_material() { return {1000.0, 0.25, 0.5, 0.1, 1.0, 1.0}; }

/// Independent evaluation of the 3D law, one component at a time.
Eigen::Matrix3d three_term_law(double K, double G, double Gc, const Eigen::Matrix3d& e) {
  Eigen::Matrix3d s;
  const double tr = e(0, 0) + e(1, 1) + e(2, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double sym = 0.5 * (e(i, j) + e(j, i));
      const double skw = 0.5 * (e(i, j) - e(j, i));
      const double delta = i == j ? 1.0 : 0.0;
      s(i, j) = K * tr * delta + 2.0 * G * (sym - tr / 3.0 * delta) + 2.0 * Gc * skw;
    }
  return s;
}

}  // namespace

TEST(Strain, AffineDisplacementWithRotation) {
  const double G = 1000.0;
  Mat grad(2, 2);
  grad << 1.0 / G, 0.5 / G, 1.0 / G, 1.0 / G;
  Vec phi(1);
  phi << 1.0 / (4.0 * G);
  const Mat e = cosserat_strain(2, grad, phi);
  EXPECT_NEAR(e(0, 0), 1.0 / G, 1e-18);
  EXPECT_NEAR(e(0, 1), 0.75 / G, 1e-18);
  EXPECT_NEAR(e(1, 0), 0.75 / G, 1e-18);
  EXPECT_NEAR(e(1, 1), 1.0 / G, 1e-18);
}

TEST(Strain, ZeroAndPureRotation) {
  EXPECT_EQ(cosserat_strain(2, Mat::Zero(2, 2), Vec::Zero(1)).norm(), 0.0);
  const Mat e = cosserat_strain(2, Mat::Zero(2, 2), Vec::Ones(1));
  EXPECT_EQ(e(0, 1), 1.0);
  EXPECT_EQ(e(1, 0), -1.0);
  EXPECT_EQ(e(0, 0), 0.0);
  EXPECT_EQ(e(1, 1), 0.0);
}

TEST(Strain, ThreeDimensionalPermutation) {
  Vec w(3);
  w << 0.1, -0.2, 0.3;
  const Mat e = cosserat_strain(3, Mat::Zero(3, 3), w);
  // (eps.w)_ij = eps_ijk w_k
  EXPECT_NEAR(e(0, 1), 0.3, 1e-15);
  EXPECT_NEAR(e(1, 0), -0.3, 1e-15);
  EXPECT_NEAR(e(1, 2), 0.1, 1e-15);
  EXPECT_NEAR(e(2, 0), -0.2, 1e-15);
  EXPECT_NEAR((e + e.transpose()).norm(), 0.0, 1e-15);
}

TEST(Law2D, FirstPatchStress) {
  const double G = 1000.0;
  const Eigen::Vector4d s = stress_2d(patch_material(), flat(1.0, 0.75, 0.75, 1.0) / G);
  EXPECT_NEAR(s[0], 4.0, 1e-12);
  EXPECT_NEAR(s[3], 4.0, 1e-12);
  EXPECT_NEAR(s[1], 1.5, 1e-12);
  EXPECT_NEAR(s[2], 1.5, 1e-12);
}

TEST(Law2D, SecondPatchStress) {
  const double G = 1000.0;
  const Eigen::Vector4d s = stress_2d(patch_material(), flat(1.0, 0.25, 1.25, 1.0) / G);
  EXPECT_NEAR(s[1], 1.0, 1e-12);
  EXPECT_NEAR(s[2], 2.0, 1e-12);
  EXPECT_NEAR(s[0], 4.0, 1e-12);
}

TEST(Law2D, ZeroStrain) { EXPECT_EQ(stress_2d(patch_material(), Eigen::Vector4d::Zero()).norm(), 0.0); }

TEST(Law2D, CoupleStress) {
  const double G = 1000.0;
  const Eigen::Vector2d mu = couple_2d(patch_material(), Eigen::Vector2d(-1.0, 1.0) / G);
  EXPECT_NEAR(mu[0], -0.04, 1e-15);
  EXPECT_NEAR(mu[1], 0.04, 1e-15);
  EXPECT_EQ(couple_2d(patch_material(), Eigen::Vector2d::Zero()).norm(), 0.0);
  const Eigen::Vector2d k(0.3, -0.7);
  EXPECT_NEAR((couple_2d(patch_material(), 2.0 * k) - 2.0 * couple_2d(patch_material(), k)).norm(), 0.0, 1e-15);
}

TEST(Law2D, IncompressibleRejected) {
  CosseratMaterial2D m = patch_material();
  m.nu = 0.5;
  EXPECT_THROW(Material{m}, Error);
  m.nu = 0.25;
  m.G = 0.0;
  EXPECT_THROW(Material{m}, Error);
  m.G = 1.0;
  m.a = -1.0;
  EXPECT_THROW(Material{m}, Error);
}

TEST(Law2D, ZeroCouplingKeepsStressSymmetric) {
  CosseratMaterial2D m = patch_material();
  m.a = 0.0;
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector4d s = stress_2d(m, flat(U(gen), U(gen), U(gen), U(gen)));
    EXPECT_NEAR(s[1], s[2], 1e-12);
  }
}

TEST(Law2D, SkewPartScalesWithCoupling) {
  CosseratMaterial2D m = patch_material();
  const Eigen::Vector4d e = flat(0.2, 0.3, -0.5, 0.1);
  const Eigen::Vector4d s = stress_2d(m, e);
  EXPECT_NEAR(s[1] - s[2], 2.0 * m.a * m.G * (e[1] - e[2]), 1e-12);
  EXPECT_GT(std::abs(s[1] - s[2]), 0.0);
}

TEST(Law3D, IdentityStrain) {
  const CosseratMaterial3D m{16.67e9, 1e10, 5e9, 1.0, 2.0, 3.0, 2500.0, 1e-10};
  const Eigen::Matrix3d s = stress_3d(m, Eigen::Matrix3d::Identity());
  EXPECT_NEAR((s - 3.0 * m.K * Eigen::Matrix3d::Identity()).norm(), 0.0, 1e-3);
}

TEST(Law3D, SkewStrain) {
  const CosseratMaterial3D m{16.67e9, 1e10, 5e9, 1.0, 2.0, 3.0, 2500.0, 1e-10};
  Vec w(3);
  w << 1e-3, 2e-3, -3e-3;
  const Eigen::Matrix3d e = cosserat_strain(3, Mat::Zero(3, 3), w);
  EXPECT_NEAR((stress_3d(m, e) - 2.0 * m.Gc * e).norm(), 0.0, 1e-3);
}

TEST(Law3D, RandomStrainMatchesComponentwiseOracle) {
  const CosseratMaterial3D m{3.0, 1.2, 0.7, 0.5, 0.4, 0.3, 1.0, 1.0};
  const Material mat(m);
  std::mt19937 gen(9);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 50; ++k) {
    Eigen::Matrix3d e;
    for (int i = 0; i < 9; ++i) e.data()[i] = U(gen);
    const Eigen::Matrix3d oracle = three_term_law(m.K, m.G, m.Gc, e);
    EXPECT_LT((stress_3d(m, e) - oracle).norm(), 1e-12 * oracle.norm());
    // dense 9x9 tensor against the same oracle, row-major flattening
    Eigen::Matrix<double, 9, 1> ef;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ef[i * 3 + j] = e(i, j);
    const Vec sf = mat.C() * ef;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(sf[i * 3 + j], oracle(i, j), 1e-12);
    const Eigen::Matrix3d mu_oracle = three_term_law(m.L, m.M, m.Mc, e);
    EXPECT_LT((couple_3d(m, e) - mu_oracle).norm(), 1e-12 * mu_oracle.norm());
    const Vec mf = mat.D() * ef;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(mf[i * 3 + j], mu_oracle(i, j), 1e-12);
  }
}

TEST(Law3D, InvalidModuliRejected) {
  EXPECT_THROW(Material(CosseratMaterial3D{0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0}), Error);
  EXPECT_THROW(Material(CosseratMaterial3D{1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 1.0, 1.0}), Error);
  EXPECT_THROW(Material(CosseratMaterial3D{1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0}), Error);
}

TEST(Law3D, LameConversion) {
  const auto m = CosseratMaterial3D::from_lame(3.76e9, 7.52e9, 7.52e9, 0, 0, 0, 2500, 1);
  EXPECT_NEAR(m.K, 3.76e9 + 2.0 * 7.52e9 / 3.0, 1.0);
}

TEST(Superposition, LawsAreLinear) {
  const Material m2(patch_material());
  const Material m3(CosseratMaterial3D{3.0, 1.2, 0.7, 0.5, 0.4, 0.3, 1.0, 1.0});
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const Material* m : {&m2, &m3}) {
    const Eigen::Index n = m->C().rows();
    Vec a(n), b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      a[i] = U(gen);
      b[i] = U(gen);
    }
    const Vec lhs = m->stress(2.0 * a - 3.0 * b);
    const Vec rhs = 2.0 * m->stress(a) - 3.0 * m->stress(b);
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * rhs.norm());
  }
}

TEST(Energy, NonNegativeOnRandomSamples) {
  const Material m2(patch_material());
  const Material m3(CosseratMaterial3D{3.0, 1.2, 0.0, 0.5, 0.4, 0.0, 1.0, 1.0});
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const Material* m : {&m2, &m3}) {
    const double scale = m->C().maxCoeff() + m->D().maxCoeff();
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      Vec e(m->C().rows()), kap(m->D().rows());
      for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = U(gen);
      for (Eigen::Index i = 0; i < kap.size(); ++i) kap[i] = U(gen);
      worst = std::min(worst, e.dot(m->C() * e) + kap.dot(m->D() * kap));
    }
    EXPECT_GE(worst, -1e-12 * scale);
  }
}

TEST(CharacteristicLength, TwoDimensionalLaw) {
  // enumerate the tensor entries independently and take the maximum
  for (double nu : {0.0, 0.25, 0.4}) {
    for (double a : {0.0, 0.5, 2.0, 5.0}) {
      const double G = 3.0, l0 = 0.2;
      const double A = 2.0 * (1.0 - nu) / (1.0 - 2.0 * nu), B = 2.0 * nu / (1.0 - 2.0 * nu);
      const double entries[] = {G * A, G * B, G * (1.0 + a), G * std::abs(1.0 - a)};
      double cmax = 0.0;
      for (double v : entries) cmax = std::max(cmax, v);
      if (a > 1.0) cmax = std::max(cmax, G * (1.0 + a));
      const Material m(CosseratMaterial2D{G, nu, a, l0, 1.0, 1.0});
      EXPECT_NEAR(characteristic_length(m), std::sqrt(4.0 * G * l0 * l0 / cmax), 1e-14);
    }
  }
  const Material m(CosseratMaterial2D{1.0, 0.25, 0.5, 0.1, 1.0, 1.0});
  EXPECT_NEAR(characteristic_length(m), 2.0 * 0.1 / std::sqrt(m.as_2d()->frak_a()), 1e-15);
}

TEST(CharacteristicLength, ScalingAndZero) {
  const Material m(CosseratMaterial3D{3.0, 1.2, 0.7, 0.5, 0.4, 0.3, 1.0, 1.0});
  EXPECT_NEAR(characteristic_length(m.C(), 4.0 * m.D()), 2.0 * characteristic_length(m), 1e-14);
  EXPECT_EQ(characteristic_length(m.C(), Mat::Zero(9, 9)), 0.0);
}
