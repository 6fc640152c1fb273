#include "tetdisp/materials.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tetdisp;

TEST(Materials, AcousticCoefficients) {
  const MaterialModel a = acoustic(1.0, 1.0);
  EXPECT_EQ(a.m(), 1);
  EXPECT_DOUBLE_EQ(a.rho(), 1.0);
  EXPECT_DOUBLE_EQ(a.c(), 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(a.C(i, 0, 0, j), i == j ? 1.0 : 0.0);
  const MaterialModel b = acoustic(2.0, 1.0);
  EXPECT_DOUBLE_EQ(b.rho(), 0.5);
  EXPECT_DOUBLE_EQ(b.C(1, 0, 0, 1), 0.5);
  const MaterialModel c = acoustic(1.0, 2.0);
  EXPECT_DOUBLE_EQ(c.c(), 2.0);
  EXPECT_DOUBLE_EQ(c.rho(), 0.25);
  EXPECT_DOUBLE_EQ(c.wave_speed(), 2.0);
  EXPECT_THROW(acoustic(0.0, 1.0), std::invalid_argument);
}

TEST(Materials, ElasticSpeeds) {
  EXPECT_NEAR(elastic(1, 2, 1).c_p() / elastic(1, 2, 1).c_s(), 2.0, 1e-15);
  EXPECT_NEAR(elastic(1, 98, 1).c_p() / elastic(1, 98, 1).c_s(), 10.0, 1e-14);
  EXPECT_NEAR(elastic(1, 0, 1).c_p() / elastic(1, 0, 1).c_s(), std::sqrt(2.0), 1e-15);
  const MaterialModel e = elastic(2.0, 3.0, 1.5);
  EXPECT_NEAR(e.c_p(), std::sqrt((3.0 + 3.0) / 2.0), 1e-15);
  EXPECT_NEAR(e.c_s(), std::sqrt(1.5 / 2.0), 1e-15);
  EXPECT_DOUBLE_EQ(e.wave_speed(), e.c_s());
  EXPECT_THROW(elastic(1, 2, 0), std::invalid_argument);
}

TEST(Materials, ElasticTensorEntries) {
  const double lam = 2.0, mu = 1.0;
  const MaterialModel e = elastic(1.0, lam, mu);
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int q = 0; q < 3; ++q)
        for (int p = 0; p < 3; ++p)
          EXPECT_DOUBLE_EQ(e.C(i, j, q, p), lam * d(i, j) * d(p, q) + mu * (d(i, p) * d(j, q) + d(i, q) * d(j, p)));
}

TEST(Materials, EnergyIsSymmetric) {
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  for (const MaterialModel& mat : {acoustic(1.3, 0.7), elastic(1.0, 2.0, 1.0)}) {
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXd G(3, mat.m()), H(3, mat.m());
      for (int i = 0; i < G.size(); ++i) {
        G.data()[i] = n(rng);
        H.data()[i] = n(rng);
      }
      EXPECT_NEAR(mat.energy(G, H), mat.energy(H, G), 1e-13);
      EXPECT_GE(mat.energy(G, G), -1e-13);
      EXPECT_NEAR(mat.energy(G, H), (G.array() * mat.contract(H).array()).sum(), 1e-13);
    }
  }
}

TEST(Materials, NormalTensorAndTraction) {
  const MaterialModel e = elastic(1.0, 2.0, 1.0);
  const Vec3 n = Vec3(1, 2, 2).normalized();
  const Eigen::MatrixXd cn = e.normal_tensor(n);
  // (lambda + mu) n n^T + mu I
  const Eigen::MatrixXd expect = 3.0 * n * n.transpose() + Eigen::Matrix3d::Identity();
  EXPECT_LT((cn - expect).norm(), 1e-14);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, 3);
  G(0, 0) = 1.0;  // d_x u_x
  const Eigen::VectorXd t = e.traction(n, G);
  // sigma = lambda tr(eps) I + 2 mu eps with eps = e_x e_x^T
  const Vec3 sigma_n = 2.0 * n + 2.0 * Vec3(n.x(), 0, 0);
  EXPECT_LT((t - sigma_n).norm(), 1e-14);
}

TEST(Materials, SecondaryPair) {
  auto check = [](const Vec3& k) {
    const auto [a1, a2] = secondary_amplitude_pair(k);
    EXPECT_NEAR(a1.dot(k), 0.0, 1e-14 * k.norm());
    EXPECT_NEAR(a2.dot(k), 0.0, 1e-14 * k.norm());
    EXPECT_NEAR(a1.dot(a2), 0.0, 1e-14);
    EXPECT_NEAR(a1.norm(), 1.0, 1e-14);
    EXPECT_NEAR(a2.norm(), 1.0, 1e-14);
  };
  check(Vec3(1, 0, 0));
  check(Vec3(0.3, -2.0, 0.7));
  check(Vec3(0, 0, 5));
  const auto [a1, a2] = secondary_amplitude_pair(Vec3(1, 0, 0));
  EXPECT_NEAR(std::abs(a1.x()), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a2.x()), 0.0, 1e-15);
  // Same span for kappa and 2 kappa.
  const Vec3 k(0.2, 0.5, -0.1);
  const auto [b1, b2] = secondary_amplitude_pair(k);
  const auto [c1, c2] = secondary_amplitude_pair(2.0 * k);
  const Vec3 nb = b1.cross(b2), nc = c1.cross(c2);
  EXPECT_NEAR(std::abs(nb.dot(nc)), 1.0, 1e-14);
  EXPECT_THROW(secondary_amplitude_pair(Vec3::Zero()), std::invalid_argument);
}
