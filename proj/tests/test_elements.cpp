#include "tetdisp/elements.hpp"
#include "tetdisp/polynomial.hpp"
#include "tetdisp/quadrature.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tetdisp;

TEST(Quadrature, CentroidRule) {
  const auto q = simplex_quadrature(3, 0);
  double w = 0.0;
  for (double x : q.weights) w += x;
  EXPECT_NEAR(w, kRefTetVolume, 1e-15);
  if (q.size() == 1) {
    EXPECT_NEAR(q.points[0].x(), 0.25, 1e-14);
    EXPECT_NEAR(q.points[0].y(), 0.25, 1e-14);
  }
}

TEST(Quadrature, TetExactnessAgainstClosedForm) {
  for (int deg : {0, 1, 2, 4, 6, 9, 12, 20}) {
    const auto q = simplex_quadrature(3, deg);
    for (const double w : q.weights) EXPECT_GT(w, 0.0);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        for (int c = 0; a + b + c <= deg; ++c) {
          double s = 0.0;
          for (size_t k = 0; k < q.size(); ++k)
            s += q.weights[k] * std::pow(q.points[k].x(), a) * std::pow(q.points[k].y(), b) *
                 std::pow(q.points[k].z(), c);
          EXPECT_NEAR(s, tet_monomial_integral(a, b, c), 1e-14) << deg << ' ' << a << b << c;
        }
  }
  EXPECT_NEAR(tet_monomial_integral(2, 2, 2), 8.0 / 362880.0, 1e-18);
}

TEST(Quadrature, TriangleExactness) {
  const auto q = simplex_quadrature(2, 6);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b) {
      double s = 0.0;
      for (size_t k = 0; k < q.size(); ++k) s += q.weights[k] * std::pow(q.points[k].x(), a) * std::pow(q.points[k].y(), b);
      EXPECT_NEAR(s, triangle_monomial_integral(a, b), 1e-15);
    }
}

TEST(Quadrature, DegreeLimit) {
  EXPECT_THROW(simplex_quadrature(3, kMaxQuadratureDegree + 1), std::invalid_argument);
  EXPECT_EQ(&cached_simplex_quadrature(3, 5), &cached_simplex_quadrature(3, 5));
}

TEST(Polynomial, ArithmeticAndDerivatives) {
  const Polynomial x = Polynomial::monomial(1, 0, 0), y = Polynomial::monomial(0, 1, 0);
  const Polynomial p = (x * x * y + Polynomial::constant(2.0)) * 3.0 - y;
  const Vec3 pt(0.3, 0.2, 0.1);
  EXPECT_NEAR(p(pt), 3 * (0.09 * 0.2 + 2) - 0.2, 1e-15);
  EXPECT_NEAR(p.derivative(0)(pt), 6 * 0.3 * 0.2, 1e-15);
  EXPECT_NEAR(p.derivative(1)(pt), 3 * 0.09 - 1, 1e-15);
  EXPECT_EQ(p.degree(), 3);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += Polynomial::barycentric(i)(pt);
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_EQ(num_monomials(3), 20);
}

class RuleTest : public ::testing::TestWithParam<LumpedRuleName> {};

TEST_P(RuleTest, Invariants) {
  const MassLumpedRule r = mass_lumped_rule(GetParam());
  ASSERT_EQ(static_cast<int>(r.nodes.size()), r.enriched_dim);
  double sum = 0.0;
  for (double w : r.weights) {
    EXPECT_GT(w, 0.0);
    sum += w;
  }
  EXPECT_NEAR(sum, kRefTetVolume, 1e-12);
  const int d = r.exactness_degree;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; a + b <= d; ++b)
      for (int c = 0; a + b + c <= d; ++c) {
        double s = 0.0;
        for (size_t k = 0; k < r.nodes.size(); ++k) {
          const Vec3 x = MassLumpedRule::to_reference(r.nodes[k]);
          s += r.weights[k] * std::pow(x.x(), a) * std::pow(x.y(), b) * std::pow(x.z(), c);
        }
        EXPECT_NEAR(s, tet_monomial_integral(a, b, c), 1e-12);
      }
  for (const auto& n : r.nodes) {
    EXPECT_NEAR(n.sum(), 1.0, 1e-14);
    EXPECT_GE(n.minCoeff(), 0.0);
  }
}

TEST_P(RuleTest, NodalBasisIsCardinalAndPartitionOfUnity) {
  const MassLumpedRule r = mass_lumped_rule(GetParam());
  const ElementBasis b = nodal_basis_from_rule(r);
  ASSERT_EQ(b.dim, static_cast<int>(r.nodes.size()));
  for (size_t k = 0; k < r.nodes.size(); ++k) {
    const Eigen::VectorXd v = b.values(MassLumpedRule::to_reference(r.nodes[k]));
    for (int i = 0; i < b.dim; ++i) EXPECT_NEAR(v[i], i == static_cast<int>(k) ? 1.0 : 0.0, 1e-10);
  }
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Eigen::Vector4d l(u(rng), u(rng), u(rng), u(rng));
    l /= l.sum();
    const Vec3 x = l.tail<3>();
    EXPECT_NEAR(b.values(x).sum(), 1.0, 1e-10);
    // Gradients against central differences.
    const Eigen::MatrixXd g = b.gradients(x);
    const double h = 1e-6;
    for (int c = 0; c < 3; ++c) {
      Vec3 xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      const Eigen::VectorXd fd = (b.values(xp) - b.values(xm)) / (2 * h);
      EXPECT_LT((fd - g.col(c)).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, g.cwiseAbs().maxCoeff()));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllRules, RuleTest,
                         ::testing::Values(LumpedRuleName::ML1, LumpedRuleName::ML2, LumpedRuleName::ML3a,
                                           LumpedRuleName::ML3b),
                         [](const auto& info) { return to_string(info.param); });

TEST(Rules, KnownSizes) {
  const auto ml1 = mass_lumped_rule(LumpedRuleName::ML1);
  EXPECT_EQ(ml1.nodes.size(), 4u);
  for (double w : ml1.weights) EXPECT_NEAR(w, kRefTetVolume / 4.0, 1e-15);
  EXPECT_EQ(mass_lumped_rule(LumpedRuleName::ML2).nodes.size(), 23u);
  const auto a = mass_lumped_rule(LumpedRuleName::ML3a), b = mass_lumped_rule(LumpedRuleName::ML3b);
  EXPECT_EQ(a.nodes.size(), b.nodes.size());
  EXPECT_EQ(a.nodes.size(), 50u);
  double diff = 0.0;
  for (size_t i = 0; i < a.weights.size(); ++i) diff += std::abs(a.weights[i] - b.weights[i]);
  EXPECT_GT(diff, 1e-6);
}

TEST(Rules, ML1BasisIsBarycentric) {
  const ElementBasis b = nodal_basis_from_rule(mass_lumped_rule(LumpedRuleName::ML1));
  const Vec3 x(0.1, 0.2, 0.3);
  const Eigen::VectorXd v = b.values(x);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(v[i], Polynomial::barycentric(i)(x), 1e-14);
}

TEST(Rules, ParseRejectsBadTables) {
  EXPECT_THROW(parse_rule_table("name ML1\n"), std::invalid_argument);
  EXPECT_THROW(parse_rule_name("ML4"), std::invalid_argument);
}

TEST(DgBasis, DimensionsAndGram) {
  const int dims[] = {4, 10, 20};
  for (int p = 1; p <= 3; ++p)
    for (DgBasisKind kind : {DgBasisKind::orthonormal, DgBasisKind::monomial}) {
      const ElementBasis b = dg_basis(p, kind);
      EXPECT_EQ(b.dim, dims[p - 1]);
      const Eigen::MatrixXd G = reference_gram(b);
      EXPECT_LT((G - G.transpose()).norm(), 1e-14);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
      EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
      EXPECT_TRUE(std::isfinite(b.gram_condition));
      if (kind == DgBasisKind::orthonormal) EXPECT_LT((G - Eigen::MatrixXd::Identity(b.dim, b.dim)).cwiseAbs().maxCoeff(), 1e-12);
    }
  EXPECT_THROW(dg_basis(4), std::invalid_argument);
}
