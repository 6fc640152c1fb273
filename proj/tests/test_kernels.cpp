#include "tetdisp/kernels.hpp"
#include "tetdisp/nelder_mead.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace tetdisp;

TEST(IndexedMap, SerialEqualsParallel) {
  auto f = [](int i) { return std::sin(0.37 * i) * std::exp(-0.001 * i); };
  const auto a = indexed_map<double>(1000, f, ExecPolicy::serial);
  const auto b = indexed_map<double>(1000, f, ExecPolicy::parallel);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(indexed_map<int>(0, [](int i) { return i; }).empty());
}

TEST(IndexedMap, PropagatesExceptions) {
  auto f = [](int i) -> int {
    if (i == 17) throw std::domain_error("boom");
    return i;
  };
  EXPECT_THROW(indexed_map<int>(50, f, ExecPolicy::parallel), std::domain_error);
  EXPECT_THROW(indexed_map<int>(50, f, ExecPolicy::serial), std::domain_error);
}

TEST(Threads, Cap) {
  const int before = max_threads();
  set_num_threads(1);
  EXPECT_EQ(max_threads(), 1);
  set_num_threads(0);
  EXPECT_EQ(max_threads(), 1);
  set_num_threads(before);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](const Eigen::VectorXd& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
  NelderMeadOptions o;
  o.max_evals = 4000;
  o.ftol = 1e-14;
  o.xtol = 1e-10;
  const auto r = nelder_mead(f, Eigen::Vector2d(-1.2, 1.0), o);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
  EXPECT_LT(r.f, 1e-8);
  EXPECT_LE(r.evals, 4000);
}

TEST(NelderMead, RespectsBudget) {
  int calls = 0;
  auto f = [&](const Eigen::VectorXd& x) {
    ++calls;
    return x.squaredNorm();
  };
  NelderMeadOptions o;
  o.max_evals = 25;
  const auto r = nelder_mead(f, Eigen::Vector3d(1, 2, 3), o);
  EXPECT_LE(calls, 25);
  EXPECT_EQ(r.evals, calls);
  EXPECT_LT(r.f, 14.0);
}
