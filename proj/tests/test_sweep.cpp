#include "tetdisp/study.hpp"
#include "tetdisp/sweep.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace tetdisp;

TEST(Fibonacci, UnitAndBalanced) {
  const auto pts = fibonacci_sphere(200);
  ASSERT_EQ(pts.size(), 200u);
  Vec3 sum = Vec3::Zero();
  int upper = 0;
  for (const Vec3& p : pts) {
    EXPECT_NEAR(p.norm(), 1.0, 1e-14);
    sum += p;
    if (p.z() > 0) ++upper;
  }
  EXPECT_LT(sum.norm() / 200.0, 0.01);
  EXPECT_EQ(upper, 100);
  EXPECT_THROW(fibonacci_sphere(0), std::invalid_argument);
}

TEST(ElementsPerWavelength, ReferenceValues) {
  EXPECT_NEAR(elements_per_wavelength(build_disphenoid_cell(), 1.0), 1.983, 5e-4);
  EXPECT_NEAR(elements_per_wavelength(build_sliced_cube_cell(LatticeTransform{}), 1.0), 1.817, 5e-4);
  const UnitCellMesh mesh = build_disphenoid_cell();
  EXPECT_NEAR(elements_per_wavelength(mesh, wavelength_for_NE(mesh, 13.7)), 13.7, 1e-12);
  EXPECT_THROW(elements_per_wavelength(mesh, 0.0), std::invalid_argument);
  EXPECT_THROW(wavelength_for_NE(mesh, -1.0), std::invalid_argument);
}

TEST(CostModel, Ml1Counts) {
  const Discretization d = discretize(parse_method("ML1"), build_disphenoid_cell(), acoustic(1, 1));
  TimeScheme s = make_scheme(1, 16.0);  // dt = 0.5
  const double lambda = 3.0;
  const CostModel c = cost_model(d, lambda, s);
  const double cubes = 27.0 / d.mesh.cell_volume;
  EXPECT_NEAR(c.n_vec, cubes, 1e-12);
  EXPECT_NEAR(c.n_mat, 15.0 * cubes, 1e-10);
  EXPECT_NEAR(c.N_dt, 6.0, 1e-12);
  EXPECT_NEAR(c.n_comp, c.n_mat * 6.0, 1e-9);
  s = make_scheme(1, 64.0);
  EXPECT_NEAR(cost_model(d, lambda, s).N_dt, 12.0, 1e-12);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<std::pair<double, double>> samples;
  for (double n : {4.0, 6.0, 8.0, 12.0, 16.0, 24.0}) samples.emplace_back(n, 2.0 * std::pow(n, -4.0));
  const ConvergenceFit f = fit_convergence(samples, 4.0);
  EXPECT_NEAR(f.alpha, 2.0, 1e-10);
  EXPECT_NEAR(f.beta, 4.0, 1e-10);
  EXPECT_NEAR(f.alpha_at_order, 2.0, 1e-10);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_FALSE(f.non_monotone);
  EXPECT_EQ(f.samples, 3);
  EXPECT_DOUBLE_EQ(f.ne_min, 12.0);
  EXPECT_DOUBLE_EQ(f.ne_max, 24.0);
  EXPECT_NEAR(required_NE(f, 2.0 / 10000.0), 10.0, 1e-9);
  EXPECT_NEAR(required_NE(f, 2.0 / 10000.0, true), 10.0, 1e-9);
}

TEST(Fit, OrderConstantUsesMeanLogs) {
  // e = 3 N^-2 (1 + 1/N): the constant at order 2 tends to 3 from above.
  std::vector<std::pair<double, double>> samples;
  for (double n : {10.0, 20.0, 40.0}) samples.emplace_back(n, 3.0 * std::pow(n, -2.0) * (1.0 + 1.0 / n));
  const ConvergenceFit f = fit_convergence(samples, 2.0);
  double ml = 0;
  for (const auto& [n, e] : samples) ml += std::log(e * n * n);
  EXPECT_NEAR(f.alpha_at_order, std::exp(ml / 3.0), 1e-12);
  EXPECT_GT(f.beta, 2.0);
  EXPECT_EQ(fit_convergence(samples).alpha_at_order, 0.0);
}

TEST(Fit, DegenerateInputs) {
  EXPECT_THROW(fit_convergence({{1, 1}, {2, 0.5}}), std::invalid_argument);
  const ConvergenceFit z = fit_convergence({{4, 0}, {8, 0}, {16, 0}});
  EXPECT_TRUE(z.exact_zero);
  EXPECT_THROW(required_NE(z, 0.01), std::invalid_argument);
  const ConvergenceFit bump = fit_convergence({{4, 1e-2}, {8, 2e-2}, {16, 1e-3}, {32, 1e-4}});
  EXPECT_TRUE(bump.non_monotone);
  EXPECT_THROW(required_NE(bump, 0.0), std::invalid_argument);
}

TEST(WorstCase, DominatesCoordinateDirections) {
  const Discretization d = discretize(parse_method("DG1a"), build_disphenoid_cell(), acoustic(1, 1));
  const TimeScheme s = make_scheme(1, spectral_radius_max(d.ops, {9, 1e-6, 2, true}).s_max);
  const double lambda = wavelength_for_NE(d.mesh, 8.0);
  DirectionSearchOptions o;
  o.directions = 60;
  o.restarts = 2;
  const WorstCase wc = worst_case_over_directions(d, lambda, s, o);
  for (const Vec3& e : {Vec3::UnitX().eval(), Vec3::UnitY().eval(), Vec3::UnitZ().eval(),
                        Vec3(1, 1, 1).normalized().eval()}) {
    const KappaErrors k = kappa_errors(d, 2 * std::numbers::pi / lambda * e, s);
    // The refinement stops at relative accuracy o.tol.
    EXPECT_GE(wc.e_disp, k.e_disp * (1 - o.tol));
    EXPECT_GE(wc.e_vec, k.e_vec * (1 - o.tol));
  }
  EXPECT_NEAR(kappa_errors(d, 2 * std::numbers::pi / lambda * wc.dir_disp, s).e_disp, wc.e_disp, 1e-12);
  EXPECT_NEAR(wc.dir_disp.norm(), 1.0, 1e-12);
  EXPECT_GT(wc.evaluations, 30);

  // Serial and parallel searches give identical results.
  DirectionSearchOptions serial = o;
  serial.parallel = false;
  const WorstCase ws = worst_case_over_directions(d, lambda, s, serial);
  EXPECT_EQ(ws.e_disp, wc.e_disp);
  EXPECT_EQ(ws.e_vec, wc.e_vec);

  // Seeds are honoured.
  const WorstCase seeded = worst_case_over_directions(d, lambda, s, {.directions = 4, .restarts = 0}, {wc.dir_disp});
  EXPECT_GE(seeded.e_disp, wc.e_disp * (1 - 1e-12));
}

TEST(WorstCase, ResolutionLimit) {
  const Discretization d = discretize(parse_method("ML1"), build_disphenoid_cell(), acoustic(1, 1));
  const TimeScheme s = make_scheme(1, 10.0);
  const double lim = resolution_limit(d.ops, d.mesh, 1);
  EXPECT_NEAR(lim, 2.0 * std::cbrt(d.mesh.cell_volume), 1e-14);
  EXPECT_THROW(worst_case_over_directions(d, 0.9 * lim, s), ResolutionError);
  EXPECT_THROW(worst_case_over_directions(d, -1.0, s), std::invalid_argument);
}
