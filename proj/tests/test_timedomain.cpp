#include "oracles.hpp"

#include "tetdisp/timedomain.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace tetdisp;

namespace {

Discretization make(const std::string& m, const MaterialModel& mat = acoustic(1, 1)) {
  return discretize(parse_method(m), build_disphenoid_cell(), mat);
}

Eigen::VectorXcd random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
  return v;
}

}  // namespace

TEST(LatticeOperators, MatchDenseBlocks) {
  for (const std::string name : {"ML2", "DG1b"}) {
    const Discretization d = make(name, elastic(1, 2, 1));
    for (int N : {2, 3}) {
      const oracle::GlobalSystem g = oracle::dense_from_blocks(d.ops, N);
      const Eigen::VectorXcd u = random_vector(g.A.rows(), 3);
      const Eigen::VectorXcd Au = g.A.cast<cplx>() * u;
      EXPECT_LE((lattice_apply_stiffness(d.ops, N, u) - Au).norm(), 1e-12 * Au.norm()) << name << N;
      const Eigen::VectorXcd Mi = g.M.cast<cplx>().partialPivLu().solve(u);
      EXPECT_LE((lattice_apply_mass_inverse(d.ops, N, u) - Mi).norm(), 1e-12 * Mi.norm());
      const cplx ip = lattice_mass_inner(d.ops, N, u, Au);
      EXPECT_LE(std::abs(ip - u.dot(g.M.cast<cplx>() * Au)), 1e-12 * std::abs(ip));
    }
  }
  const Discretization d = make("ML1");
  EXPECT_THROW(lattice_apply_stiffness(d.ops, 2, Eigen::VectorXcd::Zero(7)), std::invalid_argument);
}

TEST(LatticeOperators, DenseBlocksAgreeWithOracle) {
  // The block-built N = 2 matrix and the independent global assembly have the same spectrum.
  const Discretization d = make("DG1a");
  const oracle::GlobalSystem a = oracle::dense_from_blocks(d.ops, 2);
  const oracle::GlobalSystem b = oracle::assemble_global(d, 2);
  EXPECT_LE(oracle::spectrum_mismatch(oracle::generalized_eigenvalues(a.A, a.M),
                                      oracle::generalized_eigenvalues(b.A, b.M)),
            1e-9);
}

TEST(Stepping, MatchesDenseRecurrence) {
  for (int K : {1, 2, 3}) {
    const Discretization d = make(K == 1 ? "DG1a" : (K == 2 ? "ML2" : "ML3b"));
    const int N = 2;
    const oracle::GlobalSystem g = oracle::dense_from_blocks(d.ops, N);
    const Eigen::MatrixXd B = g.M.partialPivLu().solve(g.A);
    const double dt = 0.5 * stable_dt(lattice_spectral_radius(d.ops, N), K);
    const Eigen::Index n = g.A.rows();
    // P = sum_k (-dt^2 B)^k / (2k)!
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n), term = P;
    for (int k = 1; k <= K; ++k) {
      term = (-dt * dt / ((2.0 * k - 1) * (2.0 * k))) * (B * term);
      P += term;
    }
    LatticeState st;
    st.N = N;
    st.n0 = d.ops.n0;
    st.dt = dt;
    st.prev = random_vector(n, 5);
    st.cur = random_vector(n, 6);
    Eigen::VectorXcd prev = st.prev, cur = st.cur;
    for (int s = 0; s < 20; ++s) {
      lw_step(st, d.ops, K);
      const Eigen::VectorXcd next = -prev + 2.0 * (P.cast<cplx>() * cur);
      prev = cur;
      cur = next;
    }
    EXPECT_LE((st.cur - cur).norm(), 1e-12 * cur.norm()) << K;
    EXPECT_LE((st.prev - prev).norm(), 1e-12 * prev.norm()) << K;
    EXPECT_EQ(st.step, 20);
  }
}

TEST(Stepping, LeapFrogIsK1) {
  // K = 1 is the leap-frog scheme U+ = 2U - U- - dt^2 M^{-1} A U.
  const Discretization d = make("ML1");
  const int N = 3;
  LatticeState st{N, 1, 0.3, 0, random_vector(27, 1), random_vector(27, 2)};
  const Eigen::VectorXcd u = st.cur, um = st.prev;
  lw_step(st, d.ops, 1);
  const Eigen::VectorXcd ref =
      2.0 * u - um - 0.09 * lattice_apply_mass_inverse(d.ops, N, lattice_apply_stiffness(d.ops, N, u));
  EXPECT_LE((st.cur - ref).norm(), 1e-13 * ref.norm());
}

TEST(Stepping, TimeReversal) {
  for (const std::string name : {"ML1", "DG2a", "ML3a"}) {
    const Discretization d = make(name);
    const int K = d.method.stages();
    const TimeScheme s = make_scheme(K, lattice_spectral_radius(d.ops, 3));
    const LatticeMode m = lattice_mode(d.ops, 3, {1, 0, 0}, 0);
    LatticeState st = initialize_plane_wave(d.ops, 3, m, s);
    EXPECT_LE(reversal_error(d.ops, st, K, 200), 1e-10) << name;
  }
}

TEST(Phase, RecoversFrequency) {
  const double dt = 0.1, w = 2.7;
  std::vector<cplx> y;
  for (int n = 0; n < 60; ++n) y.push_back(0.3 * std::exp(cplx(0, w * n * dt)) + 0.7 * std::exp(cplx(0, -w * n * dt)));
  EXPECT_NEAR(measure_phase(y, dt), w, 1e-12);
  std::vector<cplx> real_cos;
  for (int n = 0; n < 60; ++n) real_cos.push_back(std::cos(w * n * dt + 0.4));
  EXPECT_NEAR(measure_phase(real_cos, dt), w, 1e-12);
  // Fewer than four steps per period.
  std::vector<cplx> fast;
  for (int n = 0; n < 60; ++n) fast.push_back(std::cos(2.0 * n));
  EXPECT_THROW(measure_phase(fast, 1.0), ResolutionError);
  // Less than one full period.
  std::vector<cplx> slow;
  for (int n = 0; n < 10; ++n) slow.push_back(std::cos(0.1 * n));
  EXPECT_THROW(measure_phase(slow, 1.0), ResolutionError);
  EXPECT_THROW(measure_phase({1.0, 1.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(measure_phase({0.0, 0.0, 0.0}, 1.0), NumericalError);
}

TEST(Verify, PredictedFrequencyMatches) {
  for (const std::string name : {"ML1", "DG1b", "ML2"}) {
    const Discretization d = make(name);
    const int K = d.method.stages();
    const TimeScheme s = make_scheme(K, spectral_radius_max(d.ops, {9, 1e-8, 2, true}).s_max);
    const VerifyResult r = verify_mode(d.ops, 4, {1, 0, 0}, 0, s, 400);
    EXPECT_LE(r.rel_err, 1e-8) << name;
    EXPECT_TRUE(r.stable);
  }
  const Discretization e = make("DG1a", elastic(1, 2, 1));
  const TimeScheme s = make_scheme(1, spectral_radius_max(e.ops, {9, 1e-8, 2, true}).s_max);
  EXPECT_LE(verify_mode(e.ops, 3, {0, 1, 2}, 1, s, 400).rel_err, 1e-8);
  EXPECT_THROW(verify_mode(e.ops, 3, {3, 0, 0}, 0, s, 10), std::invalid_argument);
}

TEST(Verify, StabilityThreshold) {
  for (const std::string name : {"ML1", "DG2b"}) {
    const Discretization d = make(name);
    const int K = d.method.stages();
    EXPECT_TRUE(stability_probe(d.ops, 3, K, 0.999, 2000).stable) << name;
    const VerifyResult bad = stability_probe(d.ops, 3, K, 1.001, 2000);
    EXPECT_FALSE(bad.stable) << name;
    EXPECT_GT(bad.max_amplitude, 10.0) << name;
  }
}
