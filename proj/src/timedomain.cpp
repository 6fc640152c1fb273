#include "tetdisp/timedomain.hpp"

#include <cmath>
#include <numbers>

namespace tetdisp {

namespace {

int wrap(int i, int N) { return ((i % N) + N) % N; }

// Rotates the phase so the largest entry is real and positive; the real part
// of the resulting Bloch field then never vanishes.
Eigen::VectorXcd fix_phase(const Eigen::VectorXcd& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v * std::polar(1.0, -std::arg(v[k]));
}

void check_lattice(const LocalOperatorSet& ops, int N, const Eigen::VectorXcd& u) {
  if (N < 1) throw std::invalid_argument("lattice size must be positive");
  if (u.size() != static_cast<Eigen::Index>(N) * N * N * ops.n0)
    throw std::invalid_argument("lattice field has the wrong length");
}

}  // namespace

Eigen::VectorXcd lattice_apply_stiffness(const LocalOperatorSet& ops, int N, const Eigen::VectorXcd& u) {
  check_lattice(ops, N, u);
  const int n0 = ops.n0;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(u.size());
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        const int cell = (a * N + b) * N + c;
        for (int si = 0; si < kNumShifts; ++si) {
          const SparseMat& blk = ops.A[static_cast<size_t>(si)];
          if (blk.nonZeros() == 0) continue;
          const Shift s = shift_from_index(si);
          const int nb = (wrap(a + s[0], N) * N + wrap(b + s[1], N)) * N + wrap(c + s[2], N);
          y.segment(cell * n0, n0) += blk * u.segment(nb * n0, n0);
        }
      }
  return y;
}

Eigen::VectorXcd lattice_apply_mass_inverse(const LocalOperatorSet& ops, int N, const Eigen::VectorXcd& u) {
  check_lattice(ops, N, u);
  const int n0 = ops.n0;
  const int cells = N * N * N;
  Eigen::VectorXcd y(u.size());
  if (ops.mass_diagonal) {
    const Eigen::VectorXd inv = ops.M0.diagonal().cwiseInverse();
    for (int c = 0; c < cells; ++c) y.segment(c * n0, n0) = inv.asDiagonal() * u.segment(c * n0, n0);
    return y;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(ops.M0);
  Eigen::Map<const Eigen::MatrixXcd> U(u.data(), n0, cells);
  Eigen::Map<Eigen::MatrixXcd> Y(y.data(), n0, cells);
  Y.real() = llt.solve(Eigen::MatrixXd(U.real()));
  Y.imag() = llt.solve(Eigen::MatrixXd(U.imag()));
  return y;
}

cplx lattice_mass_inner(const LocalOperatorSet& ops, int N, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  check_lattice(ops, N, u);
  check_lattice(ops, N, v);
  const int n0 = ops.n0;
  cplx acc = 0.0;
  for (int c = 0; c < N * N * N; ++c) acc += u.segment(c * n0, n0).dot(ops.M0 * v.segment(c * n0, n0));
  return acc;
}

Eigen::VectorXcd lattice_apply_polynomial(const LocalOperatorSet& ops, int N, int K, double dt,
                                          const Eigen::VectorXcd& u) {
  if (K < 1) throw std::invalid_argument("stage count must be positive");
  // v = u/(2K)!, then v <- L v + u/(2k)! for k = K-1 .. 0 with L = -dt^2 M^{-1} A.
  auto fact2 = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= 2 * k; ++i) f *= i;
    return f;
  };
  Eigen::VectorXcd v = u / fact2(K);
  for (int k = K - 1; k >= 0; --k)
    v = (-dt * dt) * lattice_apply_mass_inverse(ops, N, lattice_apply_stiffness(ops, N, v)) + u / fact2(k);
  return v;
}

void lw_step(LatticeState& state, const LocalOperatorSet& ops, int K) {
  Eigen::VectorXcd next = 2.0 * lattice_apply_polynomial(ops, state.N, K, state.dt, state.cur) - state.prev;
  state.prev = std::move(state.cur);
  state.cur = std::move(next);
  ++state.step;
}

void reverse_time(LatticeState& state) {
  std::swap(state.prev, state.cur);
  state.step = -state.step;
}

Eigen::VectorXcd bloch_field(const LocalOperatorSet& ops, int N, const Vec3& kappa, const Eigen::VectorXcd& v) {
  if (v.size() != ops.n0) throw std::invalid_argument("cell vector has the wrong length");
  const int n0 = ops.n0;
  Eigen::VectorXcd u(static_cast<Eigen::Index>(N) * N * N * n0);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        const int cell = (a * N + b) * N + c;
        const cplx ph = std::polar(1.0, kappa.dot(ops.transform.T * Vec3(a, b, c)));
        u.segment(cell * n0, n0) = ph * v;
      }
  return u;
}

LatticeMode lattice_mode(const LocalOperatorSet& ops, int N, const Shift& z, int mode_index) {
  if (N < 1) throw std::invalid_argument("lattice size must be positive");
  for (int c : z)
    if (c < 0 || c >= N) throw std::invalid_argument("lattice wave index out of range");
  if (mode_index < 0 || mode_index >= ops.n0) throw std::invalid_argument("mode index out of range");
  LatticeMode m;
  m.kappa = BrillouinDomain{ops.transform}.kappa_z(z, N);
  const SymbolEigenSystem sys = eig_symbol(ops, symbol_matrix(ops, m.kappa), true);
  m.s = std::max(0.0, sys.s[mode_index]);
  m.vector = fix_phase(sys.vectors.col(mode_index));
  return m;
}

namespace {

// Taylor start U1 = sum_{k<=2K+1} dt^k/k! d^k U(0) with d^k = -M^{-1}A d^{k-2}.
Eigen::VectorXcd taylor_start(const LocalOperatorSet& ops, int N, int K, double dt, const Eigen::VectorXcd& u0,
                              const Eigen::VectorXcd& v0) {
  Eigen::VectorXcd even = u0, odd = v0, acc = u0 + dt * v0;
  double fe = 1.0, fo = dt;
  for (int j = 1; j <= K; ++j) {
    even = -lattice_apply_mass_inverse(ops, N, lattice_apply_stiffness(ops, N, even));
    odd = -lattice_apply_mass_inverse(ops, N, lattice_apply_stiffness(ops, N, odd));
    fe *= dt * dt / ((2.0 * j - 1.0) * (2.0 * j));
    fo *= dt * dt / ((2.0 * j) * (2.0 * j + 1.0));
    acc += fe * even + fo * odd;
  }
  return acc;
}

}  // namespace

LatticeState initialize_plane_wave(const LocalOperatorSet& ops, int N, const LatticeMode& mode,
                                   const TimeScheme& scheme, bool real_field) {
  const double omega = numerical_omega(mode.s, scheme.dt, scheme.K);
  Eigen::VectorXcd u0 = bloch_field(ops, N, mode.kappa, mode.vector);
  Eigen::VectorXcd v0 = cplx(0.0, -omega) * u0;
  if (real_field) {
    u0 = u0.real().cast<cplx>();
    v0 = v0.real().cast<cplx>();
  }
  LatticeState st;
  st.N = N;
  st.n0 = ops.n0;
  st.dt = scheme.dt;
  st.prev = u0;
  st.cur = taylor_start(ops, N, scheme.K, scheme.dt, u0, v0);
  st.step = 1;
  return st;
}

LatticeState initialize_standing_wave(const LocalOperatorSet& ops, int N, const LatticeMode& mode, int K, double dt) {
  const Eigen::VectorXcd u0 = bloch_field(ops, N, mode.kappa, mode.vector).real().cast<cplx>();
  LatticeState st;
  st.N = N;
  st.n0 = ops.n0;
  st.dt = dt;
  st.prev = u0;
  st.cur = lattice_apply_polynomial(ops, N, K, dt, u0);
  st.step = 1;
  return st;
}

double measure_phase(const std::vector<cplx>& y, double dt) {
  if (y.size() < 3) throw std::invalid_argument("phase fit needs at least 3 samples");
  // y_{n+1} + y_{n-1} = 2 cos(theta) y_n holds for every combination of the
  // two exponentials exp(+-i theta n); least squares gives cos(theta).
  double num = 0.0, den = 0.0;
  for (size_t n = 1; n + 1 < y.size(); ++n) {
    num += std::real(std::conj(y[n]) * (y[n + 1] + y[n - 1]));
    den += 2.0 * std::norm(y[n]);
  }
  if (!(den > 0.0)) throw NumericalError("phase fit on a vanishing signal");
  const double c = std::clamp(num / den, -1.0, 1.0);
  const double theta = std::acos(c);
  if (theta > 0.5 * std::numbers::pi) throw ResolutionError("fewer than 4 time steps per period (aliasing)");
  if (theta * static_cast<double>(y.size() - 1) < 2.0 * std::numbers::pi)
    throw ResolutionError("less than one full period simulated");
  return theta / dt;
}

VerifyResult verify_mode(const LocalOperatorSet& ops, int N, const Shift& z, int mode_index, const TimeScheme& scheme,
                         int steps) {
  const LatticeMode mode = lattice_mode(ops, N, z, mode_index);
  LatticeState st = initialize_plane_wave(ops, N, mode, scheme, true);
  const Eigen::VectorXcd u0 = st.prev;
  const double norm0 = std::sqrt(std::abs(lattice_mass_inner(ops, N, u0, u0)));
  std::vector<cplx> y{lattice_mass_inner(ops, N, u0, u0), lattice_mass_inner(ops, N, st.cur, u0)};
  VerifyResult r;
  r.predicted_omega = numerical_omega(mode.s, scheme.dt, scheme.K);
  for (int n = 1; n < steps; ++n) {
    lw_step(st, ops, scheme.K);
    y.push_back(lattice_mass_inner(ops, N, st.cur, u0));
    r.max_amplitude = std::max(r.max_amplitude, std::sqrt(std::abs(lattice_mass_inner(ops, N, st.cur, st.cur))) / norm0);
  }
  r.steps = steps;
  r.empirical_omega = measure_phase(y, scheme.dt);
  r.rel_err = std::abs(r.empirical_omega - r.predicted_omega) / std::max(r.predicted_omega, 1e-300);
  r.stable = r.max_amplitude < 10.0;
  return r;
}

VerifyResult stability_probe(const LocalOperatorSet& ops, int N, int K, double dt_factor, int steps) {
  // Lattice mode with the largest eigenvalue.
  const BrillouinDomain dom{ops.transform};
  LatticeMode best;
  best.s = -1.0;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        const Vec3 k = dom.kappa_z(Shift{a, b, c}, N);
        const SymbolEigenSystem sys = eig_symbol(ops, symbol_matrix(ops, k), true);
        const int top = ops.n0 - 1;
        if (sys.s[top] > best.s) {
          best.s = sys.s[top];
          best.kappa = k;
          best.vector = fix_phase(sys.vectors.col(top));
        }
      }
  const double dt = dt_factor * std::sqrt(compute_cK(K) / best.s);
  LatticeState st = initialize_standing_wave(ops, N, best, K, dt);
  const double norm0 = std::sqrt(std::abs(lattice_mass_inner(ops, N, st.prev, st.prev)));
  VerifyResult r;
  r.predicted_omega = std::numeric_limits<double>::quiet_NaN();
  r.empirical_omega = std::numeric_limits<double>::quiet_NaN();
  for (int n = 1; n < steps; ++n) {
    lw_step(st, ops, K);
    const double amp = std::sqrt(std::abs(lattice_mass_inner(ops, N, st.cur, st.cur))) / norm0;
    r.max_amplitude = std::max(r.max_amplitude, amp);
    if (!std::isfinite(amp) || amp > 1e6) break;
  }
  r.steps = steps;
  r.stable = r.max_amplitude <= 1.0 + 1e-6;
  return r;
}

double reversal_error(const LocalOperatorSet& ops, LatticeState state, int K, int n) {
  const Eigen::VectorXcd p0 = state.prev, c0 = state.cur;
  for (int i = 0; i < n; ++i) lw_step(state, ops, K);
  reverse_time(state);
  for (int i = 0; i < n; ++i) lw_step(state, ops, K);
  // After reversal the pair reads (U1, U0).
  const double scale = std::max(p0.cwiseAbs().maxCoeff(), c0.cwiseAbs().maxCoeff());
  const double err = std::max((state.cur - p0).cwiseAbs().maxCoeff(), (state.prev - c0).cwiseAbs().maxCoeff());
  return err / std::max(scale, 1e-300);
}

}  // namespace tetdisp
