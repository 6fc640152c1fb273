#include "tetdisp/symbol.hpp"

#include "tetdisp/kernels.hpp"
#include "tetdisp/nelder_mead.hpp"
#include "tetdisp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>

namespace tetdisp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Standard-form Hermitian matrix H = M^{-1/2} A M^{-1/2} (diagonal mass) or
// L^{-1} A L^{-H} (Cholesky of a block-diagonal mass), plus the map back.
struct StandardForm {
  Eigen::MatrixXcd H;
  Eigen::VectorXd dinv_sqrt;  // diagonal case
  Eigen::MatrixXcd L;  // Cholesky factor of M0 (general case)
  bool diagonal = true;

  Eigen::MatrixXcd to_generalized(const Eigen::MatrixXcd& V) const {
    if (diagonal) return dinv_sqrt.asDiagonal() * V;
    return L.adjoint().triangularView<Eigen::Upper>().solve(V);
  }
};

StandardForm standard_form(const LocalOperatorSet& ops, const Eigen::MatrixXcd& A) {
  StandardForm sf;
  sf.diagonal = ops.mass_diagonal;
  if (sf.diagonal) {
    sf.dinv_sqrt = ops.M0.diagonal().cwiseSqrt().cwiseInverse();
    sf.H = sf.dinv_sqrt.asDiagonal() * A * sf.dinv_sqrt.asDiagonal();
  } else {
    const Eigen::LLT<Eigen::MatrixXd> llt(ops.M0);
    if (llt.info() != Eigen::Success) throw NumericalError("cell mass matrix is not positive definite");
    sf.L = Eigen::MatrixXd(llt.matrixL()).cast<cplx>();
    const Eigen::MatrixXcd Y = sf.L.triangularView<Eigen::Lower>().solve(A);
    sf.H = sf.L.triangularView<Eigen::Lower>().solve(Y.adjoint());
  }
  sf.H = 0.5 * (sf.H + sf.H.adjoint()).eval();
  return sf;
}

// Solves (T - lambda I) x = b for a real symmetric tridiagonal T with
// Gaussian elimination and partial pivoting; tiny pivots are replaced by `floor`.
Eigen::VectorXd tridiagonal_shifted_solve(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double lambda,
                                          const Eigen::VectorXd& b, double floor) {
  const int n = static_cast<int>(d.size());
  // Upper factor has up to two super-diagonals after pivoting.
  Eigen::VectorXd u0(n), u1 = Eigen::VectorXd::Zero(n), u2 = Eigen::VectorXd::Zero(n), rhs = b;
  double cur_diag = d[0] - lambda;
  double cur_sup = n > 1 ? e[0] : 0.0;
  double cur_sup2 = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double sub = e[i];
    double nd = d[i + 1] - lambda;
    double ns = i + 1 < n - 1 ? e[i + 1] : 0.0;
    if (std::abs(cur_diag) >= std::abs(sub)) {
      if (std::abs(cur_diag) < floor) cur_diag = cur_diag < 0 ? -floor : floor;
      const double l = sub / cur_diag;
      u0[i] = cur_diag;
      u1[i] = cur_sup;
      u2[i] = cur_sup2;
      rhs[i + 1] -= l * rhs[i];
      cur_diag = nd - l * cur_sup;
      cur_sup = ns - l * cur_sup2;
      cur_sup2 = 0.0;
    } else {
      // Swap rows i and i+1.
      const double l = cur_diag / sub;
      u0[i] = sub;
      u1[i] = nd;
      u2[i] = ns;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= l * rhs[i];
      const double new_diag = cur_sup - l * nd;
      const double new_sup = cur_sup2 - l * ns;
      cur_diag = new_diag;
      cur_sup = new_sup;
      cur_sup2 = 0.0;
    }
  }
  if (std::abs(cur_diag) < floor) cur_diag = cur_diag < 0 ? -floor : floor;
  u0[n - 1] = cur_diag;
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    double v = rhs[i];
    if (i + 1 < n) v -= u1[i] * x[i + 1];
    if (i + 2 < n) v -= u2[i] * x[i + 2];
    x[i] = v / u0[i];
  }
  return x;
}

Eigen::VectorXd start_vector(int n, int seed) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = std::sin(1.0 + 0.7 * i + 2.3 * seed) + 0.5 * std::cos(0.31 * i * (seed + 1));
  return v.normalized();
}

// Inverse iteration on T for the selected eigenvalues, orthogonalizing inside
// clusters of close eigenvalues.
Eigen::MatrixXd tridiagonal_vectors(const Eigen::VectorXd& d, const Eigen::VectorXd& e, const Eigen::VectorXd& evals,
                                    const std::vector<int>& sel) {
  const int n = static_cast<int>(d.size());
  double tnorm = 0.0;
  for (int i = 0; i < n; ++i)
    tnorm = std::max(tnorm, std::abs(d[i]) + (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i < n - 1 ? std::abs(e[i]) : 0.0));
  tnorm = std::max(tnorm, 1e-300);
  const double eps = std::numeric_limits<double>::epsilon();
  const double cluster_gap = 1e-3 * tnorm;
  const double floor = eps * tnorm;

  std::vector<int> order(sel.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return evals[sel[a]] < evals[sel[b]]; });

  Eigen::MatrixXd X(n, static_cast<int>(sel.size()));
  std::vector<int> cluster;  // columns of X in the current cluster
  double prev = -1e300;
  for (size_t k = 0; k < order.size(); ++k) {
    const int col = order[k];
    const double lam0 = evals[sel[col]];
    if (lam0 - prev > cluster_gap) cluster.clear();
    // Separate coincident shifts inside a cluster.
    const double lam = lam0 + static_cast<double>(cluster.size()) * 10.0 * floor;
    prev = lam0;
    Eigen::VectorXd x = start_vector(n, static_cast<int>(k));
    for (int it = 0; it < 8; ++it) {
      x = tridiagonal_shifted_solve(d, e, lam, x, floor);
      for (int twice = 0; twice < 2; ++twice)
        for (int c : cluster) x -= X.col(c).dot(x) * X.col(c);
      const double nx = x.norm();
      if (!(nx > 0.0) || !std::isfinite(nx)) throw NumericalError("inverse iteration broke down");
      x /= nx;
      if (it >= 1) {
        // Residual of the Rayleigh pair (T x - lam0 x).
        Eigen::VectorXd r = (d.array() - lam0).matrix().cwiseProduct(x);
        r.head(n - 1) += e.cwiseProduct(x.tail(n - 1));
        r.tail(n - 1) += e.cwiseProduct(x.head(n - 1));
        if (r.norm() <= 1e-13 * tnorm * std::sqrt(static_cast<double>(n))) break;
      }
    }
    X.col(col) = x;
    cluster.push_back(col);
  }
  return X;
}

}  // namespace

Vec3 BrillouinDomain::kappa_z(const Shift& z, int N) const {
  if (N < 1) throw std::invalid_argument("lattice size must be positive");
  return (kTwoPi / N) * (transform.Tinv_t * to_vec(z));
}

int SymbolEigenSystem::column_of(int i) const {
  for (size_t k = 0; k < vector_index.size(); ++k)
    if (vector_index[k] == i) return static_cast<int>(k);
  return -1;
}

Eigen::MatrixXcd symbol_matrix(const LocalOperatorSet& ops, const Vec3& kappa) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(ops.n0, ops.n0);
  for (int si = 0; si < kNumShifts; ++si) {
    const SparseMat& blk = ops.A[static_cast<size_t>(si)];
    if (blk.nonZeros() == 0) continue;
    const Vec3 x = ops.transform.T * to_vec(shift_from_index(si));
    const cplx phase = std::polar(1.0, kappa.dot(x));
    for (int r = 0; r < blk.outerSize(); ++r)
      for (SparseMat::InnerIterator it(blk, r); it; ++it) A(it.row(), it.col()) += phase * it.value();
  }
  return A;
}

SymbolEigenSystem eig_symbol(const LocalOperatorSet& ops, const Eigen::MatrixXcd& A, bool want_vectors) {
  const StandardForm sf = standard_form(ops, A);
  SymbolEigenSystem sys;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      sf.H, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  sys.s = es.eigenvalues();
  if (want_vectors) {
    sys.vectors = sf.to_generalized(es.eigenvectors());
    sys.vector_index.resize(static_cast<size_t>(ops.n0));
    std::iota(sys.vector_index.begin(), sys.vector_index.end(), 0);
  }
  return sys;
}

SymbolEigenSystem eig_symbol_selected(const LocalOperatorSet& ops, const Eigen::MatrixXcd& A,
                                      const std::function<std::vector<int>(const Eigen::VectorXd&)>& select) {
  const StandardForm sf = standard_form(ops, A);
  SymbolEigenSystem sys;
  const int n = ops.n0;
  if (n <= 2) {
    sys = eig_symbol(ops, A, true);
    const auto sel = select(sys.s);
    Eigen::MatrixXcd V(n, static_cast<int>(sel.size()));
    for (size_t k = 0; k < sel.size(); ++k) V.col(static_cast<int>(k)) = sys.vectors.col(sel[k]);
    sys.vectors = V;
    sys.vector_index = sel;
    return sys;
  }
  const Eigen::Tridiagonalization<Eigen::MatrixXcd> tri(sf.H);
  const Eigen::VectorXd d = tri.diagonal();
  const Eigen::VectorXd e = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver did not converge");
  sys.s = es.eigenvalues();
  sys.vector_index = select(sys.s);
  if (sys.vector_index.empty()) return sys;
  const Eigen::MatrixXd X = tridiagonal_vectors(d, e, sys.s, sys.vector_index);
  const Eigen::MatrixXcd V = tri.matrixQ() * X.cast<cplx>();
  sys.vectors = sf.to_generalized(V);
  return sys;
}

double sigma_max_dense(const LocalOperatorSet& ops, const Vec3& kappa) {
  const StandardForm sf = standard_form(ops, symbol_matrix(ops, kappa));
  if (ops.n0 == 1) return sf.H(0, 0).real();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sf.H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Eigen::SparseMatrix<cplx> symbol_matrix_sparse(const LocalOperatorSet& ops, const Vec3& kappa) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int si = 0; si < kNumShifts; ++si) {
    const SparseMat& blk = ops.A[static_cast<size_t>(si)];
    if (blk.nonZeros() == 0) continue;
    const cplx phase = std::polar(1.0, kappa.dot(ops.transform.T * to_vec(shift_from_index(si))));
    for (int r = 0; r < blk.outerSize(); ++r)
      for (SparseMat::InnerIterator it(blk, r); it; ++it) trip.emplace_back(it.row(), it.col(), phase * it.value());
  }
  Eigen::SparseMatrix<cplx> A(ops.n0, ops.n0);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

std::optional<double> sigma_max_lanczos(const LocalOperatorSet& ops, const Vec3& kappa, double tol, int max_iter) {
  if (!ops.mass_diagonal) return std::nullopt;
  const int n = ops.n0;
  const Eigen::VectorXd dinv = ops.M0.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::SparseMatrix<cplx> A = symbol_matrix_sparse(ops, kappa);
  auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return dinv.asDiagonal() * (A * (dinv.asDiagonal() * x).eval());
  };
  const int kmax = std::min(n, max_iter);
  Eigen::MatrixXcd Q(n, kmax);
  std::vector<double> alpha, beta;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXcd q(n);
  for (int i = 0; i < n; ++i) q[i] = cplx(uni(rng), uni(rng));
  q.normalize();
  for (int k = 0; k < kmax; ++k) {
    Q.col(k) = q;
    Eigen::VectorXcd w = apply(q);
    const double a = q.dot(w).real();
    alpha.push_back(a);
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();

    const int m = k + 1;
    if (m % 5 == 0 || m == n || m == kmax || b == 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(Eigen::Map<Eigen::VectorXd>(alpha.data(), m),
                                Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1), Eigen::ComputeEigenvectors);
      const double theta = es.eigenvalues()[m - 1];
      const double resid = std::abs(b * es.eigenvectors()(m - 1, m - 1));
      if (resid <= tol * std::abs(theta) || m == n || b <= tol * std::abs(theta)) return theta;
    }
    beta.push_back(b);
    q = w / b;
  }
  return std::nullopt;
}

double sigma_max(const LocalOperatorSet& ops, const Vec3& kappa) {
  // The top of the mass-lumped spectrum is well separated, so Lanczos settles
  // in a few dozen steps. SIPDG spectra end in tight clusters where it does not.
  if (ops.family == Family::mass_lumped && ops.n0 > 48) {
    if (const auto s = sigma_max_lanczos(ops, kappa, 1e-12, 120)) return *s;
  }
  return sigma_max_dense(ops, kappa);
}

double stability_polynomial(double x, int K) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= K; ++k) {
    term *= -x / ((2.0 * k - 1.0) * (2.0 * k));
    sum += term;
  }
  return sum;
}

double compute_cK(int K) {
  if (K < 1 || K > 8) throw std::invalid_argument("c_K is tabulated for 1 <= K <= 8");
  // Scan for the first point where |P| > 1, then bisect the crossing.
  const double step = 1e-3;
  double lo = 0.0, hi = 0.0;
  for (double x = step;; x += step) {
    if (std::abs(stability_polynomial(x, K)) > 1.0) {
      hi = x;
      lo = x - step;
      break;
    }
    if (x > 1e3) throw NumericalError("no stability bound found");
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(stability_polynomial(mid, K)) > 1.0 ? hi : lo) = mid;
  }
  return lo;
}

double stable_dt(double s_max, int K) {
  if (!(s_max > 0.0)) throw std::invalid_argument("stable_dt needs a positive spectral radius");
  return std::sqrt(compute_cK(K) / s_max);
}

TimeScheme make_scheme(int K, double s_max) {
  TimeScheme sch;
  sch.K = K;
  sch.cK = compute_cK(K);
  sch.s_max = s_max;
  sch.dt = std::sqrt(sch.cK / s_max);
  return sch;
}

double numerical_omega(double s, double dt, int K) {
  const double x = dt * dt * s;
  // q = 1 - P(x), summed directly so small x keeps full relative accuracy.
  double term = 1.0, q = 0.0;
  for (int k = 1; k <= K; ++k) {
    term *= -x / ((2.0 * k - 1.0) * (2.0 * k));
    q -= term;
  }
  constexpr double slack = 1e-9;
  if (q < -slack || q > 2.0 + slack)
    throw InstabilityError("Lax-Wendroff amplification outside [-1,1]: time step too large for this mode");
  q = std::clamp(q, 0.0, 2.0);
  return 2.0 * std::asin(std::sqrt(0.5 * q)) / dt;
}

ModeMatch match_modes(const Eigen::VectorXd& s, double kappa_norm, double c, const TimeScheme& scheme) {
  if (!(kappa_norm > 0.0)) throw std::invalid_argument("mode matching needs a nonzero wave vector");
  const int n = static_cast<int>(s.size());
  ModeMatch mm;
  mm.omega.resize(n);
  mm.speed.resize(n);
  for (int i = 0; i < n; ++i) {
    const double si = std::max(s[i], 0.0);
    double w;
    try {
      w = numerical_omega(si, scheme.dt, scheme.K);
    } catch (const InstabilityError&) {
      // The spectral-radius search is accurate to a relative tolerance, so the
      // extreme modes may sit a hair beyond the bound; they never match the
      // physical wave. Anything further out is a real instability.
      if (si > scheme.s_max * (1.0 + 1e-4)) throw;
      w = std::numeric_limits<double>::quiet_NaN();
    }
    mm.omega[i] = w;
    mm.speed[i] = w / kappa_norm;
  }
  mm.order.resize(static_cast<size_t>(n));
  std::iota(mm.order.begin(), mm.order.end(), 0);
  auto dist = [&](int i) { return std::isnan(mm.speed[i]) ? std::numeric_limits<double>::infinity() : std::abs(c - mm.speed[i]); };
  std::stable_sort(mm.order.begin(), mm.order.end(), [&](int a, int b) { return dist(a) < dist(b); });
  return mm;
}

namespace {

double max_edge(const std::array<Vec3, 4>& p) {
  double h = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) h = std::max(h, (p[i] - p[j]).norm());
  return h;
}

Eigen::VectorXcd dg_element_moments(const ElementBasis& basis, const ElementGeometry& g, const Vec3& kappa, int degree) {
  const auto& q = cached_simplex_quadrature(3, degree);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(basis.dim);
  for (size_t k = 0; k < q.size(); ++k) {
    const Vec3 x = g.x0 + g.J * q.points[k];
    const cplx ph = std::polar(q.weights[k], kappa.dot(x));
    b += ph * basis.values(q.points[k]).cast<cplx>();
  }
  return b;
}

}  // namespace

Eigen::VectorXcd plane_wave_projection(const Discretization& d, const Vec3& kappa, const Eigen::VectorXd& amplitude) {
  const LocalOperatorSet& ops = d.ops;
  const int m = ops.m;
  if (amplitude.size() != m) throw std::invalid_argument("plane-wave amplitude has the wrong length");
  Eigen::VectorXcd u(ops.n0);
  if (ops.family == Family::mass_lumped) {
    for (size_t i = 0; i < ops.node_positions.size(); ++i) {
      const cplx ph = std::polar(1.0, kappa.dot(ops.node_positions[i]));
      for (int a = 0; a < m; ++a) u[static_cast<int>(i) * m + a] = ph * amplitude[a];
    }
    return u;
  }

  const ElementBasis& basis = d.basis;
  const int dim = basis.dim;
  const Eigen::MatrixXd gram = reference_gram(basis);
  const Eigen::LLT<Eigen::MatrixXd> gram_llt(gram);
  const double kn = kappa.norm();
  for (int e = 0; e < d.mesh.num_tets(); ++e) {
    const auto corners = d.mesh.tet_physical(e);
    const ElementGeometry g = element_geometry(corners);
    int degree = std::max(2 * basis.poly_degree + 6, static_cast<int>(std::ceil(3.0 * kn * max_edge(corners))));
    degree = std::min(degree, kMaxQuadratureDegree - 4);
    Eigen::VectorXcd b = dg_element_moments(basis, g, kappa, degree);
    for (;;) {
      const Eigen::VectorXcd b2 = dg_element_moments(basis, g, kappa, degree + 4);
      const double diff = (b2 - b).norm();
      b = b2;
      if (diff <= 1e-13 * std::max(b.norm(), 1e-300) || degree + 8 > kMaxQuadratureDegree) break;
      degree += 4;
    }
    const Eigen::VectorXcd coef = gram_llt.solve(b);  // mass factors rho |det J| cancel
    for (int i = 0; i < dim; ++i)
      for (int a = 0; a < m; ++a) u[(e * dim + i) * m + a] = coef[i] * amplitude[a];
  }
  return u;
}

double gram_ratio_sup(const Eigen::Matrix2cd& B, const Eigen::Matrix2cd& R) {
  const Eigen::LLT<Eigen::Matrix2cd> llt(B);
  if (llt.info() != Eigen::Success) throw ResolutionError("projected polarizations are linearly dependent");
  const Eigen::Matrix2cd L = llt.matrixL();
  Eigen::Matrix2cd X = L.triangularView<Eigen::Lower>().solve(R);
  X = L.triangularView<Eigen::Lower>().solve(X.adjoint().eval());
  X = 0.5 * (X + X.adjoint()).eval();
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(X, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  return std::sqrt(std::max(lmax, 0.0));
}

namespace {

// M0-weighted residual of projecting the columns of P onto span(U), U M0-orthonormal.
Eigen::MatrixXcd projection_residual(const Eigen::MatrixXd& M0, bool diagonal, const Eigen::MatrixXcd& U,
                                     const Eigen::MatrixXcd& P) {
  const Eigen::MatrixXcd MP = diagonal ? Eigen::MatrixXcd(M0.diagonal().asDiagonal() * P) : Eigen::MatrixXcd(M0 * P);
  return P - U * (U.adjoint() * MP);
}

Eigen::MatrixXcd m0_gram(const Eigen::MatrixXd& M0, bool diagonal, const Eigen::MatrixXcd& X) {
  const Eigen::MatrixXcd MX = diagonal ? Eigen::MatrixXcd(M0.diagonal().asDiagonal() * X) : Eigen::MatrixXcd(M0 * X);
  return X.adjoint() * MX;
}

KappaErrors kappa_errors_impl(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme, bool want_vec,
                              const Vec3* pol1, const Vec3* pol2) {
  const double kn = kappa.norm();
  if (!(kn > 0.0)) throw std::invalid_argument("errors need a nonzero wave vector");
  const bool elastic = d.material.kind() == MaterialKind::elastic;
  const int nmatch = elastic ? 2 : 1;
  const double c = d.material.wave_speed();
  const LocalOperatorSet& ops = d.ops;
  const Eigen::MatrixXcd A = symbol_matrix(ops, kappa);

  ModeMatch mm;
  auto select = [&](const Eigen::VectorXd& s) {
    mm = match_modes(s, kn, c, scheme);
    if (!want_vec) return std::vector<int>{};
    // Carry one extra candidate so ties at the selection boundary can be resolved.
    const int take = std::min<int>(nmatch + 1, static_cast<int>(s.size()));
    return std::vector<int>(mm.order.begin(), mm.order.begin() + take);
  };
  const SymbolEigenSystem sys = eig_symbol_selected(ops, A, select);
  if (static_cast<int>(mm.order.size()) < nmatch) throw ResolutionError("cell has too few modes to match");

  KappaErrors out;
  out.c_h = mm.speed[mm.order[static_cast<size_t>(nmatch - 1)]];
  out.e_disp = std::abs(c - out.c_h) / c;
  if (!want_vec) return out;

  // Physical plane waves projected onto the cell space.
  Eigen::MatrixXcd P(ops.n0, nmatch);
  if (elastic) {
    Vec3 a1, a2;
    if (pol1 && pol2) {
      a1 = *pol1;
      a2 = *pol2;
    } else {
      std::tie(a1, a2) = secondary_amplitude_pair(kappa);
    }
    P.col(0) = plane_wave_projection(d, kappa, a1);
    P.col(1) = plane_wave_projection(d, kappa, a2);
  } else {
    P.col(0) = plane_wave_projection(d, kappa, Eigen::VectorXd::Ones(1));
  }

  // Selected modes; a tie at the boundary goes to the larger overlap with the physical wave.
  std::vector<int> chosen(mm.order.begin(), mm.order.begin() + nmatch);
  if (static_cast<int>(mm.order.size()) > nmatch) {
    const int last = chosen.back(), alt = mm.order[static_cast<size_t>(nmatch)];
    if (std::abs(std::abs(c - mm.speed[last]) - std::abs(c - mm.speed[alt])) <= 1e-12 * c) {
      auto overlap = [&](int idx) {
        const Eigen::VectorXcd u = sys.vectors.col(sys.column_of(idx));
        const Eigen::MatrixXcd g = u.adjoint() * (ops.M0 * P);
        return g.norm();
      };
      if (overlap(alt) > overlap(last)) chosen.back() = alt;
    }
  }
  Eigen::MatrixXcd U(ops.n0, nmatch);
  for (int k = 0; k < nmatch; ++k) U.col(k) = sys.vectors.col(sys.column_of(chosen[static_cast<size_t>(k)]));

  const Eigen::MatrixXcd Rm = projection_residual(ops.M0, ops.mass_diagonal, U, P);
  const Eigen::MatrixXcd B = m0_gram(ops.M0, ops.mass_diagonal, P);
  const Eigen::MatrixXcd R = m0_gram(ops.M0, ops.mass_diagonal, Rm);
  if (elastic) {
    out.e_vec = gram_ratio_sup(B, R);
  } else {
    const double b = B(0, 0).real();
    if (!(b > 0.0)) throw ResolutionError("plane-wave projection vanished");
    out.e_vec = std::sqrt(std::max(R(0, 0).real(), 0.0) / b);
  }
  return out;
}

}  // namespace

KappaErrors kappa_errors(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme, bool want_vec) {
  return kappa_errors_impl(d, kappa, scheme, want_vec, nullptr, nullptr);
}

double dispersion_error_acoustic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme) {
  if (d.material.kind() != MaterialKind::acoustic) throw std::invalid_argument("acoustic error on an elastic model");
  return kappa_errors(d, kappa, scheme, false).e_disp;
}

double eigenvector_error_acoustic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme) {
  if (d.material.kind() != MaterialKind::acoustic) throw std::invalid_argument("acoustic error on an elastic model");
  return kappa_errors(d, kappa, scheme, true).e_vec;
}

double dispersion_error_elastic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme) {
  if (d.material.kind() != MaterialKind::elastic) throw std::invalid_argument("elastic error on an acoustic model");
  return kappa_errors(d, kappa, scheme, false).e_disp;
}

double eigenvector_error_elastic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme) {
  if (d.material.kind() != MaterialKind::elastic) throw std::invalid_argument("elastic error on an acoustic model");
  return kappa_errors(d, kappa, scheme, true).e_vec;
}

double eigenvector_error_elastic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme, const Vec3& a1,
                                 const Vec3& a2) {
  if (d.material.kind() != MaterialKind::elastic) throw std::invalid_argument("elastic error on an acoustic model");
  return kappa_errors_impl(d, kappa, scheme, true, &a1, &a2).e_vec;
}

SpectralRadiusResult spectral_radius_max(const LocalOperatorSet& ops, const SpectralSearchOptions& opts) {
  const int g = opts.grid;
  if (g < 1) throw std::invalid_argument("spectral search grid must be positive");
  const BrillouinDomain dom{ops.transform};
  auto zeta_of = [&](int idx) {
    return Vec3(kTwoPi * (idx / (g * g)) / g, kTwoPi * ((idx / g) % g) / g, kTwoPi * (idx % g) / g);
  };
  // sigma(zeta) = sigma(-zeta): keep one representative of each mirror pair.
  std::vector<int> points;
  for (int idx = 0; idx < g * g * g; ++idx) {
    const int i = idx / (g * g), j = (idx / g) % g, k = idx % g;
    const int mirror = ((g - i) % g) * g * g + ((g - j) % g) * g + (g - k) % g;
    if (idx <= mirror) points.push_back(idx);
  }
  const auto vals = indexed_map<double>(
      static_cast<int>(points.size()), [&](int t) { return sigma_max(ops, dom.kappa(zeta_of(points[t]))); },
      opts.parallel ? ExecPolicy::parallel : ExecPolicy::serial);

  SpectralRadiusResult res;
  res.evaluations = static_cast<int>(points.size());
  std::vector<int> rank(points.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return vals[a] > vals[b]; });
  res.grid_max = vals[rank[0]];
  res.s_max = res.grid_max;
  res.zeta = zeta_of(points[rank[0]]);

  const int restarts = std::min<int>(opts.restarts, static_cast<int>(rank.size()));
  const auto refined = indexed_map<NelderMeadResult>(
      restarts,
      [&](int r) {
        NelderMeadOptions nm;
        nm.initial_step = 0.5 * kTwoPi / g;
        nm.ftol = opts.tol;
        nm.xtol = 1e-4;
        nm.max_evals = 200;
        return nelder_mead([&](const Eigen::VectorXd& z) { return -sigma_max(ops, dom.kappa(Vec3(z))); },
                           Eigen::VectorXd(zeta_of(points[rank[r]])), nm);
      },
      opts.parallel ? ExecPolicy::parallel : ExecPolicy::serial);
  for (const auto& r : refined) {
    res.evaluations += r.evals;
    if (-r.f > res.s_max) {
      res.s_max = -r.f;
      res.zeta = Vec3(r.x);
    }
  }
  return res;
}

double lattice_spectral_radius(const LocalOperatorSet& ops, int N) {
  const BrillouinDomain dom{ops.transform};
  double best = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) best = std::max(best, sigma_max(ops, dom.kappa_z(Shift{i, j, k}, N)));
  return best;
}

}  // namespace tetdisp
