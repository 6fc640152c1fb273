#pragma once

#include "tetdisp/assembly.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace tetdisp {

/// Wave vectors kappa = T^{-t} zeta with zeta in [0, 2 pi)^3.
struct BrillouinDomain {
  LatticeTransform transform;

  Vec3 kappa(const Vec3& zeta) const { return transform.Tinv_t * zeta; }
  Vec3 zeta(const Vec3& kappa) const { return transform.T.transpose() * kappa; }
  /// kappa_z = (2 pi / N) T^{-t} z, the wave vectors resolved by an N^3-cell periodic lattice.
  Vec3 kappa_z(const Shift& z, int N) const;
};

/// A(kappa) = sum_s exp(i kappa . T s) A[s]; Hermitian by construction.
Eigen::MatrixXcd symbol_matrix(const LocalOperatorSet& ops, const Vec3& kappa);

/// Eigen-decomposition of the generalized problem A(kappa) U = s M0 U.
///
/// `s` holds all n0 eigenvalues in ascending order. `vectors` holds M0-orthonormal
/// eigenvectors for the indices listed in `vector_index` (all of them for the
/// dense path).
struct SymbolEigenSystem {
  Vec3 kappa = Vec3::Zero();
  Eigen::VectorXd s;
  Eigen::MatrixXcd vectors;
  std::vector<int> vector_index;

  /// Column of `vectors` holding eigenvector i, or -1.
  int column_of(int i) const;
};

/// Dense reference: full Hermitian eigendecomposition of the mass-scaled symbol.
SymbolEigenSystem eig_symbol(const LocalOperatorSet& ops, const Eigen::MatrixXcd& A, bool want_vectors = true);

/// Eigenvalues plus eigenvectors only for the indices chosen by `select`, which
/// receives the sorted eigenvalues. Uses Householder tridiagonalization,
/// eigenvalues of the real tridiagonal matrix, inverse iteration for the
/// selected vectors and back-transformation.
SymbolEigenSystem eig_symbol_selected(const LocalOperatorSet& ops, const Eigen::MatrixXcd& A,
                                      const std::function<std::vector<int>(const Eigen::VectorXd&)>& select);

/// Sparse form of symbol_matrix.
Eigen::SparseMatrix<cplx> symbol_matrix_sparse(const LocalOperatorSet& ops, const Vec3& kappa);

/// Largest eigenvalue of S(kappa). Large mass-lumped cells use Lanczos on the
/// sparse symbol and fall back to the dense solver if it does not converge.
double sigma_max(const LocalOperatorSet& ops, const Vec3& kappa);
/// Dense reference for sigma_max.
double sigma_max_dense(const LocalOperatorSet& ops, const Vec3& kappa);
/// Lanczos with full reorthogonalization; empty if the residual bound
/// tol * |theta| is not reached within max_iter steps or the mass is not diagonal.
std::optional<double> sigma_max_lanczos(const LocalOperatorSet& ops, const Vec3& kappa, double tol, int max_iter);

/// Stability polynomial sum_{k=0}^{K} (-x)^k / (2k)!.
double stability_polynomial(double x, int K);

/// c_K = inf{x >= 0 : |stability_polynomial(x, K)| > 1}.
double compute_cK(int K);

struct SpectralSearchOptions {
  int grid = 17;         // points per axis of the coarse zeta grid
  double tol = 1e-6;     // relative accuracy of the refinement
  int restarts = 3;      // local refinements from the best grid points
  bool parallel = true;
};

struct SpectralRadiusResult {
  double s_max = 0.0;
  double grid_max = 0.0;
  Vec3 zeta = Vec3::Zero();
  int evaluations = 0;
};

SpectralRadiusResult spectral_radius_max(const LocalOperatorSet& ops, const SpectralSearchOptions& opts = {});

/// Largest eigenvalue over the wave vectors of an N^3-cell lattice; equals
/// sigma_max(M^{-1}A) of that finite periodic problem.
double lattice_spectral_radius(const LocalOperatorSet& ops, int N);

struct TimeScheme {
  int K = 1;
  double cK = 4.0;
  double dt = 0.0;
  double s_max = 0.0;
};

/// dt = sqrt(c_K / s_max).
double stable_dt(double s_max, int K);
TimeScheme make_scheme(int K, double s_max);

/// (1/dt) arccos(P(dt^2 s)); throws InstabilityError if the argument leaves [-1-1e-9, 1+1e-9].
double numerical_omega(double s, double dt, int K);

/// Matching of numerical modes to a physical wave for one wave vector.
struct ModeMatch {
  std::vector<int> order;     // eigen indices sorted by |c - c_h|
  Eigen::VectorXd omega;      // per eigen index
  Eigen::VectorXd speed;      // c_h per eigen index
};

ModeMatch match_modes(const Eigen::VectorXd& s, double kappa_norm, double c, const TimeScheme& scheme);

/// Coefficients over Omega0 of the discrete projection of a * exp(i kappa . x).
/// Mass-lumped: nodal values. SIPDG: element-wise L2 projection with an
/// oscillatory quadrature whose degree is escalated until two degrees agree.
Eigen::VectorXcd plane_wave_projection(const Discretization& d, const Vec3& kappa, const Eigen::VectorXd& amplitude);

struct KappaErrors {
  double e_disp = 0.0;
  double e_vec = 0.0;
  double c_h = 0.0;  // speed of the deciding match (first for acoustic, second for elastic)
};

/// Both errors from one eigen solve. Acoustic: best match against c. Elastic:
/// the two best matches against c_S and the S-wave polarization pair.
KappaErrors kappa_errors(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme, bool want_vec = true);

double dispersion_error_acoustic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme);
double eigenvector_error_acoustic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme);
double dispersion_error_elastic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme);
double eigenvector_error_elastic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme);
/// Same with an explicit orthonormal polarization pair spanning kappa-perp.
double eigenvector_error_elastic(const Discretization& d, const Vec3& kappa, const TimeScheme& scheme, const Vec3& a1,
                                 const Vec3& a2);

/// sqrt(lambda_max(B^{-1} R)) for 2x2 Hermitian B > 0 and R >= 0.
double gram_ratio_sup(const Eigen::Matrix2cd& B, const Eigen::Matrix2cd& R);

}  // namespace tetdisp
