#include "tetdisp/assembly.hpp"
#include "tetdisp/quadrature.hpp"

#include <cmath>

namespace tetdisp {

namespace {

// Pseudo-inverse of a small symmetric matrix via its eigen-decomposition.
Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& A, double rel_tol) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double cutoff = rel_tol * es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(A.rows());
  for (int i = 0; i < A.rows(); ++i)
    if (std::abs(es.eigenvalues()[i]) > cutoff) inv[i] = 1.0 / es.eigenvalues()[i];
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

PenaltySpec penalty_inscribed_sphere(const UnitCellMesh& mesh, int p) {
  if (p < 1) throw std::invalid_argument("penalty degree must be at least 1");
  const int ne = mesh.num_tets();
  const CouplingTable couplings = enumerate_couplings(mesh);
  PenaltySpec spec;
  spec.variant = PenaltyVariant::inscribed_sphere;
  spec.alpha.resize(static_cast<size_t>(ne) * 4);
  spec.nu.resize(static_cast<size_t>(ne) * 4);
  spec.diameter.resize(static_cast<size_t>(ne));
  for (int e = 0; e < ne; ++e) spec.diameter[e] = inscribed_diameter(mesh.tet_physical(e));
  for (int e = 0; e < ne; ++e) {
    const ElementGeometry g = element_geometry(mesh.tet_physical(e));
    for (int f = 0; f < 4; ++f) {
      const FaceCoupling& fc = couplings.face(e, f);
      const double d = std::min(spec.diameter[e], spec.diameter[fc.nbr_elem]);
      if (!(d > 0.0)) throw NumericalError("degenerate element in penalty computation");
      spec.alpha[e * 4 + f] = p * (p + 2) / d;
      spec.nu[e * 4 + f] = g.areas[f] / g.volume();
    }
  }
  return spec;
}

PenaltySpec penalty_eigen_bound(const UnitCellMesh& mesh, int p, const MaterialModel& material) {
  if (p < 1) throw std::invalid_argument("penalty degree must be at least 1");
  const int ne = mesh.num_tets();
  const int m = material.m();
  // Any basis of P^p works; the quotient eigenvalue does not depend on it.
  const ElementBasis basis = dg_basis(p, DgBasisKind::orthonormal);
  const int dim = basis.dim;
  const int nb = dim * m;
  const auto tri = simplex_quadrature(2, 2 * p);

  PenaltySpec spec;
  spec.variant = PenaltyVariant::eigen_bound;
  spec.alpha.resize(static_cast<size_t>(ne) * 4);
  spec.nu.resize(static_cast<size_t>(ne) * 4);
  spec.diameter.resize(static_cast<size_t>(ne));

#pragma omp parallel for schedule(dynamic)
  for (int e = 0; e < ne; ++e) {
    const auto corners = mesh.tet_physical(e);
    const ElementGeometry g = element_geometry(corners);
    spec.diameter[e] = inscribed_diameter(corners);
    const Eigen::MatrixXd E = element_stiffness(basis, g, material);

    // Boundary form sum_f (|e|/|f|) int_f t^T c_n^+ t with t the traction of each basis field.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nb, nb);
    for (int f = 0; f < 4; ++f) {
      const Vec3 n = g.normals[f];
      const Eigen::MatrixXd cn_inv = symmetric_pinv(material.normal_tensor(n), 1e-12);
      std::array<Vec3, 3> fv;
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != f) fv[k++] = corners[i];
      const double scale = g.volume() / g.areas[f];
      Eigen::MatrixXd Tr(nb, m);
      for (size_t q = 0; q < tri.size(); ++q) {
        const Vec3 y = fv[0] + tri.points[q][0] * (fv[1] - fv[0]) + tri.points[q][1] * (fv[2] - fv[0]);
        const double w = tri.weights[q] * 2.0 * g.areas[f];
        const Eigen::MatrixXd grad = basis.gradients(g.Jinv * (y - g.x0)) * g.Jinv;  // dim x 3
        for (int i = 0; i < dim; ++i)
          for (int a = 0; a < m; ++a) {
            Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, m);
            G.col(a) = grad.row(i).transpose();
            Tr.row(i * m + a) = material.traction(n, G).transpose();
          }
        B.noalias() += w * scale * Tr * cn_inv * Tr.transpose();
      }
    }

    // sup of the Rayleigh quotient B/E on the complement of ker E.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E);
    const double cutoff = 1e-12 * es.eigenvalues().maxCoeff();
    int first = 0;
    while (first < nb && es.eigenvalues()[first] <= cutoff) ++first;
    if (first == nb) throw NumericalError("energy form vanishes on the element space");
    const int r = nb - first;
    const Eigen::MatrixXd Z = es.eigenvectors().rightCols(r) *
                              es.eigenvalues().tail(r).cwiseSqrt().cwiseInverse().asDiagonal();
    const Eigen::MatrixXd Q = Z.transpose() * B * Z;
    const double sup = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (Q + Q.transpose()), Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
    for (int f = 0; f < 4; ++f) {
      const double nu = g.areas[f] / g.volume();
      spec.nu[e * 4 + f] = nu;
      spec.alpha[e * 4 + f] = 0.5 * nu * sup;
    }
  }
  return spec;
}

PenaltySpec make_penalty(const UnitCellMesh& mesh, int p, const MaterialModel& material, PenaltyVariant variant) {
  switch (variant) {
    case PenaltyVariant::eigen_bound: return penalty_eigen_bound(mesh, p, material);
    case PenaltyVariant::inscribed_sphere: return penalty_inscribed_sphere(mesh, p);
    case PenaltyVariant::none: break;
  }
  throw std::invalid_argument("invalid penalty variant for SIPDG");
}

}  // namespace tetdisp
