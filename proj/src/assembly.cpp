#include "tetdisp/assembly.hpp"

#include "tetdisp/quadrature.hpp"

#include <omp.h>

#include <cmath>
#include <set>
#include <tuple>

namespace tetdisp {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// CC[(b*m + a), (k*m + c)] = C(b, a, c, k), so E(X, Y) = vec(X)^T CC vec(Y).
Eigen::MatrixXd flattened_tensor(const MaterialModel& mat) {
  const int m = mat.m();
  Eigen::MatrixXd CC(3 * m, 3 * m);
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < 3; ++k)
        for (int c = 0; c < m; ++c) CC(b * m + a, k * m + c) = mat.C(b, a, c, k);
  return CC;
}

// Reference integrals S[beta][gamma] = int_ref d_beta phi d_gamma phi^T.
std::array<std::array<Eigen::MatrixXd, 3>, 3> reference_stiffness(const ElementBasis& basis) {
  const auto q = simplex_quadrature(3, 2 * basis.poly_degree);
  std::array<std::array<Eigen::MatrixXd, 3>, 3> S;
  for (auto& row : S)
    for (auto& s : row) s = Eigen::MatrixXd::Zero(basis.dim, basis.dim);
  for (size_t k = 0; k < q.size(); ++k) {
    const Eigen::MatrixXd g = basis.gradients(q.points[k]);
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) S[b][c].noalias() += q.weights[k] * g.col(b) * g.col(c).transpose();
  }
  return S;
}

Eigen::MatrixXd stiffness_from_reference(const std::array<std::array<Eigen::MatrixXd, 3>, 3>& S, int dim,
                                         const ElementGeometry& geom, const MaterialModel& mat) {
  const int m = mat.m();
  // P[b][k] = int_e d_{x_b} phi d_{x_k} phi^T
  std::array<std::array<Eigen::MatrixXd, 3>, 3> P;
  for (int b = 0; b < 3; ++b)
    for (int k = 0; k < 3; ++k) {
      P[b][k] = Eigen::MatrixXd::Zero(dim, dim);
      for (int be = 0; be < 3; ++be)
        for (int ga = 0; ga < 3; ++ga) {
          const double f = geom.Jinv(be, b) * geom.Jinv(ga, k);
          if (f != 0.0) P[b][k] += f * S[be][ga];
        }
      P[b][k] *= geom.detJ;
    }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim * m, dim * m);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      for (int b = 0; b < 3; ++b)
        for (int k = 0; k < 3; ++k) {
          const double cv = mat.C(b, a, c, k);
          if (cv == 0.0) continue;
          for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) K(i * m + a, j * m + c) += cv * P[b][k](i, j);
        }
  return K;
}

int find_or_add(std::vector<Vec3>& reps, const Vec3& p) {
  for (size_t i = 0; i < reps.size(); ++i)
    if ((reps[i] - p).cwiseAbs().maxCoeff() < 1e-9) return static_cast<int>(i);
  reps.push_back(p);
  return static_cast<int>(reps.size()) - 1;
}

std::array<SparseMat, kNumShifts> build_blocks(int n0, const std::array<Triplets, kNumShifts>& trips) {
  std::array<SparseMat, kNumShifts> A;
  for (int s = 0; s < kNumShifts; ++s) {
    A[s].resize(n0, n0);
    A[s].setFromTriplets(trips[s].begin(), trips[s].end());
    A[s].prune(0.0);
  }
  return A;
}

}  // namespace

double LocalOperatorSet::scale() const {
  double s = 0.0;
  for (const auto& blk : A)
    for (int k = 0; k < blk.outerSize(); ++k)
      for (SparseMat::InnerIterator it(blk, k); it; ++it) s = std::max(s, std::abs(it.value()));
  return s;
}

ElementGeometry element_geometry(const std::array<Vec3, 4>& p) {
  ElementGeometry g;
  g.x0 = p[0];
  for (int c = 0; c < 3; ++c) g.J.col(c) = p[c + 1] - p[0];
  g.detJ = g.J.determinant();
  if (!(g.detJ > 0.0)) throw NumericalError("element with non-positive Jacobian determinant");
  g.Jinv = g.J.inverse();
  for (int f = 0; f < 4; ++f) {
    std::array<Vec3, 3> q;
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != f) q[k++] = p[i];
    Vec3 n = (q[1] - q[0]).cross(q[2] - q[0]);
    g.areas[f] = 0.5 * n.norm();
    n.normalize();
    if (n.dot(q[0] - p[f]) < 0.0) n = -n;
    g.normals[f] = n;
  }
  return g;
}

double inscribed_diameter(const std::array<Vec3, 4>& corners) {
  const double vol = std::abs((corners[1] - corners[0]).dot((corners[2] - corners[0]).cross(corners[3] - corners[0]))) / 6.0;
  if (!(vol > 0.0)) throw std::invalid_argument("inscribed diameter of a degenerate tetrahedron");
  double area = 0.0;
  for (int f = 0; f < 4; ++f) {
    std::array<Vec3, 3> q;
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != f) q[k++] = corners[i];
    area += 0.5 * (q[1] - q[0]).cross(q[2] - q[0]).norm();
  }
  return 6.0 * vol / area;
}

Eigen::MatrixXd element_stiffness(const ElementBasis& basis, const ElementGeometry& geom, const MaterialModel& mat) {
  return stiffness_from_reference(reference_stiffness(basis), basis.dim, geom, mat);
}

LocalOperatorSet assemble_mass_lumped(const UnitCellMesh& mesh, const MassLumpedRule& rule,
                                      const MaterialModel& material) {
  const ElementBasis basis = nodal_basis_from_rule(rule);
  const int m = material.m();
  const int ne = mesh.num_tets();
  const int nloc = basis.dim;

  LocalOperatorSet ops;
  ops.family = Family::mass_lumped;
  ops.m = m;
  ops.transform = mesh.transform;
  ops.elem_nodes.resize(static_cast<size_t>(ne));

  // Resolve element nodes to owned nodes of the cell.
  std::vector<Vec3> reps;
  for (int e = 0; e < ne; ++e) {
    const auto corners = mesh.tet_lattice(e);
    for (int k = 0; k < nloc; ++k) {
      Vec3 x = Vec3::Zero();
      for (int c = 0; c < 4; ++c) x += rule.nodes[k][c] * corners[c];
      const auto [rep, shift] = reduce_to_cell(x);
      ops.elem_nodes[e].push_back(NodeRef{find_or_add(reps, rep), shift});
    }
  }
  const int nn = static_cast<int>(reps.size());
  ops.n0 = nn * m;
  for (const auto& r : reps) ops.node_positions.push_back(mesh.transform.T * r);

  const auto S = reference_stiffness(basis);
  std::vector<Eigen::MatrixXd> Ke(static_cast<size_t>(ne));
  std::vector<double> detJ(static_cast<size_t>(ne));
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) {
    const ElementGeometry g = element_geometry(mesh.tet_physical(e));
    detJ[e] = g.detJ;
    Ke[e] = stiffness_from_reference(S, nloc, g, material);
  }

  Eigen::VectorXd mass = Eigen::VectorXd::Zero(nn);
  std::array<Triplets, kNumShifts> trips;
  std::set<std::tuple<int, int, int>> pairs;
  for (int e = 0; e < ne; ++e) {
    const auto& nodes = ops.elem_nodes[e];
    for (int i = 0; i < nloc; ++i) mass[nodes[i].node] += rule.weights[i] * detJ[e] * material.rho();
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) {
        Shift d;
        for (int c = 0; c < 3; ++c) {
          d[c] = nodes[j].shift[c] - nodes[i].shift[c];
          if (std::abs(d[c]) > 1) throw TopologyError("element couples cells more than one shift apart");
        }
        const int si = shift_index(d);
        pairs.emplace(nodes[i].node, nodes[j].node, si);
        for (int a = 0; a < m; ++a)
          for (int c = 0; c < m; ++c) {
            const double v = Ke[e](i * m + a, j * m + c);
            if (v != 0.0) trips[si].emplace_back(nodes[i].node * m + a, nodes[j].node * m + c, v);
          }
      }
  }
  ops.A = build_blocks(ops.n0, trips);
  ops.M0 = Eigen::MatrixXd::Zero(ops.n0, ops.n0);
  for (int i = 0; i < nn; ++i)
    for (int a = 0; a < m; ++a) ops.M0(i * m + a, i * m + a) = mass[i];
  ops.mass_diagonal = true;
  ops.nnz_per_cell = static_cast<double>(pairs.size()) * m * m;
  return ops;
}

LocalOperatorSet assemble_dg(const UnitCellMesh& mesh, int p, const MaterialModel& material, PenaltyVariant variant,
                             DgBasisKind basis_kind) {
  if (variant == PenaltyVariant::none) throw std::invalid_argument("SIPDG assembly needs a penalty variant");
  return assemble_dg(mesh, dg_basis(p, basis_kind), material, make_penalty(mesh, p, material, variant));
}

LocalOperatorSet assemble_dg(const UnitCellMesh& mesh, const ElementBasis& basis, const MaterialModel& material,
                             const PenaltySpec& penalty) {
  const int m = material.m();
  const int ne = mesh.num_tets();
  const int dim = basis.dim;
  const int nb = dim * m;
  const CouplingTable couplings = enumerate_couplings(mesh);
  const Eigen::MatrixXd CC = flattened_tensor(material);

  LocalOperatorSet ops;
  ops.family = Family::sipdg;
  ops.m = m;
  ops.n0 = ne * nb;
  ops.elem_dim = dim;
  ops.transform = mesh.transform;

  std::vector<ElementGeometry> geom(static_cast<size_t>(ne));
  for (int e = 0; e < ne; ++e) geom[e] = element_geometry(mesh.tet_physical(e));

  const auto S = reference_stiffness(basis);
  const Eigen::MatrixXd gram = reference_gram(basis);
  const auto tri = simplex_quadrature(2, 2 * basis.poly_degree);

  // Per (element, face): self block and the block coupling to the neighbour.
  std::vector<Eigen::MatrixXd> Kvol(static_cast<size_t>(ne));
  std::vector<Eigen::MatrixXd> self(static_cast<size_t>(ne) * 4), cross(static_cast<size_t>(ne) * 4);

#pragma omp parallel for schedule(dynamic)
  for (int ef = 0; ef < ne * 4; ++ef) {
    const int e = ef / 4, f = ef % 4;
    if (f == 0) Kvol[e] = stiffness_from_reference(S, dim, geom[e], material);

    const FaceCoupling& fc = couplings.face(e, f);
    const ElementGeometry& ga = geom[e];
    const ElementGeometry& gb = geom[fc.nbr_elem];
    const Vec3 offset = mesh.transform.T * to_vec(fc.shift);
    const auto pa = mesh.tet_physical(e);
    std::array<Vec3, 3> fv;
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != f) fv[k++] = pa[i];
    const double area = ga.areas[f];
    const Vec3 na = ga.normals[f];
    const Vec3 nbv = -na;
    const double abar = 0.5 * (penalty.at(e, f) + penalty.at(fc.nbr_elem, fc.nbr_face));

    Eigen::MatrixXd Baa = Eigen::MatrixXd::Zero(nb, nb), Bba = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd Ja(nb, 3 * m), Ga(nb, 3 * m), Jb(nb, 3 * m), Gb(nb, 3 * m);
    for (size_t q = 0; q < tri.size(); ++q) {
      const Vec3 y = fv[0] + tri.points[q][0] * (fv[1] - fv[0]) + tri.points[q][1] * (fv[2] - fv[0]);
      const double w = tri.weights[q] * 2.0 * area;
      const Vec3 xa = ga.Jinv * (y - ga.x0);
      const Vec3 xb = gb.Jinv * (y - offset - gb.x0);
      const Eigen::VectorXd va = basis.values(xa), vb = basis.values(xb);
      const Eigen::MatrixXd dA = basis.gradients(xa) * ga.Jinv, dB = basis.gradients(xb) * gb.Jinv;
      Ja.setZero();
      Ga.setZero();
      Jb.setZero();
      Gb.setZero();
      for (int i = 0; i < dim; ++i)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < 3; ++b) {
            Ja(i * m + a, b * m + a) = na[b] * va[i];
            Ga(i * m + a, b * m + a) = dA(i, b);
            Jb(i * m + a, b * m + a) = nbv[b] * vb[i];
            Gb(i * m + a, b * m + a) = dB(i, b);
          }
      const Eigen::MatrixXd JaC = Ja * CC;
      // Rows: test function on side y; columns: trial function on side a.
      Baa.noalias() += w * (-0.5 * Ga * JaC.transpose() - 0.5 * JaC * Ga.transpose() + abar * Ja * JaC.transpose());
      Bba.noalias() += w * (-0.5 * Gb * JaC.transpose() - 0.5 * Jb * CC * Ga.transpose() + abar * Jb * JaC.transpose());
    }
    self[ef] = std::move(Baa);
    cross[ef] = std::move(Bba);
  }

  std::array<Triplets, kNumShifts> trips;
  auto scatter = [&](int si, int row_elem, int col_elem, const Eigen::MatrixXd& B) {
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        if (B(i, j) != 0.0) trips[si].emplace_back(row_elem * nb + i, col_elem * nb + j, B(i, j));
  };
  const int s0 = shift_index(Shift{0, 0, 0});
  for (int e = 0; e < ne; ++e) {
    scatter(s0, e, e, Kvol[e]);
    for (int f = 0; f < 4; ++f) {
      const FaceCoupling& fc = couplings.face(e, f);
      scatter(s0, e, e, self[e * 4 + f]);
      scatter(shift_index(negate(fc.shift)), fc.nbr_elem, e, cross[e * 4 + f]);
    }
  }
  ops.A = build_blocks(ops.n0, trips);

  ops.M0 = Eigen::MatrixXd::Zero(ops.n0, ops.n0);
  for (int e = 0; e < ne; ++e)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int a = 0; a < m; ++a)
          ops.M0((e * dim + i) * m + a, (e * dim + j) * m + a) = material.rho() * geom[e].detJ * gram(i, j);
  ops.mass_diagonal = ops.M0.isDiagonal(1e-13 * ops.M0.cwiseAbs().maxCoeff());
  if (ops.mass_diagonal) ops.M0 = Eigen::MatrixXd(ops.M0.diagonal().asDiagonal());
  ops.nnz_per_cell = static_cast<double>(ne) * 5.0 * nb * nb;
  return ops;
}

Discretization discretize(const MethodSpec& method, const UnitCellMesh& mesh, const MaterialModel& material,
                          DgBasisKind dg_basis_kind) {
  Discretization d{method, mesh, material, {}, std::nullopt, {}, {}};
  if (method.family == Family::mass_lumped) {
    d.rule = mass_lumped_rule(method.rule);
    d.basis = nodal_basis_from_rule(*d.rule);
    d.ops = assemble_mass_lumped(mesh, *d.rule, material);
  } else {
    d.basis = dg_basis(method.dg_degree, dg_basis_kind);
    d.penalty = make_penalty(mesh, method.dg_degree, material, method.penalty);
    d.ops = assemble_dg(mesh, d.basis, material, d.penalty);
  }
  return d;
}

}  // namespace tetdisp
