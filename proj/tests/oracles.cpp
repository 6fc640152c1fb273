#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tetdisp::oracle {

namespace {

using Key = std::array<long long, 3>;

// Lattice coordinate reduced modulo N and rounded for use as a map key.
Key lattice_key(const Vec3& y, int N) {
  Key k;
  for (int c = 0; c < 3; ++c) {
    double v = std::fmod(y[c], static_cast<double>(N));
    if (v < 0) v += N;
    long long r = std::llround(v * 1e7);
    if (r == static_cast<long long>(N) * 10000000LL) r = 0;
    k[c] = r;
  }
  return k;
}

struct GlobalElement {
  std::array<Vec3, 4> x;  // physical corners
  std::array<Vec3, 4> y;  // lattice corners
  int local = 0;          // element index inside the cell
};

std::vector<GlobalElement> global_elements(const UnitCellMesh& mesh, int N) {
  std::vector<GlobalElement> out;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int e = 0; e < mesh.num_tets(); ++e) {
          GlobalElement g;
          g.local = e;
          const auto yl = mesh.tet_lattice(e);
          for (int k = 0; k < 4; ++k) {
            g.y[k] = yl[k] + Vec3(a, b, c);
            g.x[k] = mesh.transform.T * g.y[k];
          }
          out.push_back(g);
        }
  return out;
}

Mat3 jacobian(const std::array<Vec3, 4>& x) {
  Mat3 J;
  for (int c = 0; c < 3; ++c) J.col(c) = x[c + 1] - x[0];
  return J;
}

// Physical gradient of basis function i (as a 3-vector) at reference point xi.
Eigen::MatrixXd physical_gradients(const ElementBasis& basis, const Mat3& Jinv, const Vec3& xi) {
  return basis.gradients(xi) * Jinv;  // dim x 3
}

// Gradient tensor G(b, a) = d_b u_a for u = phi e_comp.
Eigen::MatrixXd grad_tensor(const Eigen::RowVectorXd& g, int comp, int m) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, m);
  G.col(comp) = g.transpose();
  return G;
}

Eigen::MatrixXd jump_tensor(const Vec3& n, double v, int comp, int m) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, m);
  G.col(comp) = v * n;
  return G;
}

void add_volume_terms(const ElementBasis& basis, const MaterialModel& mat, const std::array<Vec3, 4>& x,
                      const std::vector<int>& dofs, Eigen::MatrixXd& A) {
  const int m = mat.m();
  const Mat3 J = jacobian(x);
  const Mat3 Jinv = J.inverse();
  const double det = std::abs(J.determinant());
  const auto& q = cached_simplex_quadrature(3, 2 * basis.poly_degree);
  for (size_t k = 0; k < q.size(); ++k) {
    const Eigen::MatrixXd g = physical_gradients(basis, Jinv, q.points[k]);
    const double w = q.weights[k] * det;
    for (int i = 0; i < basis.dim; ++i)
      for (int a = 0; a < m; ++a) {
        const Eigen::MatrixXd Gi = grad_tensor(g.row(i), a, m);
        for (int j = 0; j < basis.dim; ++j)
          for (int c = 0; c < m; ++c)
            A(dofs[i * m + a], dofs[j * m + c]) += w * mat.energy(Gi, grad_tensor(g.row(j), c, m));
      }
  }
}

GlobalSystem assemble_ml(const Discretization& d, int N) {
  const auto& rule = *d.rule;
  const int m = d.material.m();
  const auto elems = global_elements(d.mesh, N);
  std::map<Key, int> node_id;
  std::vector<std::vector<int>> elem_nodes;
  for (const auto& g : elems) {
    std::vector<int> ids;
    for (const auto& b : rule.nodes) {
      Vec3 y = Vec3::Zero();
      for (int k = 0; k < 4; ++k) y += b[k] * g.y[k];
      const Key key = lattice_key(y, N);
      auto it = node_id.find(key);
      if (it == node_id.end()) it = node_id.emplace(key, static_cast<int>(node_id.size())).first;
      ids.push_back(it->second);
    }
    elem_nodes.push_back(ids);
  }
  const int n = static_cast<int>(node_id.size()) * m;
  GlobalSystem sys{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (size_t e = 0; e < elems.size(); ++e) {
    std::vector<int> dofs;
    for (int id : elem_nodes[e])
      for (int a = 0; a < m; ++a) dofs.push_back(id * m + a);
    add_volume_terms(d.basis, d.material, elems[e].x, dofs, sys.A);
    const double det = std::abs(jacobian(elems[e].x).determinant());
    for (size_t k = 0; k < rule.nodes.size(); ++k)
      for (int a = 0; a < m; ++a) sys.M(dofs[k * m + a], dofs[k * m + a]) += rule.weights[k] * det * d.material.rho();
  }
  return sys;
}

GlobalSystem assemble_sipdg(const Discretization& d, int N) {
  const ElementBasis& basis = d.basis;
  const MaterialModel& mat = d.material;
  const int m = mat.m();
  const int nb = basis.dim * m;
  const auto elems = global_elements(d.mesh, N);
  const int n = static_cast<int>(elems.size()) * nb;
  GlobalSystem sys{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};

  auto dofs_of = [&](size_t e) {
    std::vector<int> v(static_cast<size_t>(nb));
    for (int k = 0; k < nb; ++k) v[static_cast<size_t>(k)] = static_cast<int>(e) * nb + k;
    return v;
  };

  const auto& q3 = cached_simplex_quadrature(3, 2 * basis.poly_degree);
  for (size_t e = 0; e < elems.size(); ++e) {
    const auto dofs = dofs_of(e);
    add_volume_terms(basis, mat, elems[e].x, dofs, sys.A);
    const double det = std::abs(jacobian(elems[e].x).determinant());
    for (size_t k = 0; k < q3.size(); ++k) {
      const Eigen::VectorXd v = basis.values(q3.points[k]);
      for (int i = 0; i < basis.dim; ++i)
        for (int j = 0; j < basis.dim; ++j)
          for (int a = 0; a < m; ++a)
            sys.M(dofs[i * m + a], dofs[j * m + a]) += q3.weights[k] * det * mat.rho() * v[i] * v[j];
    }
  }

  // Pair faces through the keys of their lattice centroids.
  std::map<Key, std::vector<std::pair<int, int>>> faces;
  for (size_t e = 0; e < elems.size(); ++e)
    for (int f = 0; f < 4; ++f) {
      Vec3 c = Vec3::Zero();
      for (int k = 0; k < 4; ++k)
        if (k != f) c += elems[e].y[k] / 3.0;
      faces[lattice_key(c, N)].emplace_back(static_cast<int>(e), f);
    }

  const auto& q2 = cached_simplex_quadrature(2, 2 * basis.poly_degree);
  for (const auto& [key, sides] : faces) {
    if (sides.size() != 2) throw std::runtime_error("oracle: face without a unique partner");
    const auto [ea, fa] = sides[0];
    const auto [eb, fb] = sides[1];
    const GlobalElement& A = elems[static_cast<size_t>(ea)];
    const GlobalElement& B = elems[static_cast<size_t>(eb)];
    std::array<Vec3, 3> fv;
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != fa) fv[k++] = A.x[i];
    Vec3 na = (fv[1] - fv[0]).cross(fv[2] - fv[0]);
    const double area = 0.5 * na.norm();
    na.normalize();
    if (na.dot(fv[0] - A.x[fa]) < 0) na = -na;
    // Physical offset that carries the face of B onto the face of A.
    Vec3 cb = Vec3::Zero(), ca = Vec3::Zero();
    for (int i = 0; i < 4; ++i) {
      if (i != fb) cb += B.x[i] / 3.0;
      if (i != fa) ca += A.x[i] / 3.0;
    }
    const Vec3 shift = ca - cb;
    const double alpha = 0.5 * (d.penalty.at(A.local, fa) + d.penalty.at(B.local, fb));

    const Mat3 JA = jacobian(A.x), JB = jacobian(B.x);
    const Mat3 JAi = JA.inverse(), JBi = JB.inverse();
    const auto dA = dofs_of(static_cast<size_t>(ea)), dB = dofs_of(static_cast<size_t>(eb));
    for (size_t qi = 0; qi < q2.size(); ++qi) {
      const Vec3 x = fv[0] + q2.points[qi][0] * (fv[1] - fv[0]) + q2.points[qi][1] * (fv[2] - fv[0]);
      const double w = q2.weights[qi] * 2.0 * area;
      const Vec3 xa = JAi * (x - A.x[0]);
      const Vec3 xb = JBi * (x - shift - B.x[0]);
      const Eigen::VectorXd va = basis.values(xa), vb = basis.values(xb);
      const Eigen::MatrixXd ga = physical_gradients(basis, JAi, xa), gb = physical_gradients(basis, JBi, xb);

      // Trace data for every dof on either side: jump tensor and half the flux gradient.
      struct Trace {
        int dof;
        Eigen::MatrixXd jump;
        Eigen::MatrixXd grad;
      };
      std::vector<Trace> tr;
      for (int i = 0; i < basis.dim; ++i)
        for (int a = 0; a < m; ++a) {
          tr.push_back({dA[i * m + a], jump_tensor(na, va[i], a, m), grad_tensor(ga.row(i), a, m)});
          tr.push_back({dB[i * m + a], jump_tensor(-na, vb[i], a, m), grad_tensor(gb.row(i), a, m)});
        }
      for (const auto& t : tr)
        for (const auto& s : tr) {
          // test t, trial s
          const double v = -0.5 * mat.energy(t.jump, s.grad) - 0.5 * mat.energy(t.grad, s.jump) +
                           alpha * mat.energy(t.jump, s.jump);
          sys.A(t.dof, s.dof) += w * v;
        }
    }
  }
  return sys;
}

}  // namespace

GlobalSystem assemble_global(const Discretization& d, int N) {
  return d.method.family == Family::mass_lumped ? assemble_ml(d, N) : assemble_sipdg(d, N);
}

Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  const Eigen::MatrixXd As = 0.5 * (A + A.transpose());
  const Eigen::MatrixXd Ms = 0.5 * (M + M.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(As, Ms, Eigen::EigenvaluesOnly);
  Eigen::VectorXd s = es.eigenvalues();
  std::sort(s.data(), s.data() + s.size());
  return s;
}

Eigen::VectorXd symbol_union(const LocalOperatorSet& ops, int N) {
  const BrillouinDomain dom{ops.transform};
  std::vector<double> all;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        const Vec3 k = dom.kappa_z(Shift{a, b, c}, N);
        const auto sys = eig_symbol(ops, symbol_matrix(ops, k), false);
        all.insert(all.end(), sys.s.data(), sys.s.data() + sys.s.size());
      }
  std::sort(all.begin(), all.end());
  return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

GlobalSystem dense_from_blocks(const LocalOperatorSet& ops, int N) {
  const int n0 = ops.n0;
  const int n = N * N * N * n0;
  GlobalSystem sys{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  auto wrap = [N](int v) { return ((v % N) + N) % N; };
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        const int cell = (a * N + b) * N + c;
        sys.M.block(cell * n0, cell * n0, n0, n0) = ops.M0;
        for (int si = 0; si < kNumShifts; ++si) {
          const Shift s = shift_from_index(si);
          const int nbr = (wrap(a + s[0]) * N + wrap(b + s[1])) * N + wrap(c + s[2]);
          sys.A.block(cell * n0, nbr * n0, n0, n0) += Eigen::MatrixXd(ops.A[static_cast<size_t>(si)]);
        }
      }
  return sys;
}

double spectrum_mismatch(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace tetdisp::oracle
