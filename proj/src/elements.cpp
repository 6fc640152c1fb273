#include "tetdisp/elements.hpp"

#include "tetdisp/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace tetdisp {

// Defined in embedded_data.cpp.
const std::string& embedded_file(const std::string& name);

std::string to_string(LumpedRuleName name) {
  switch (name) {
    case LumpedRuleName::ML1: return "ML1";
    case LumpedRuleName::ML2: return "ML2";
    case LumpedRuleName::ML3a: return "ML3a";
    case LumpedRuleName::ML3b: return "ML3b";
  }
  return "?";
}

LumpedRuleName parse_rule_name(const std::string& s) {
  if (s == "ML1") return LumpedRuleName::ML1;
  if (s == "ML2") return LumpedRuleName::ML2;
  if (s == "ML3a") return LumpedRuleName::ML3a;
  if (s == "ML3b") return LumpedRuleName::ML3b;
  throw std::invalid_argument("unknown mass-lumped rule '" + s + "'");
}

int MassLumpedRule::polynomial_degree() const {
  int deg = space_degree;
  if (face_bubble_factor_degree >= 0) deg = std::max(deg, 3 + face_bubble_factor_degree);
  if (interior_bubble_factor_degree >= 0) deg = std::max(deg, 4 + interior_bubble_factor_degree);
  return deg;
}

MassLumpedRule parse_rule_table(const std::string& text) {
  MassLumpedRule rule;
  std::istringstream in(text);
  std::string line;
  bool have_name = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "format_version") {
      int v = 0;
      ls >> v;
      if (v != 1) throw std::invalid_argument("unsupported rule table format_version");
    } else if (key == "name") {
      std::string v;
      ls >> v;
      rule.name = parse_rule_name(v);
      have_name = true;
    } else if (key == "space_degree") {
      ls >> rule.space_degree;
    } else if (key == "enriched_dim") {
      ls >> rule.enriched_dim;
    } else if (key == "exactness_degree") {
      ls >> rule.exactness_degree;
    } else if (key == "face_bubble_factor_degree") {
      ls >> rule.face_bubble_factor_degree;
    } else if (key == "interior_bubble_factor_degree") {
      ls >> rule.interior_bubble_factor_degree;
    } else if (key == "node") {
      Barycentric b;
      double w = 0.0;
      if (!(ls >> b[0] >> b[1] >> b[2] >> b[3] >> w)) throw std::invalid_argument("malformed node line: " + line);
      rule.nodes.push_back(b);
      rule.weights.push_back(w);
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in rule table");
    }
  }
  if (!have_name) throw std::invalid_argument("rule table lacks a name");
  if (static_cast<int>(rule.nodes.size()) != rule.enriched_dim)
    throw std::invalid_argument("rule " + to_string(rule.name) + ": node count does not match enriched_dim");
  double sum = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    if (!(rule.weights[i] > 0.0)) throw std::invalid_argument("rule " + to_string(rule.name) + ": non-positive weight");
    if (std::abs(rule.nodes[i].sum() - 1.0) > 1e-14)
      throw std::invalid_argument("rule " + to_string(rule.name) + ": barycentric coordinates do not sum to one");
    sum += rule.weights[i];
  }
  if (std::abs(sum - kRefTetVolume) > 1e-14)
    throw std::invalid_argument("rule " + to_string(rule.name) + ": weights do not sum to the reference volume");
  return rule;
}

MassLumpedRule mass_lumped_rule(LumpedRuleName name) {
  return parse_rule_table(embedded_file(to_string(name) + ".txt"));
}

Eigen::VectorXd ElementBasis::values(const Vec3& xi) const { return coeffs * eval_monomials(xi, poly_degree); }

Eigen::MatrixXd ElementBasis::gradients(const Vec3& xi) const {
  const Eigen::VectorXd m = eval_monomials(xi, poly_degree);
  Eigen::MatrixXd g(dim, 3);
  for (int d = 0; d < 3; ++d) g.col(d) = grad_coeffs[d] * m;
  return g;
}

namespace {

void fill_gradients(ElementBasis& basis) {
  const int nm = num_monomials(basis.poly_degree);
  for (int d = 0; d < 3; ++d) {
    basis.grad_coeffs[d] = Eigen::MatrixXd::Zero(basis.dim, nm);
    for (int i = 0; i < basis.dim; ++i) {
      Polynomial p;
      p.coeffs().head(nm) = basis.coeffs.row(i).transpose();
      basis.grad_coeffs[d].row(i) = p.derivative(d).coeffs().head(nm).transpose();
    }
  }
}

std::vector<Polynomial> barycentric_monomials(const std::vector<int>& vars, int degree) {
  // All products of the listed barycentric coordinates with total degree == degree.
  std::vector<Polynomial> out;
  if (vars.empty()) return out;
  if (degree == 0) return {Polynomial::constant(1.0)};
  if (vars.size() == 1) {
    Polynomial p = Polynomial::constant(1.0);
    for (int k = 0; k < degree; ++k) p = p * Polynomial::barycentric(vars[0]);
    return {p};
  }
  std::vector<int> rest(vars.begin() + 1, vars.end());
  Polynomial head = Polynomial::constant(1.0);
  for (int k = 0; k <= degree; ++k) {
    for (const auto& tail : barycentric_monomials(rest, degree - k)) out.push_back(head * tail);
    head = head * Polynomial::barycentric(vars[0]);
  }
  return out;
}

std::vector<Polynomial> enriched_generators(const MassLumpedRule& rule) {
  std::vector<Polynomial> gens;
  for (const auto& e : monomial_exponents()) {
    if (e[0] + e[1] + e[2] > rule.space_degree) break;
    gens.push_back(Polynomial::monomial(e[0], e[1], e[2]));
  }
  if (rule.face_bubble_factor_degree >= 0) {
    for (int l = 0; l < 4; ++l) {
      std::vector<int> face;
      Polynomial bubble = Polynomial::constant(1.0);
      for (int i = 0; i < 4; ++i)
        if (i != l) {
          face.push_back(i);
          bubble = bubble * Polynomial::barycentric(i);
        }
      for (const auto& q : barycentric_monomials(face, rule.face_bubble_factor_degree)) gens.push_back(bubble * q);
    }
  }
  if (rule.interior_bubble_factor_degree >= 0) {
    Polynomial bubble = Polynomial::constant(1.0);
    for (int i = 0; i < 4; ++i) bubble = bubble * Polynomial::barycentric(i);
    for (int d = 0; d <= rule.interior_bubble_factor_degree; ++d)
      for (const auto& q : barycentric_monomials({1, 2, 3}, d)) gens.push_back(bubble * q);
  }
  return gens;
}

}  // namespace

ElementBasis nodal_basis_from_rule(const MassLumpedRule& rule) {
  ElementBasis basis;
  basis.kind = BasisKind::nodal_mass_lumped;
  basis.degree = rule.space_degree;
  basis.poly_degree = rule.polynomial_degree();
  basis.nodes = rule.nodes;
  const int nm = num_monomials(basis.poly_degree);

  const auto gens = enriched_generators(rule);
  Eigen::MatrixXd G(nm, static_cast<int>(gens.size()));
  for (size_t j = 0; j < gens.size(); ++j) G.col(static_cast<int>(j)) = gens[j].coeffs().head(nm);

  // Orthonormal spanning set of the enriched space.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  if (rank != rule.enriched_dim)
    throw NumericalError("rule " + to_string(rule.name) + ": enriched space has dimension " + std::to_string(rank) +
                         ", expected " + std::to_string(rule.enriched_dim));
  const Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ()).leftCols(rank);  // nm x rank

  const int n = static_cast<int>(rule.nodes.size());
  Eigen::MatrixXd V(n, rank);  // V(k, j) = span_j(x_k)
  for (int k = 0; k < n; ++k)
    V.row(k) = (Q.transpose() * eval_monomials(MassLumpedRule::to_reference(rule.nodes[k]), basis.poly_degree)).transpose();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  if (!lu.isInvertible())
    throw NumericalError("rule " + to_string(rule.name) + ": nodes are not unisolvent for the enriched space");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  basis.gram_condition = svd.singularValues()(0) / svd.singularValues()(n - 1);

  // w_i = sum_j C_ij span_j with w_i(x_k) = delta_ik, i.e. C V^T = I.
  const Eigen::MatrixXd C = lu.inverse().transpose();
  basis.dim = n;
  basis.coeffs = C * Q.transpose();
  fill_gradients(basis);
  return basis;
}

ElementBasis dg_basis(int p, DgBasisKind kind) {
  if (p < 1 || p > 3) throw std::invalid_argument("DG degree must be 1, 2 or 3");
  ElementBasis basis;
  basis.kind = BasisKind::dg_modal;
  basis.degree = p;
  basis.poly_degree = p;
  basis.dim = num_monomials(p);

  const auto& exps = monomial_exponents();
  Eigen::MatrixXd gram(basis.dim, basis.dim);
  for (int i = 0; i < basis.dim; ++i)
    for (int j = 0; j < basis.dim; ++j)
      gram(i, j) = tet_monomial_integral(exps[i][0] + exps[j][0], exps[i][1] + exps[j][1], exps[i][2] + exps[j][2]);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  basis.gram_condition = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();

  if (kind == DgBasisKind::orthonormal) {
    // phi = L^{-1} m gives int phi phi^T = I on the reference element.
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    basis.coeffs = llt.matrixL().solve(Eigen::MatrixXd::Identity(basis.dim, basis.dim));
    basis.gram_condition = 1.0;
  } else {
    basis.coeffs = Eigen::MatrixXd::Identity(basis.dim, basis.dim);
  }
  fill_gradients(basis);
  return basis;
}

Eigen::MatrixXd reference_gram(const ElementBasis& basis) {
  const auto q = simplex_quadrature(3, 2 * basis.poly_degree);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis.dim, basis.dim);
  for (size_t k = 0; k < q.size(); ++k) {
    const Eigen::VectorXd v = basis.values(q.points[k]);
    G.noalias() += q.weights[k] * v * v.transpose();
  }
  return G;
}

}  // namespace tetdisp
