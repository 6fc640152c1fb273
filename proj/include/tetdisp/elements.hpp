#pragma once

#include "tetdisp/common.hpp"
#include "tetdisp/quadrature.hpp"

#include <string>
#include <vector>

namespace tetdisp {

enum class LumpedRuleName { ML1, ML2, ML3a, ML3b };

std::string to_string(LumpedRuleName name);
LumpedRuleName parse_rule_name(const std::string& s);

using Barycentric = Eigen::Vector4d;

/// Nodal quadrature whose points double as the nodes of an enriched Lagrange space.
struct MassLumpedRule {
  LumpedRuleName name = LumpedRuleName::ML1;
  std::vector<Barycentric> nodes;
  std::vector<double> weights;  // sum to the reference tetrahedron volume 1/6
  int space_degree = 1;         // p: the full polynomial space contained in the element
  int enriched_dim = 4;
  int exactness_degree = 1;
  // The enriched space is P^p + sum_faces b_f P^{face}(f) + b_e P^{interior};
  // -1 means no bubbles of that kind.
  int face_bubble_factor_degree = -1;
  int interior_bubble_factor_degree = -1;

  /// Highest total degree of a function in the enriched space.
  int polynomial_degree() const;
  static Vec3 to_reference(const Barycentric& b) { return b.tail<3>(); }
};

/// Embedded rule tables (data/rules/*.txt); parsing validates node count and weights.
MassLumpedRule mass_lumped_rule(LumpedRuleName name);
MassLumpedRule parse_rule_table(const std::string& text);

enum class BasisKind { nodal_mass_lumped, dg_modal };
enum class DgBasisKind { orthonormal, monomial };

/// Polynomial basis on the reference tetrahedron, stored as monomial coefficients.
struct ElementBasis {
  BasisKind kind = BasisKind::dg_modal;
  int degree = 1;       // p
  int poly_degree = 1;  // highest total degree in the span
  int dim = 0;
  Eigen::MatrixXd coeffs;                  // dim x num_monomials(poly_degree)
  std::array<Eigen::MatrixXd, 3> grad_coeffs;  // d/dx, d/dy, d/dz of coeffs
  std::vector<Barycentric> nodes;          // nodal bases only
  double gram_condition = 1.0;             // condition of the reference Gram (modal) or Vandermonde (nodal)

  Eigen::VectorXd values(const Vec3& xi) const;
  /// dim x 3 matrix of reference gradients.
  Eigen::MatrixXd gradients(const Vec3& xi) const;
};

ElementBasis nodal_basis_from_rule(const MassLumpedRule& rule);
ElementBasis dg_basis(int p, DgBasisKind kind = DgBasisKind::orthonormal);

/// Reference Gram matrix int_ref phi_i phi_j, computed with exact quadrature.
Eigen::MatrixXd reference_gram(const ElementBasis& basis);

}  // namespace tetdisp
