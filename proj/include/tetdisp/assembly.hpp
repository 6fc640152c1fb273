#pragma once

#include "tetdisp/elements.hpp"
#include "tetdisp/lattice_mesh.hpp"
#include "tetdisp/materials.hpp"
#include "tetdisp/method.hpp"

#include <Eigen/Sparse>

#include <array>
#include <optional>
#include <vector>

namespace tetdisp {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Local node of an element resolved to an owned node of Omega0 plus the
/// lattice shift of the cell it lives in.
struct NodeRef {
  int node = 0;
  Shift shift{0, 0, 0};
};

/// Cell mass block and the 27 coupling stiffness blocks A(Omega0, Omega_s).
///
/// A[shift_index(s)](i, j) couples test function i of Omega0 with trial
/// function j of Omega_s. Degrees of freedom are ordered node-major
/// (node * m + comp) for mass-lumped methods and element-major
/// ((elem * dim + j) * m + comp) for SIPDG.
struct LocalOperatorSet {
  int n0 = 0;
  int m = 1;
  Family family = Family::mass_lumped;
  Eigen::MatrixXd M0;
  bool mass_diagonal = false;
  std::array<SparseMat, kNumShifts> A;
  LatticeTransform transform;

  /// Structural non-zeros of the global stiffness matrix per cell.
  double nnz_per_cell = 0.0;

  // Mass-lumped metadata.
  std::vector<Vec3> node_positions;              // physical position of each owned node in Omega0
  std::vector<std::vector<NodeRef>> elem_nodes;  // per element, per local node

  // SIPDG metadata.
  int elem_dim = 0;

  bool has_block(const Shift& s) const { return A[static_cast<size_t>(shift_index(s))].nonZeros() > 0; }
  const SparseMat& block(const Shift& s) const { return A[static_cast<size_t>(shift_index(s))]; }
  /// max |entry| over all blocks; the scale used by relative tolerances.
  double scale() const;
};

/// Per (element, face) penalty values alpha_e|f (units 1/length).
struct PenaltySpec {
  PenaltyVariant variant = PenaltyVariant::none;
  std::vector<double> alpha;     // index elem * 4 + face, value seen from that element's side
  std::vector<double> nu;        // |f| / |e|
  std::vector<double> diameter;  // inscribed-sphere diameter per element

  double at(int elem, int face) const { return alpha[static_cast<size_t>(elem * 4 + face)]; }
};

/// Element geometry helpers shared by assembly, penalties and projections.
struct ElementGeometry {
  Vec3 x0 = Vec3::Zero();
  Mat3 J = Mat3::Identity();     // columns x_c - x_0
  Mat3 Jinv = Mat3::Identity();
  double detJ = 0.0;             // > 0 after orientation
  std::array<Vec3, 4> normals;   // outward unit normal of the face opposite corner f
  std::array<double, 4> areas{};
  double volume() const { return detJ / 6.0; }
};

ElementGeometry element_geometry(const std::array<Vec3, 4>& corners);

/// Inscribed-sphere diameter 6V / sum of face areas.
double inscribed_diameter(const std::array<Vec3, 4>& corners);

/// Element stiffness int_e (grad u)^t : C : grad w for the basis, (dim*m) x (dim*m),
/// local ordering j * m + comp.
Eigen::MatrixXd element_stiffness(const ElementBasis& basis, const ElementGeometry& geom, const MaterialModel& mat);

LocalOperatorSet assemble_mass_lumped(const UnitCellMesh& mesh, const MassLumpedRule& rule,
                                      const MaterialModel& material);

LocalOperatorSet assemble_dg(const UnitCellMesh& mesh, int p, const MaterialModel& material,
                             PenaltyVariant variant, DgBasisKind basis_kind = DgBasisKind::orthonormal);

/// Same as above with an explicit basis (used by the basis-invariance checks).
LocalOperatorSet assemble_dg(const UnitCellMesh& mesh, const ElementBasis& basis, const MaterialModel& material,
                             const PenaltySpec& penalty);

PenaltySpec penalty_inscribed_sphere(const UnitCellMesh& mesh, int p);
PenaltySpec penalty_eigen_bound(const UnitCellMesh& mesh, int p, const MaterialModel& material);
PenaltySpec make_penalty(const UnitCellMesh& mesh, int p, const MaterialModel& material, PenaltyVariant variant);

/// Everything needed downstream for one method on one mesh and material.
struct Discretization {
  MethodSpec method;
  UnitCellMesh mesh;
  MaterialModel material;
  ElementBasis basis;
  std::optional<MassLumpedRule> rule;
  PenaltySpec penalty;
  LocalOperatorSet ops;
};

Discretization discretize(const MethodSpec& method, const UnitCellMesh& mesh, const MaterialModel& material,
                          DgBasisKind dg_basis_kind = DgBasisKind::orthonormal);

}  // namespace tetdisp
