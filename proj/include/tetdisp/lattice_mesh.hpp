#pragma once

#include "tetdisp/common.hpp"

#include <vector>

namespace tetdisp {

/// Linear map from lattice coordinates to physical coordinates, x -> T x.
struct LatticeTransform {
  Mat3 T = Mat3::Identity();
  Mat3 Tinv_t = Mat3::Identity();  // T^{-t}, maps [0,2pi)^3 onto the wave-vector cell

  static LatticeTransform from_matrix(const Mat3& T);

  double det() const { return T.determinant(); }
  Vec3 cell_origin(const Shift& s) const { return T * to_vec(s); }
};

/// The tetragonal disphenoid map with rows [1,-1/3,-1/3; 0,sqrt(8/9),-sqrt(2/9); 0,0,sqrt(2/3)].
LatticeTransform disphenoid_transform();

/// A tetrahedron corner: an owned vertex of the cell plus the lattice shift of
/// the cell the corner lives in.
struct TetCorner {
  int vertex = 0;
  Shift shift{0, 0, 0};
};

using Tet = std::array<TetCorner, 4>;

/// Periodic unit cell Omega0 subdivided into tetrahedra. Vertices are stored
/// in pre-transform lattice coordinates, reduced to [0,1)^3.
struct UnitCellMesh {
  std::vector<Vec3> vertices;
  std::vector<Tet> tets;
  LatticeTransform transform;
  double cell_volume = 0.0;
  double avg_elem_volume = 0.0;

  Vec3 lattice_point(const TetCorner& c) const { return vertices[c.vertex] + to_vec(c.shift); }
  Vec3 physical_point(const TetCorner& c) const { return transform.T * lattice_point(c); }
  std::array<Vec3, 4> tet_physical(int e) const;
  std::array<Vec3, 4> tet_lattice(int e) const;
  double tet_volume(int e) const;  // signed
  int num_tets() const { return static_cast<int>(tets.size()); }
};

struct DistortionParams {
  double delta = 0.0;  // displacement of the central node, in [0,1)
  double tz = 1.0;     // z-scale factor applied to the transform
};

/// Cube [0,1)^3 cut by the planes x=y, x=z, y=z, mapped by the disphenoid transform.
UnitCellMesh build_disphenoid_cell();

/// Same slicing with an arbitrary transform (identity gives the plain cube).
UnitCellMesh build_sliced_cube_cell(const LatticeTransform& transform);

/// 2x2x2 copies of the sliced half-cube with the central node moved along the diagonal.
UnitCellMesh build_distorted_cell(const DistortionParams& params);

/// Scales the third physical coordinate by tz.
UnitCellMesh apply_z_scaling(const UnitCellMesh& mesh, double tz);

/// Mesh with vertices given directly in lattice coordinates; used by the builders.
UnitCellMesh make_cell_mesh(const std::vector<std::array<Vec3, 4>>& lattice_tets,
                            const LatticeTransform& transform);

/// Face adjacency across the periodic lattice. Face f of a tet is opposite corner f.
struct FaceCoupling {
  int elem = 0;
  int face = 0;
  int nbr_elem = 0;
  int nbr_face = 0;
  Shift shift{0, 0, 0};  // neighbor lives in cell Omega_shift
};

/// Two owned vertices connected through an element (self-links included).
struct VertexCoupling {
  int vertex = 0;
  int nbr_vertex = 0;
  Shift shift{0, 0, 0};
  friend bool operator<(const VertexCoupling& a, const VertexCoupling& b) {
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    if (a.nbr_vertex != b.nbr_vertex) return a.nbr_vertex < b.nbr_vertex;
    return a.shift < b.shift;
  }
  friend bool operator==(const VertexCoupling& a, const VertexCoupling& b) = default;
};

struct CouplingTable {
  std::vector<FaceCoupling> faces;  // one entry per (elem, face), ordered by elem then face
  std::vector<VertexCoupling> vertices;

  const FaceCoupling& face(int elem, int f) const { return faces[static_cast<size_t>(elem * 4 + f)]; }
};

/// Throws TopologyError if some face has no periodic partner.
CouplingTable enumerate_couplings(const UnitCellMesh& mesh);

/// Reduces a lattice coordinate to [0,1)^3 with a snap tolerance, returning the shift.
std::pair<Vec3, Shift> reduce_to_cell(const Vec3& lattice, double snap = 1e-9);

}  // namespace tetdisp
