#include "tetdisp/lattice_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tetdisp {

namespace {

constexpr double kSnap = 1e-9;

double signed_volume(const std::array<Vec3, 4>& p) {
  return (p[1] - p[0]).dot((p[2] - p[0]).cross(p[3] - p[0])) / 6.0;
}

// The six Kuhn tetrahedra of the cube [0,1]^3 (paths 0 -> e_a -> e_a+e_b -> 1).
std::vector<std::array<Vec3, 4>> kuhn_tets(const Vec3& origin, double scale) {
  std::vector<std::array<Vec3, 4>> out;
  std::array<int, 3> perm{0, 1, 2};
  do {
    std::array<Vec3, 4> t;
    Vec3 p = Vec3::Zero();
    t[0] = origin;
    for (int k = 0; k < 3; ++k) {
      p[perm[k]] += 1.0;
      t[k + 1] = origin + scale * p;
    }
    out.push_back(t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool same_point(const Vec3& a, const Vec3& b) { return (a - b).cwiseAbs().maxCoeff() < kSnap; }

}  // namespace

LatticeTransform LatticeTransform::from_matrix(const Mat3& T) {
  if (!(T.determinant() > 0.0)) throw std::invalid_argument("lattice transform must have det(T) > 0");
  LatticeTransform out;
  out.T = T;
  out.Tinv_t = T.inverse().transpose();
  return out;
}

LatticeTransform disphenoid_transform() {
  Mat3 T;
  T << 1.0, -1.0 / 3.0, -1.0 / 3.0,
       0.0, std::sqrt(8.0 / 9.0), -std::sqrt(2.0 / 9.0),
       0.0, 0.0, std::sqrt(2.0 / 3.0);
  return LatticeTransform::from_matrix(T);
}

std::pair<Vec3, Shift> reduce_to_cell(const Vec3& lattice, double snap) {
  Vec3 r;
  Shift s{};
  for (int d = 0; d < 3; ++d) {
    const double f = std::floor(lattice[d] + snap);
    s[d] = static_cast<int>(f);
    r[d] = lattice[d] - f;
    if (std::abs(r[d]) < snap) r[d] = 0.0;
  }
  return {r, s};
}

std::array<Vec3, 4> UnitCellMesh::tet_lattice(int e) const {
  std::array<Vec3, 4> p;
  for (int i = 0; i < 4; ++i) p[i] = lattice_point(tets[e][i]);
  return p;
}

std::array<Vec3, 4> UnitCellMesh::tet_physical(int e) const {
  std::array<Vec3, 4> p;
  for (int i = 0; i < 4; ++i) p[i] = physical_point(tets[e][i]);
  return p;
}

double UnitCellMesh::tet_volume(int e) const { return signed_volume(tet_physical(e)); }

UnitCellMesh make_cell_mesh(const std::vector<std::array<Vec3, 4>>& lattice_tets,
                            const LatticeTransform& transform) {
  UnitCellMesh mesh;
  mesh.transform = transform;
  for (auto tet : lattice_tets) {
    std::array<Vec3, 4> phys;
    for (int i = 0; i < 4; ++i) phys[i] = transform.T * tet[i];
    const double vol = signed_volume(phys);
    if (std::abs(vol) < 1e-14) throw TopologyError("degenerate tetrahedron in cell pattern");
    if (vol < 0.0) std::swap(tet[2], tet[3]);

    Tet t;
    for (int i = 0; i < 4; ++i) {
      auto [rep, shift] = reduce_to_cell(tet[i]);
      int id = -1;
      for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (same_point(mesh.vertices[v], rep)) {
          id = static_cast<int>(v);
          break;
        }
      }
      if (id < 0) {
        id = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(rep);
      }
      t[i] = TetCorner{id, shift};
    }
    mesh.tets.push_back(t);
  }
  mesh.cell_volume = transform.det();
  mesh.avg_elem_volume = mesh.cell_volume / static_cast<double>(mesh.tets.size());
  return mesh;
}

UnitCellMesh build_sliced_cube_cell(const LatticeTransform& transform) {
  return make_cell_mesh(kuhn_tets(Vec3::Zero(), 1.0), transform);
}

UnitCellMesh build_disphenoid_cell() { return build_sliced_cube_cell(disphenoid_transform()); }

UnitCellMesh build_distorted_cell(const DistortionParams& params) {
  if (!(params.delta >= 0.0 && params.delta < 1.0))
    throw std::invalid_argument("distortion delta must lie in [0,1)");
  if (!(params.tz > 0.0)) throw std::invalid_argument("z-scale tz must be positive");

  const Vec3 centre(0.5, 0.5, 0.5);
  const Vec3 moved = 0.5 * (1.0 + params.delta) * Vec3::Ones();
  std::vector<std::array<Vec3, 4>> tets;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (auto t : kuhn_tets(Vec3(0.5 * i, 0.5 * j, 0.5 * k), 0.5)) {
          for (auto& p : t)
            if (same_point(p, centre)) p = moved;
          tets.push_back(t);
        }
  UnitCellMesh mesh = make_cell_mesh(tets, disphenoid_transform());
  return params.tz == 1.0 ? mesh : apply_z_scaling(mesh, params.tz);
}

UnitCellMesh apply_z_scaling(const UnitCellMesh& mesh, double tz) {
  if (!(tz > 0.0)) throw std::invalid_argument("z-scale tz must be positive");
  UnitCellMesh out = mesh;
  Mat3 T = mesh.transform.T;
  T.row(2) *= tz;
  out.transform = LatticeTransform::from_matrix(T);
  out.cell_volume = out.transform.det();
  out.avg_elem_volume = out.cell_volume / static_cast<double>(out.tets.size());
  return out;
}

CouplingTable enumerate_couplings(const UnitCellMesh& mesh) {
  const int ne = mesh.num_tets();
  CouplingTable table;
  table.faces.resize(static_cast<size_t>(ne) * 4);

  auto face_points = [&](int e, int f) {
    std::array<Vec3, 3> pts;
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != f) pts[k++] = mesh.lattice_point(mesh.tets[e][i]);
    return pts;
  };
  auto matches = [](const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b, const Vec3& offset) {
    for (const auto& p : a) {
      bool found = false;
      for (const auto& q : b) found = found || same_point(p, q + offset);
      if (!found) return false;
    }
    return true;
  };

  for (int e = 0; e < ne; ++e) {
    for (int f = 0; f < 4; ++f) {
      const auto fa = face_points(e, f);
      const Vec3 ca = (fa[0] + fa[1] + fa[2]) / 3.0;
      int hits = 0;
      for (int e2 = 0; e2 < ne; ++e2) {
        for (int f2 = 0; f2 < 4; ++f2) {
          if (e2 == e && f2 == f) continue;
          const auto fb = face_points(e2, f2);
          const Vec3 cb = (fb[0] + fb[1] + fb[2]) / 3.0;
          const Vec3 d = ca - cb;
          Shift s{};
          bool integral = true;
          for (int k = 0; k < 3; ++k) {
            s[k] = static_cast<int>(std::lround(d[k]));
            integral = integral && std::abs(d[k] - s[k]) < kSnap && std::abs(s[k]) <= 1;
          }
          if (!integral || !matches(fa, fb, to_vec(s))) continue;
          table.faces[static_cast<size_t>(e * 4 + f)] = FaceCoupling{e, f, e2, f2, s};
          ++hits;
        }
      }
      if (hits != 1)
        throw TopologyError("face " + std::to_string(f) + " of tet " + std::to_string(e) + " has " +
                            std::to_string(hits) + " periodic partners");
    }
  }

  std::set<VertexCoupling> links;
  for (const auto& t : mesh.tets)
    for (const auto& a : t)
      for (const auto& b : t)
        links.insert(VertexCoupling{a.vertex, b.vertex,
                                    Shift{b.shift[0] - a.shift[0], b.shift[1] - a.shift[1], b.shift[2] - a.shift[2]}});
  table.vertices.assign(links.begin(), links.end());
  return table;
}

}  // namespace tetdisp
