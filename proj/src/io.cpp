#include "tetdisp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace tetdisp {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {"method", "material", "mesh", "lambda", "N_E", "e_disp",
                                                "e_vec", "dt", "N_dt", "n_vec", "n_mat", "n_comp", "e_floor"};
  return cols;
}

const std::vector<std::string>& kappa_columns() {
  static const std::vector<std::string> cols = {"method", "material", "kappa_x", "kappa_y", "kappa_z",
                                                "s_digest", "e_disp", "e_vec"};
  return cols;
}

void write_reports_csv(std::ostream& os, const std::vector<MethodStudy>& studies) {
  const auto& cols = report_columns();
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\r\n";
  for (const auto& st : studies)
    for (const auto& r : st.rows) {
      os << csv_escape(r.method) << ',' << csv_escape(st.material_label) << ',' << csv_escape(st.mesh_label);
      for (double v : {r.lambda, r.N_E, r.e_disp, r.e_vec, r.dt, r.N_dt, r.n_vec, r.n_mat, r.n_comp, r.e_floor})
        os << ',' << format_double(v);
      os << "\r\n";
    }
}

namespace {

Json fit_to_json(const ConvergenceFit& f) {
  Json j;
  j["alpha"] = f.alpha;
  j["beta"] = f.beta;
  j["residual"] = f.residual;
  j["ne_min"] = f.ne_min;
  j["ne_max"] = f.ne_max;
  j["samples"] = f.samples;
  j["non_monotone"] = f.non_monotone;
  j["exact_zero"] = f.exact_zero;
  j["order"] = f.order;
  j["alpha_at_order"] = f.alpha_at_order;
  return j;
}

}  // namespace

Json fits_json(const std::vector<MethodStudy>& studies) {
  Json arr = Json::array();
  for (const auto& st : studies) {
    Json j;
    j["method"] = st.method.name();
    j["material"] = st.material_label;
    j["mesh"] = st.mesh_label;
    j["stages"] = st.scheme.K;
    j["c_K"] = st.scheme.cK;
    j["s_max"] = st.scheme.s_max;
    j["dt"] = st.scheme.dt;
    j["e_disp"] = fit_to_json(st.fit_disp);
    j["e_vec"] = fit_to_json(st.fit_vec);
    arr.push_back(j);
  }
  return arr;
}

void write_table_csv(std::ostream& os, const ReproducedTable& table) {
  os << "method";
  if (!table.rows.empty())
    for (const auto& c : table.rows.front().cells) os << ',' << c.column << ',' << c.column << "_published," << c.column << "_rel_dev";
  os << "\r\n";
  for (const auto& row : table.rows) {
    os << csv_escape(row.method);
    for (const auto& c : row.cells)
      os << ',' << format_double(c.computed) << ',' << (c.published ? format_double(*c.published) : "") << ','
         << (std::isnan(c.rel_deviation()) ? "" : format_double(c.rel_deviation()));
    os << "\r\n";
  }
}

Json table_json(const ReproducedTable& table) {
  Json j;
  j["table"] = table.id;
  j["title"] = table.title;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r;
    r["method"] = row.method;
    for (const auto& c : row.cells) {
      Json cell;
      cell["computed"] = c.computed;
      cell["published"] = c.published ? Json(*c.published) : Json(nullptr);
      cell["rel_dev"] = std::isnan(c.rel_deviation()) ? Json(nullptr) : Json(c.rel_deviation());
      r[c.column] = cell;
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

std::string eigenvalue_digest(const Eigen::VectorXd& s) {
  std::uint64_t h = 1469598103934665603ULL;
  char buf[32];
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const int n = std::snprintf(buf, sizeof(buf), "%.12g;", s[i]);
    for (int k = 0; k < n; ++k) {
      h ^= static_cast<unsigned char>(buf[k]);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string kappa_row(const std::string& method, const std::string& material, const Vec3& kappa,
                      const Eigen::VectorXd& eigenvalues, const KappaErrors& errors) {
  std::ostringstream os;
  os << csv_escape(method) << ',' << csv_escape(material) << ',' << format_double(kappa.x()) << ','
     << format_double(kappa.y()) << ',' << format_double(kappa.z()) << ',' << eigenvalue_digest(eigenvalues) << ','
     << format_double(errors.e_disp) << ',' << format_double(errors.e_vec);
  return os.str();
}

namespace {

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json dense_json(const Eigen::MatrixXd& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

Json mesh_json(const UnitCellMesh& mesh) {
  Json j;
  j["transform"] = dense_json(mesh.transform.T);
  j["cell_volume"] = mesh.cell_volume;
  j["avg_elem_volume"] = mesh.avg_elem_volume;
  Json verts = Json::array();
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    Json v;
    v["lattice"] = vec_json(mesh.vertices[i]);
    v["physical"] = vec_json(mesh.transform.T * mesh.vertices[i]);
    verts.push_back(v);
  }
  j["vertices"] = verts;
  Json tets = Json::array();
  for (int e = 0; e < mesh.num_tets(); ++e) {
    Json t;
    Json corners = Json::array();
    for (const auto& c : mesh.tets[static_cast<size_t>(e)])
      corners.push_back(Json{{"vertex", c.vertex}, {"shift", Json::array({c.shift[0], c.shift[1], c.shift[2]})}});
    t["corners"] = corners;
    t["volume"] = mesh.tet_volume(e);
    tets.push_back(t);
  }
  j["tets"] = tets;
  return j;
}

Json operators_json(const Discretization& d) {
  const LocalOperatorSet& ops = d.ops;
  Json j;
  j["method"] = d.method.name();
  j["family"] = ops.family == Family::mass_lumped ? "mass_lumped" : "sipdg";
  j["n0"] = ops.n0;
  j["m"] = ops.m;
  j["dof_order"] = ops.family == Family::mass_lumped ? "node * m + component"
                                                      : "(element * dim + basis) * m + component";
  j["mass_diagonal"] = ops.mass_diagonal;
  j["nnz_per_cell"] = ops.nnz_per_cell;
  j["M0"] = dense_json(ops.M0);
  Json blocks = Json::array();
  for (int si = 0; si < kNumShifts; ++si) {
    const SparseMat& blk = ops.A[static_cast<size_t>(si)];
    if (blk.nonZeros() == 0) continue;
    const Shift s = shift_from_index(si);
    Json b;
    b["shift"] = Json::array({s[0], s[1], s[2]});
    b["A"] = dense_json(Eigen::MatrixXd(blk));
    blocks.push_back(b);
  }
  j["blocks"] = blocks;
  return j;
}

void write_element_list(std::ostream& os) {
  os << "method  family       degree  stages  details\n";
  for (const MethodSpec& m : all_methods()) {
    os << std::left << std::setw(8) << m.name() << std::setw(13)
       << (m.family == Family::mass_lumped ? "mass-lumped" : "SIPDG") << std::setw(8) << m.degree() << std::setw(8)
       << m.stages();
    if (m.family == Family::mass_lumped) {
      const MassLumpedRule r = mass_lumped_rule(m.rule);
      os << r.nodes.size() << " nodes, quadrature exact to degree " << r.exactness_degree;
    } else {
      os << "P" << m.dg_degree << " modal basis, penalty "
         << (m.penalty == PenaltyVariant::eigen_bound ? "eigenvalue bound (a)" : "inscribed sphere (b)");
    }
    os << '\n';
  }
}

}  // namespace tetdisp
