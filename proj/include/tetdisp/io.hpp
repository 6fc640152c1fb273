#pragma once

#include "tetdisp/study.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace tetdisp {

using Json = nlohmann::ordered_json;

/// RFC 4180 field quoting.
std::string csv_escape(const std::string& field);
/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Column order of the per-wavelength report CSV.
const std::vector<std::string>& report_columns();
/// Column order of the per-wave-vector CSV.
const std::vector<std::string>& kappa_columns();

void write_reports_csv(std::ostream& os, const std::vector<MethodStudy>& studies);
Json fits_json(const std::vector<MethodStudy>& studies);
void write_table_csv(std::ostream& os, const ReproducedTable& table);
Json table_json(const ReproducedTable& table);

/// One CSV row for a single wave vector: method, material, kappa, a digest of
/// the eigenvalue list, and both errors.
std::string kappa_row(const std::string& method, const std::string& material, const Vec3& kappa,
                      const Eigen::VectorXd& eigenvalues, const KappaErrors& errors);
/// FNV-1a digest of the eigenvalues printed with 12 significant digits.
std::string eigenvalue_digest(const Eigen::VectorXd& s);

Json mesh_json(const UnitCellMesh& mesh);
/// Cell mass block and all non-empty coupling blocks as dense row-major arrays.
Json operators_json(const Discretization& d);

/// Human-readable list of the supported methods and rule tables.
void write_element_list(std::ostream& os);

}  // namespace tetdisp
