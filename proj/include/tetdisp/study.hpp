#pragma once

#include "tetdisp/sweep.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tetdisp {

/// Which periodic cell a study runs on.
struct MeshSpec {
  enum class Kind { regular, z_scaled, distorted };
  Kind kind = Kind::regular;
  double tz = 1.0;
  double delta = 0.0;

  static MeshSpec regular() { return {}; }
  static MeshSpec z_scaled(double tz) { return {Kind::z_scaled, tz, 0.0}; }
  static MeshSpec distorted(double delta) { return {Kind::distorted, 1.0, delta}; }

  UnitCellMesh build() const;
  /// "regular", "tz=0.5" or "delta=0.9".
  std::string label() const;
};

/// Parses "regular", "tz:<value>" or "distorted:<value>".
MeshSpec parse_mesh_spec(const std::string& s);

struct MaterialSpec {
  MaterialKind kind = MaterialKind::acoustic;
  double rho_tilde = 1.0, c_tilde = 1.0;       // acoustic
  double rho = 1.0, lambda = 2.0, mu = 1.0;    // elastic

  static MaterialSpec acoustic_unit() { return {}; }
  /// rho = mu = 1 and lambda chosen so that c_P / c_S = ratio.
  static MaterialSpec elastic_ratio(double ratio);

  MaterialModel build() const;
  /// "acoustic" or "elastic(cp/cs=2)".
  std::string label() const;
};

/// Parses "acoustic" or "elastic" (c_P/c_S = 2) or "elastic:<ratio>".
MaterialSpec parse_material_spec(const std::string& s);

/// Coarse-grid size for the spectral-radius search, shrinking with the cell size.
SpectralSearchOptions default_spectral_options(int n0);

/// Discretization plus its maximal stable time step.
struct MethodSetup {
  Discretization disc;
  SpectralRadiusResult spectral;
  TimeScheme scheme;
};

MethodSetup prepare_method(const MethodSpec& method, const UnitCellMesh& mesh, const MaterialModel& material,
                           const std::optional<SpectralSearchOptions>& spectral = std::nullopt);

DispersionReport make_report(const MethodSetup& setup, double lambda, const WorstCase& wc);

struct SweepOptions {
  DirectionSearchOptions search;
  /// Fibonacci size used after the first wavelength, where the maximizers of
  /// the previous wavelength are added as seeds. 0 keeps search.directions.
  int tracked_directions = 0;
};

struct MethodStudy {
  MethodSpec method;
  std::string mesh_label;
  std::string material_label;
  TimeScheme scheme;
  std::vector<DispersionReport> rows;  // ordered by increasing N_E
  ConvergenceFit fit_disp;
  ConvergenceFit fit_vec;
};

/// Worst-case errors for each N_E (visited in increasing order) and the fits.
MethodStudy sweep_method(const MethodSetup& setup, const std::vector<double>& ne_grid, const SweepOptions& opts,
                         const std::string& mesh_label = "regular");

/// Geometric N_E grid (ratio sqrt 2) placed in the asymptotic regime for
/// degree p. `points` > 0 truncates or extends the default length.
std::vector<double> default_ne_grid(int p, int points = 0);

struct ExperimentConfig {
  std::vector<MethodSpec> methods;
  MaterialSpec material;
  MeshSpec mesh;
  std::vector<double> ne_grid;  // empty: default_ne_grid per method degree
  SweepOptions sweep;
  int spectral_grid = 0;        // 0: default_spectral_options
  double spectral_tol = 1e-6;
};

std::vector<MethodStudy> run_study(const ExperimentConfig& config);

/// Error of a variant configuration relative to a baseline at the same
/// physical wavelength. The wavelength is fixed by N_E on the baseline mesh.
struct RatioRow {
  MethodSpec method;
  double lambda = 0.0;
  double ne_baseline = 0.0;
  double baseline = 0.0;
  double variant = 0.0;
  double ratio = 0.0;
};

RatioRow error_ratio(const MethodSpec& method, const MeshSpec& base_mesh, const MaterialSpec& base_material,
                     const MeshSpec& var_mesh, const MaterialSpec& var_material, double ne, const SweepOptions& opts);

/// Reference values shipped with the library.
class PublishedValues {
 public:
  static const PublishedValues& get();
  static PublishedValues parse(const std::string& csv);
  std::optional<double> find(const std::string& table, const std::string& method, const std::string& quantity) const;
  double at(const std::string& table, const std::string& method, const std::string& quantity) const;

 private:
  std::map<std::string, double> values_;
};

/// One reproduced table: per method, computed values next to published ones.
struct TableCell {
  std::string column;
  double computed = 0.0;
  std::optional<double> published;
  /// (computed - published) / published, or NaN without a nonzero reference.
  double rel_deviation() const;
};

struct TableRow {
  std::string method;
  std::vector<TableCell> cells;
  const TableCell& cell(const std::string& column) const;
};

struct ReproducedTable {
  std::string id;     // "2", "3", "4", "5" or "6"
  std::string title;
  std::vector<TableRow> rows;
};

/// Fit tables (2: acoustic, 5/6: elastic) from sweep results. The alpha
/// columns hold the constant at the theoretical order (2p, p+1); the beta
/// columns hold the freely fitted exponent.
ReproducedTable fits_table(const std::string& id, const std::vector<MethodStudy>& studies);
/// Cost tables (3: e_disp = 0.01, 4: e_disp = 0.001) from acoustic sweeps.
ReproducedTable cost_table(const std::string& id, const std::vector<MethodStudy>& studies,
                           const std::vector<MethodSetup>& setups);

/// Row of a cost table for one method at a target dispersion error.
DispersionReport cost_row(const MethodSetup& setup, const MethodStudy& study, double target);

}  // namespace tetdisp
