#include "tetdisp/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace tetdisp {

const std::string& embedded_file(const std::string& name);

UnitCellMesh MeshSpec::build() const {
  switch (kind) {
    case Kind::regular: return build_disphenoid_cell();
    case Kind::z_scaled: return apply_z_scaling(build_disphenoid_cell(), tz);
    case Kind::distorted: return build_distorted_cell(DistortionParams{delta, 1.0});
  }
  throw std::invalid_argument("unknown mesh kind");
}

std::string MeshSpec::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::regular: return "regular";
    case Kind::z_scaled: os << "tz=" << tz; break;
    case Kind::distorted: os << "delta=" << delta; break;
  }
  return os.str();
}

namespace {

// Multiple of eps * s_max / s below which a dispersion error is treated as
// round-off. Measured floors sit near 4 eps s_max / s.
constexpr double kRoundoffFactor = 1000.0;

double parse_number(const std::string& s, const std::string& what) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("invalid " + what + " '" + s + "'");
  return v;
}

}  // namespace

MeshSpec parse_mesh_spec(const std::string& s) {
  if (s == "regular") return MeshSpec::regular();
  const auto colon = s.find(':');
  if (colon != std::string::npos) {
    const std::string head = s.substr(0, colon), tail = s.substr(colon + 1);
    if (head == "tz") {
      const double tz = parse_number(tail, "z-scale factor");
      if (!(tz > 0.0)) throw std::invalid_argument("z-scale factor must be positive");
      return MeshSpec::z_scaled(tz);
    }
    if (head == "distorted") {
      const double delta = parse_number(tail, "distortion");
      if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("distortion must lie in [0, 1)");
      return MeshSpec::distorted(delta);
    }
  }
  throw std::invalid_argument("unknown mesh '" + s + "' (expected regular, tz:<f> or distorted:<delta>)");
}

MaterialSpec MaterialSpec::elastic_ratio(double ratio) {
  if (!(ratio > std::sqrt(4.0 / 3.0))) throw std::invalid_argument("c_P/c_S must exceed sqrt(4/3)");
  MaterialSpec m;
  m.kind = MaterialKind::elastic;
  m.rho = 1.0;
  m.mu = 1.0;
  m.lambda = ratio * ratio - 2.0;
  return m;
}

MaterialModel MaterialSpec::build() const {
  return kind == MaterialKind::acoustic ? acoustic(rho_tilde, c_tilde) : elastic(rho, lambda, mu);
}

std::string MaterialSpec::label() const {
  if (kind == MaterialKind::acoustic) return "acoustic";
  std::ostringstream os;
  os << "elastic(cp/cs=" << std::sqrt((lambda + 2.0 * mu) / mu) << ")";
  return os.str();
}

MaterialSpec parse_material_spec(const std::string& s) {
  if (s == "acoustic") return MaterialSpec::acoustic_unit();
  if (s == "elastic") return MaterialSpec::elastic_ratio(2.0);
  if (s.rfind("elastic:", 0) == 0) return MaterialSpec::elastic_ratio(parse_number(s.substr(8), "c_P/c_S ratio"));
  throw std::invalid_argument("unknown material '" + s + "' (expected acoustic, elastic or elastic:<cp/cs>)");
}

SpectralSearchOptions default_spectral_options(int n0) {
  SpectralSearchOptions o;
  o.grid = n0 <= 160 ? 17 : (n0 <= 500 ? 11 : 7);
  return o;
}

MethodSetup prepare_method(const MethodSpec& method, const UnitCellMesh& mesh, const MaterialModel& material,
                           const std::optional<SpectralSearchOptions>& spectral) {
  MethodSetup s{discretize(method, mesh, material), {}, {}};
  s.spectral = spectral_radius_max(s.disc.ops, spectral.value_or(default_spectral_options(s.disc.ops.n0)));
  s.scheme = make_scheme(method.stages(), s.spectral.s_max);
  return s;
}

DispersionReport make_report(const MethodSetup& setup, double lambda, const WorstCase& wc) {
  const CostModel cm = cost_model(setup.disc, lambda, setup.scheme);
  DispersionReport r;
  r.method = setup.disc.method.name();
  r.material = setup.disc.material.kind() == MaterialKind::acoustic ? "acoustic" : "elastic";
  r.lambda = lambda;
  r.N_E = elements_per_wavelength(setup.disc.mesh, lambda);
  r.e_disp = wc.e_disp;
  r.e_vec = wc.e_vec;
  r.dt = setup.scheme.dt;
  r.N_dt = cm.N_dt;
  r.n_vec = cm.n_vec;
  r.n_mat = cm.n_mat;
  r.n_comp = cm.n_comp;
  const double k = 2.0 * std::numbers::pi / lambda;
  const double s_phys = std::pow(setup.disc.material.wave_speed() * k, 2);
  r.e_floor = kRoundoffFactor * std::numeric_limits<double>::epsilon() * setup.scheme.s_max / s_phys;
  return r;
}

MethodStudy sweep_method(const MethodSetup& setup, const std::vector<double>& ne_grid, const SweepOptions& opts,
                         const std::string& mesh_label) {
  if (ne_grid.empty()) throw std::invalid_argument("empty N_E grid");
  std::vector<double> grid = ne_grid;
  std::sort(grid.begin(), grid.end());
  MethodStudy st;
  st.method = setup.disc.method;
  st.mesh_label = mesh_label;
  st.material_label = setup.disc.material.kind() == MaterialKind::acoustic ? "acoustic" : "elastic";
  st.scheme = setup.scheme;

  std::vector<Vec3> seeds;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("N_E values must be positive");
    DirectionSearchOptions o = opts.search;
    if (i > 0 && opts.tracked_directions > 0) o.directions = opts.tracked_directions;
    const double lambda = wavelength_for_NE(setup.disc.mesh, grid[i]);
    const WorstCase wc = worst_case_over_directions(setup.disc, lambda, setup.scheme, o, seeds);
    st.rows.push_back(make_report(setup, lambda, wc));
    // Directions in the upper hemisphere, as the sampler uses.
    auto up = [](Vec3 v) { return v.z() < 0.0 ? Vec3(-v) : v; };
    seeds = {up(wc.dir_disp)};
    if (opts.search.want_vec && (wc.dir_vec - wc.dir_disp).norm() > 1e-6) seeds.push_back(up(wc.dir_vec));
  }
  std::vector<std::pair<double, double>> d, v;
  for (const auto& r : st.rows) {
    if (r.e_disp >= r.e_floor) d.emplace_back(r.N_E, r.e_disp);
    v.emplace_back(r.N_E, r.e_vec);
  }
  const int p = st.method.degree();
  if (d.size() >= 3) st.fit_disp = fit_convergence(d, 2.0 * p);
  if (opts.search.want_vec && v.size() >= 3) st.fit_vec = fit_convergence(v, p + 1.0);
  return st;
}

std::vector<double> default_ne_grid(int p, int points) {
  double start = 0.0;
  int n = 8;
  switch (p) {
    case 1: start = 8.0; break;
    case 2: start = 4.0; break;
    case 3:
      // The eigenvector error has no round-off floor, so the grid runs on
      // past the point where dispersion errors reach it.
      start = 2.0 * std::sqrt(2.0);
      n = 11;
      break;
    default: throw std::invalid_argument("no default N_E grid for this degree");
  }
  if (points > 0) n = points;
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(start * std::pow(std::sqrt(2.0), i));
  return g;
}

std::vector<MethodStudy> run_study(const ExperimentConfig& config) {
  if (config.methods.empty()) throw std::invalid_argument("no methods selected");
  const UnitCellMesh mesh = config.mesh.build();
  const MaterialModel material = config.material.build();
  std::vector<MethodStudy> out;
  for (const MethodSpec& m : config.methods) {
    std::optional<SpectralSearchOptions> so;
    if (config.spectral_grid > 0) {
      so = SpectralSearchOptions{};
      so->grid = config.spectral_grid;
      so->tol = config.spectral_tol;
    }
    const MethodSetup setup = prepare_method(m, mesh, material, so);
    const auto grid = config.ne_grid.empty() ? default_ne_grid(m.degree()) : config.ne_grid;
    out.push_back(sweep_method(setup, grid, config.sweep, config.mesh.label()));
    out.back().material_label = config.material.label();
  }
  return out;
}

RatioRow error_ratio(const MethodSpec& method, const MeshSpec& base_mesh, const MaterialSpec& base_material,
                     const MeshSpec& var_mesh, const MaterialSpec& var_material, double ne, const SweepOptions& opts) {
  const MethodSetup base = prepare_method(method, base_mesh.build(), base_material.build());
  const MethodSetup var = prepare_method(method, var_mesh.build(), var_material.build());
  RatioRow r;
  r.method = method;
  r.ne_baseline = ne;
  r.lambda = wavelength_for_NE(base.disc.mesh, ne);
  DirectionSearchOptions o = opts.search;
  o.want_vec = false;
  r.baseline = worst_case_over_directions(base.disc, r.lambda, base.scheme, o).e_disp;
  r.variant = worst_case_over_directions(var.disc, r.lambda, var.scheme, o).e_disp;
  r.ratio = r.variant / r.baseline;
  return r;
}

const PublishedValues& PublishedValues::get() {
  static const PublishedValues pv = parse(embedded_file("published_values.csv"));
  return pv;
}

PublishedValues PublishedValues::parse(const std::string& csv) {
  PublishedValues pv;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (f.size() != 4) throw std::invalid_argument("malformed reference value line: " + line);
    pv.values_[f[0] + "|" + f[1] + "|" + f[2]] = parse_number(f[3], "reference value");
  }
  return pv;
}

std::optional<double> PublishedValues::find(const std::string& table, const std::string& method,
                                            const std::string& quantity) const {
  const auto it = values_.find(table + "|" + method + "|" + quantity);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double PublishedValues::at(const std::string& table, const std::string& method, const std::string& quantity) const {
  if (auto v = find(table, method, quantity)) return *v;
  throw std::invalid_argument("no reference value " + table + "/" + method + "/" + quantity);
}

double TableCell::rel_deviation() const {
  if (!published || *published == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (computed - *published) / *published;
}

const TableCell& TableRow::cell(const std::string& column) const {
  for (const auto& c : cells)
    if (c.column == column) return c;
  throw std::invalid_argument("no column '" + column + "' in row " + method);
}

ReproducedTable fits_table(const std::string& id, const std::vector<MethodStudy>& studies) {
  ReproducedTable t;
  t.id = id;
  const bool elastic = id == "5" || id == "6";
  if (!elastic && id != "2") throw std::invalid_argument("fit tables are 2, 5 and 6");
  const std::string key = elastic ? "fits_elastic" : "fits_acoustic";
  t.title = elastic ? "Error fits e = alpha N_E^-beta, elastic model, c_P/c_S = 2"
                    : "Error fits e = alpha N_E^-beta, acoustic model";
  const auto& pv = PublishedValues::get();
  for (const auto& st : studies) {
    TableRow row;
    row.method = st.method.name();
    auto add = [&](const std::string& col, double v) { row.cells.push_back({col, v, pv.find(key, row.method, col)}); };
    add("disp_alpha", st.fit_disp.alpha_at_order);
    add("disp_beta", st.fit_disp.beta);
    add("vec_alpha", st.fit_vec.exact_zero ? 0.0 : st.fit_vec.alpha_at_order);
    add("vec_beta", st.fit_vec.exact_zero ? 0.0 : st.fit_vec.beta);
    t.rows.push_back(std::move(row));
  }
  return t;
}

DispersionReport cost_row(const MethodSetup& setup, const MethodStudy& study, double target) {
  const double ne = required_NE(study.fit_disp, target, true);
  const double lambda = wavelength_for_NE(setup.disc.mesh, ne);
  WorstCase wc;
  wc.e_disp = target;
  wc.e_vec = study.fit_vec.exact_zero ? 0.0 : study.fit_vec.alpha_at_order * std::pow(ne, -study.fit_vec.order);
  return make_report(setup, lambda, wc);
}

ReproducedTable cost_table(const std::string& id, const std::vector<MethodStudy>& studies,
                           const std::vector<MethodSetup>& setups) {
  if (id != "3" && id != "4") throw std::invalid_argument("cost tables are 3 and 4");
  if (studies.size() != setups.size()) throw std::invalid_argument("one setup per study is required");
  const double target = id == "3" ? 0.01 : 0.001;
  const std::string key = id == "3" ? "cost_0.01" : "cost_0.001";
  ReproducedTable t;
  t.id = id;
  t.title = std::string("Resolution and cost at e_disp = ") + (id == "3" ? "0.01" : "0.001") + ", acoustic model";
  const auto& pv = PublishedValues::get();
  for (size_t i = 0; i < studies.size(); ++i) {
    const DispersionReport r = cost_row(setups[i], studies[i], target);
    TableRow row;
    row.method = r.method;
    auto add = [&](const std::string& col, double v) { row.cells.push_back({col, v, pv.find(key, row.method, col)}); };
    add("N_E", r.N_E);
    add("n_vec", r.n_vec);
    add("n_mat", r.n_mat);
    add("N_dt", r.N_dt);
    add("n_comp", r.n_comp);
    add("e_vec", r.e_vec);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace tetdisp
