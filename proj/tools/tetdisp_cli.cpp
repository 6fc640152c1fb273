#include "tetdisp/io.hpp"
#include "tetdisp/kernels.hpp"
#include "tetdisp/study.hpp"
#include "tetdisp/timedomain.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace tetdisp;

namespace {

const char* kColumnHelp = R"(Report CSV columns (analyze, reports.csv):
  method    method name (ML1, ML2, ML3a, ML3b, DG1a ... DG3b)
  material  acoustic | elastic(cp/cs=<ratio>)
  mesh      regular | tz=<factor> | delta=<distortion>
  lambda    wavelength
  N_E       elements per wavelength, (lambda^3 / |e|_av)^(1/3)
  e_disp    worst-case relative phase-speed error over all directions
  e_vec     worst-case eigenvector error over all directions
  dt        maximal stable time step sqrt(c_K / s_max)
  N_dt      time steps per wave period, lambda / (c dt)
  n_vec     unknowns per wavelength cube
  n_mat     matrix non-zeros per wavelength cube
  n_comp    n_mat * K * N_dt
  e_floor   estimated round-off level of e_disp (samples below it are not fitted)
Table CSV columns (tables): method, then for every quantity q the triple
  q, q_published, q_rel_dev. Fit tables report alpha at the theoretical order
  (2p for dispersion, p+1 for eigenvectors) and the freely fitted beta.
See docs/csv_schema.md for the full schema.)";

struct Output {
  std::string dir;

  // Opens <dir>/<name> or returns nullptr when output goes to stdout.
  std::unique_ptr<std::ofstream> open(const std::string& name) const {
    if (dir.empty()) return nullptr;
    fs::create_directories(dir);
    auto f = std::make_unique<std::ofstream>(fs::path(dir) / name, std::ios::binary);
    if (!*f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    return f;
  }
};

struct SearchArgs {
  int directions = 200;
  int restarts = 3;
  int max_evals = 60;
  int tracked = 0;
  int spectral_grid = 0;
  bool no_vec = false;

  void add(CLI::App* app) {
    app->add_option("--directions", directions, "Fibonacci-sphere size for the direction search")
        ->check(CLI::PositiveNumber);
    app->add_option("--restarts", restarts, "Local refinements per error measure")->check(CLI::NonNegativeNumber);
    app->add_option("--max-evals", max_evals, "Evaluations per local refinement")->check(CLI::PositiveNumber);
    app->add_option("--tracked", tracked,
                    "Sphere size after the first wavelength, seeded with the previous maximizers (0: same)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--spectral-grid", spectral_grid, "Points per axis of the s_max search grid (0: automatic)")
        ->check(CLI::NonNegativeNumber);
    app->add_flag("--no-vec", no_vec, "Skip eigenvector errors");
  }

  SweepOptions sweep() const {
    SweepOptions o;
    o.search.directions = directions;
    o.search.restarts = restarts;
    o.search.max_evals = max_evals;
    o.search.want_vec = !no_vec;
    o.tracked_directions = tracked;
    return o;
  }

  std::optional<SpectralSearchOptions> spectral() const {
    if (spectral_grid <= 0) return std::nullopt;
    SpectralSearchOptions s;
    s.grid = spectral_grid;
    return s;
  }
};

std::vector<MethodSpec> select_methods(const std::vector<std::string>& names, const std::string& penalty) {
  std::vector<MethodSpec> out;
  if (names.empty()) {
    out = all_methods();
  } else {
    for (const auto& n : names) out.push_back(parse_method(n));
  }
  if (!penalty.empty()) {
    const PenaltyVariant v = parse_penalty(penalty);
    for (auto& m : out)
      if (m.family == Family::sipdg) m.penalty = v;
  }
  return out;
}

void write_json(const Output& out, const std::string& name, const Json& j) {
  if (auto f = out.open(name)) {
    *f << j.dump(2) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

int run_analyze(const Output& out, const std::vector<std::string>& methods, const std::string& penalty,
                const std::string& material, const std::string& mesh, const std::vector<double>& ne,
                const std::vector<double>& lambdas, const SearchArgs& search) {
  const MeshSpec mesh_spec = parse_mesh_spec(mesh);
  const MaterialSpec mat_spec = parse_material_spec(material);
  const UnitCellMesh cell = mesh_spec.build();
  const MaterialModel model = mat_spec.build();
  std::vector<MethodStudy> studies;
  for (const MethodSpec& m : select_methods(methods, penalty)) {
    const MethodSetup setup = prepare_method(m, cell, model, search.spectral());
    std::vector<double> grid = ne;
    for (double l : lambdas) grid.push_back(elements_per_wavelength(cell, l));
    if (grid.empty()) grid = default_ne_grid(m.degree());
    studies.push_back(sweep_method(setup, grid, search.sweep(), mesh_spec.label()));
    studies.back().material_label = mat_spec.label();
  }
  if (auto f = out.open("reports.csv")) {
    write_reports_csv(*f, studies);
    write_json(out, "fits.json", fits_json(studies));
  } else {
    write_reports_csv(std::cout, studies);
  }
  return 0;
}

int run_tables(const Output& out, const std::string& id, const std::vector<std::string>& methods,
               const SearchArgs& search) {
  if (id != "2" && id != "3" && id != "4" && id != "5" && id != "6")
    throw std::invalid_argument("table must be one of 2, 3, 4, 5, 6");
  const bool elastic = id == "5" || id == "6";
  const MaterialSpec mat_spec = elastic ? MaterialSpec::elastic_ratio(2.0) : MaterialSpec::acoustic_unit();
  const UnitCellMesh cell = MeshSpec::regular().build();
  const MaterialModel model = mat_spec.build();
  std::vector<MethodStudy> studies;
  std::vector<MethodSetup> setups;
  for (const MethodSpec& m : select_methods(methods, "")) {
    setups.push_back(prepare_method(m, cell, model, search.spectral()));
    studies.push_back(sweep_method(setups.back(), default_ne_grid(m.degree()), search.sweep()));
    studies.back().material_label = mat_spec.label();
    std::cerr << "table " << id << ": " << m.name() << " done\n";
  }
  const ReproducedTable table = (id == "3" || id == "4") ? cost_table(id, studies, setups) : fits_table(id, studies);
  if (auto f = out.open("table" + id + ".csv")) {
    write_table_csv(*f, table);
    write_json(out, "table" + id + ".json", table_json(table));
  } else {
    write_table_csv(std::cout, table);
  }
  return 0;
}

int run_verify(const Output& out, const std::string& method, const std::string& material, const std::string& mesh,
               int N, const std::vector<int>& z, int mode, int steps, std::optional<double> probe) {
  if (z.size() != 3) throw std::invalid_argument("--z needs three integers");
  const MethodSpec m = parse_method(method);
  const MethodSetup setup =
      prepare_method(m, parse_mesh_spec(mesh).build(), parse_material_spec(material).build(), std::nullopt);
  Json j;
  j["method"] = m.name();
  j["N"] = N;
  if (probe) {
    const VerifyResult r = stability_probe(setup.disc.ops, N, m.stages(), *probe, steps);
    j["dt_factor"] = *probe;
    j["stable"] = r.stable;
    j["max_amplitude"] = r.max_amplitude;
    j["steps"] = r.steps;
  } else {
    const VerifyResult r =
        verify_mode(setup.disc.ops, N, Shift{z[0], z[1], z[2]}, mode, setup.scheme, steps);
    j["z"] = z;
    j["mode"] = mode;
    j["dt"] = setup.scheme.dt;
    j["predicted_omega"] = r.predicted_omega;
    j["empirical_omega"] = r.empirical_omega;
    j["rel_err"] = r.rel_err;
    j["stable"] = r.stable;
    j["max_amplitude"] = r.max_amplitude;
    j["steps"] = r.steps;
  }
  write_json(out, "verify.json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-analytic dispersion analysis of mass-lumped and SIPDG tetrahedral elements"};
  app.footer(kColumnHelp);
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file with option values (sections per subcommand)");

  int threads = 0;
  Output out;
  app.add_option("--threads", threads, "Cap on worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out.dir, "Output directory (default: stdout)");

  std::vector<std::string> methods;
  std::string penalty, material = "acoustic", mesh = "regular";
  std::vector<double> ne, lambdas;
  SearchArgs search;

  auto* analyze = app.add_subcommand("analyze", "Worst-case errors, cost model and fits over a wavelength grid");
  analyze->add_option("--method", methods, "Methods to analyse (default: all ten)");
  analyze->add_option("--penalty", penalty, "Override the SIPDG penalty: a | b");
  analyze->add_option("--material", material, "acoustic | elastic | elastic:<cp/cs>");
  analyze->add_option("--mesh", mesh, "regular | tz:<factor> | distorted:<delta>");
  auto* ne_opt = analyze->add_option("--ne", ne, "Elements per wavelength (list)");
  analyze->add_option("--lambda", lambdas, "Wavelengths (list)")->excludes(ne_opt);
  search.add(analyze);

  std::string table_id;
  std::vector<std::string> table_methods;
  SearchArgs table_search;
  auto* tables = app.add_subcommand("tables", "Recompute a published table and report deviations");
  tables->add_option("table", table_id, "2 | 3 | 4 (acoustic) or 5 | 6 (elastic fits)")->required();
  tables->add_option("--method", table_methods, "Restrict to these methods");
  table_search.add(tables);

  std::string v_method, v_material = "acoustic", v_mesh = "regular";
  int v_N = 3, v_mode = 1, v_steps = 400;
  std::vector<int> v_z = {1, 0, 0};
  std::optional<double> v_probe;
  auto* verify = app.add_subcommand("verify", "Time-domain check of one lattice eigenmode");
  verify->add_option("--method", v_method, "Method name")->required();
  verify->add_option("--material", v_material, "acoustic | elastic | elastic:<cp/cs>");
  verify->add_option("--mesh", v_mesh, "regular | tz:<factor> | distorted:<delta>");
  verify->add_option("--N", v_N, "Lattice size (cells per axis)")->check(CLI::Range(1, 16));
  verify->add_option("--z", v_z, "Lattice wave number (three integers)")->expected(3);
  verify->add_option("--mode", v_mode, "Eigenpair index in ascending order")->check(CLI::NonNegativeNumber);
  verify->add_option("--steps", v_steps, "Time steps")->check(CLI::PositiveNumber);
  verify->add_option("--probe-factor", v_probe, "Run the stability probe at this multiple of the stable step");

  std::string d_mesh = "regular";
  auto* dump_mesh = app.add_subcommand("dump-mesh", "Unit cell as JSON");
  dump_mesh->add_option("--mesh", d_mesh, "regular | tz:<factor> | distorted:<delta>");

  std::string o_method, o_material = "acoustic", o_mesh = "regular";
  auto* dump_ops = app.add_subcommand("dump-operators", "Cell mass block and coupling blocks as JSON");
  dump_ops->add_option("--method", o_method, "Method name")->required();
  dump_ops->add_option("--material", o_material, "acoustic | elastic | elastic:<cp/cs>");
  dump_ops->add_option("--mesh", o_mesh, "regular | tz:<factor> | distorted:<delta>");

  auto* list = app.add_subcommand("list-elements", "Supported methods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads > 0) set_num_threads(threads);
    if (*analyze) return run_analyze(out, methods, penalty, material, mesh, ne, lambdas, search);
    if (*tables) return run_tables(out, table_id, table_methods, table_search);
    if (*verify) return run_verify(out, v_method, v_material, v_mesh, v_N, v_z, v_mode, v_steps, v_probe);
    if (*dump_mesh) {
      write_json(out, "mesh.json", mesh_json(parse_mesh_spec(d_mesh).build()));
      return 0;
    }
    if (*dump_ops) {
      const Discretization d = discretize(parse_method(o_method), parse_mesh_spec(o_mesh).build(),
                                          parse_material_spec(o_material).build());
      write_json(out, "operators.json", operators_json(d));
      return 0;
    }
    if (*list) {
      if (auto f = out.open("elements.txt")) {
        write_element_list(*f);
      } else {
        write_element_list(std::cout);
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
