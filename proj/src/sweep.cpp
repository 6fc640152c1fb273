#include "tetdisp/sweep.hpp"

#include "tetdisp/kernels.hpp"
#include "tetdisp/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace tetdisp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 direction(double theta, double phi) {
  return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

Eigen::Vector2d spherical(const Vec3& d) {
  return Eigen::Vector2d(std::acos(std::clamp(d.z(), -1.0, 1.0)), std::atan2(d.y(), d.x()));
}

}  // namespace

std::vector<Vec3> fibonacci_sphere(int n) {
  if (n < 1) throw std::invalid_argument("direction count must be positive");
  std::vector<Vec3> pts(static_cast<size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts[static_cast<size_t>(i)] = Vec3(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  return pts;
}

double resolution_limit(const LocalOperatorSet& ops, const UnitCellMesh& mesh, int m) {
  return 2.0 * std::cbrt(mesh.cell_volume * m / static_cast<double>(ops.n0));
}

WorstCase worst_case_over_directions(const Discretization& d, double lambda, const TimeScheme& scheme,
                                     const DirectionSearchOptions& opts, const std::vector<Vec3>& seeds) {
  if (!(lambda > 0.0)) throw std::invalid_argument("wavelength must be positive");
  const double limit = resolution_limit(d.ops, d.mesh, d.material.m());
  if (lambda < limit)
    throw ResolutionError("wavelength " + std::to_string(lambda) + " is below the resolution limit " +
                          std::to_string(limit) + " of this cell");
  const double kn = kTwoPi / lambda;
  const ExecPolicy policy = opts.parallel ? ExecPolicy::parallel : ExecPolicy::serial;

  // e(kappa) = e(-kappa) because S(-kappa) is the complex conjugate of S(kappa),
  // so only the upper half of the Fibonacci lattice is evaluated.
  std::vector<Vec3> dirs;
  for (const Vec3& v : fibonacci_sphere(opts.directions))
    if (v.z() > 0.0) dirs.push_back(v);
  dirs.insert(dirs.end(), seeds.begin(), seeds.end());
  const auto samples = indexed_map<KappaErrors>(
      static_cast<int>(dirs.size()), [&](int i) { return kappa_errors(d, kn * dirs[static_cast<size_t>(i)], scheme, opts.want_vec); },
      policy);

  WorstCase wc;
  wc.evaluations = static_cast<int>(dirs.size());

  // Refines one error measure from its best samples.
  auto refine = [&](bool vec_measure, double& best, Vec3& best_dir) {
    auto value = [&](const KappaErrors& e) { return vec_measure ? e.e_vec : e.e_disp; };
    std::vector<int> rank(dirs.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(),
                     [&](int a, int b) { return value(samples[static_cast<size_t>(a)]) > value(samples[static_cast<size_t>(b)]); });
    best = value(samples[static_cast<size_t>(rank[0])]);
    best_dir = dirs[static_cast<size_t>(rank[0])];
    if (!(best > 0.0)) return;  // identically zero measure, nothing to refine
    const int restarts = std::min<int>(opts.restarts, static_cast<int>(rank.size()));
    const auto runs = indexed_map<NelderMeadResult>(
        restarts,
        [&](int r) {
          NelderMeadOptions nm;
          nm.initial_step = opts.initial_step;
          nm.ftol = opts.tol;
          nm.xtol = 1e-3;
          nm.max_evals = opts.max_evals;
          auto f = [&](const Eigen::VectorXd& x) {
            const KappaErrors e = kappa_errors(d, kn * direction(x[0], x[1]), scheme, vec_measure);
            return -value(e);
          };
          return nelder_mead(f, spherical(dirs[static_cast<size_t>(rank[static_cast<size_t>(r)])]), nm);
        },
        policy);
    for (const auto& r : runs) {
      wc.evaluations += r.evals;
      if (-r.f > best) {
        best = -r.f;
        best_dir = direction(r.x[0], r.x[1]);
      }
    }
  };
  refine(false, wc.e_disp, wc.dir_disp);
  if (opts.want_vec) refine(true, wc.e_vec, wc.dir_vec);
  return wc;
}

double elements_per_wavelength(const UnitCellMesh& mesh, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("wavelength must be positive");
  return std::cbrt(lambda * lambda * lambda / mesh.avg_elem_volume);
}

double wavelength_for_NE(const UnitCellMesh& mesh, double NE) {
  if (!(NE > 0.0)) throw std::invalid_argument("elements per wavelength must be positive");
  return NE * std::cbrt(mesh.avg_elem_volume);
}

CostModel cost_model(const Discretization& d, double lambda, const TimeScheme& scheme) {
  CostModel c;
  const double cubes = lambda * lambda * lambda / d.mesh.cell_volume;
  c.n_vec = d.ops.n0 * cubes;
  c.n_mat = d.ops.nnz_per_cell * cubes;
  c.N_dt = lambda / (d.material.wave_speed() * scheme.dt);
  c.n_comp = c.n_mat * scheme.K * c.N_dt;
  return c;
}

ConvergenceFit fit_convergence(const std::vector<std::pair<double, double>>& samples, double order) {
  if (samples.size() < 3) throw std::invalid_argument("a convergence fit needs at least 3 samples");
  auto sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  ConvergenceFit fit;
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].second > 1.05 * sorted[i - 1].second) fit.non_monotone = true;

  const size_t n = sorted.size();
  const size_t take = std::max<size_t>(3, (n + 1) / 2);
  std::vector<std::pair<double, double>> use(sorted.end() - static_cast<std::ptrdiff_t>(take), sorted.end());
  fit.ne_min = use.front().first;
  fit.ne_max = use.back().first;

  std::vector<double> x, y;
  for (const auto& [ne, e] : use)
    if (e > 0.0 && ne > 0.0) {
      x.push_back(std::log(ne));
      y.push_back(std::log(e));
    }
  fit.samples = static_cast<int>(x.size());
  double emax = 0.0;
  for (const auto& s : use) emax = std::max(emax, std::abs(s.second));
  if (x.size() < 2 || emax < 1e-12) {
    fit.exact_zero = true;
    return fit;
  }
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("convergence samples need distinct N_E values");
  const double slope = sxy / sxx;
  fit.beta = -slope;
  fit.alpha = std::exp(my - slope * mx);
  double ss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / k);
  if (order > 0.0) {
    fit.order = order;
    fit.alpha_at_order = std::exp(my + order * mx);
  }
  return fit;
}

double required_NE(const ConvergenceFit& fit, double target, bool at_order) {
  if (!(target > 0.0)) throw std::invalid_argument("target error must be positive");
  const double a = at_order ? fit.alpha_at_order : fit.alpha;
  const double b = at_order ? fit.order : fit.beta;
  if (!(b > 0.0) || !(a > 0.0)) throw std::invalid_argument("fit has no positive order");
  return std::pow(a / target, 1.0 / b);
}

}  // namespace tetdisp
