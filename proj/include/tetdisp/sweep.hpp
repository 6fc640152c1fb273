#pragma once

#include "tetdisp/symbol.hpp"

#include <string>
#include <vector>

namespace tetdisp {

struct DirectionSearchOptions {
  int directions = 200;        // Fibonacci-sphere size; only its upper half is evaluated
  int restarts = 3;            // local refinements from the best samples
  double initial_step = 0.25;  // radians
  int max_evals = 60;          // per refinement
  double tol = 1e-3;           // relative tolerance of the refinement
  bool want_vec = true;
  bool parallel = true;
};

struct WorstCase {
  double e_disp = 0.0;
  double e_vec = 0.0;
  Vec3 dir_disp = Vec3::UnitX();
  Vec3 dir_vec = Vec3::UnitX();
  int evaluations = 0;
};

/// Unit vectors of the spherical Fibonacci lattice with n points.
std::vector<Vec3> fibonacci_sphere(int n);

/// Worst-case errors over all directions at |kappa| = 2 pi / lambda, each
/// maximized independently. `seeds` are extra unit directions added to the
/// sample set (for example the maximizers found at a neighbouring wavelength).
/// Throws ResolutionError when lambda is shorter than twice the nodal spacing
/// of the cell.
WorstCase worst_case_over_directions(const Discretization& d, double lambda, const TimeScheme& scheme,
                                     const DirectionSearchOptions& opts = {}, const std::vector<Vec3>& seeds = {});

/// Shortest wavelength the cell can represent, 2 (|Omega0| m / n0)^{1/3}.
double resolution_limit(const LocalOperatorSet& ops, const UnitCellMesh& mesh, int m);

/// N_E = (lambda^3 / |e|_av)^{1/3}.
double elements_per_wavelength(const UnitCellMesh& mesh, double lambda);
/// Inverse of the above.
double wavelength_for_NE(const UnitCellMesh& mesh, double NE);

struct CostModel {
  double n_vec = 0.0;
  double n_mat = 0.0;
  double N_dt = 0.0;
  double n_comp = 0.0;
};

/// Degrees of freedom, matrix non-zeros and work for one wavelength cube.
CostModel cost_model(const Discretization& d, double lambda, const TimeScheme& scheme);

struct DispersionReport {
  std::string method;
  std::string material;
  double lambda = 0.0;
  double N_E = 0.0;
  double e_disp = 0.0;
  double e_vec = 0.0;
  double dt = 0.0;
  double N_dt = 0.0;
  double n_vec = 0.0;
  double n_mat = 0.0;
  double n_comp = 0.0;
  // Estimated round-off level of e_disp: the physical eigenvalue is computed
  // next to eigenvalues up to s_max, so its relative accuracy is about
  // eps * s_max / s. Samples below this level are left out of fits.
  double e_floor = 0.0;
};

struct ConvergenceFit {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // RMS of the log-log residuals
  double ne_min = 0.0;    // sample range used
  double ne_max = 0.0;
  int samples = 0;
  bool non_monotone = false;
  bool exact_zero = false;  // every sample was zero (no fit possible)
  // Leading constant with the exponent held at a known theoretical order
  // (least squares for log alpha alone over the same samples). Zero when no
  // order was given.
  double order = 0.0;
  double alpha_at_order = 0.0;
};

/// Least-squares fit e = alpha N_E^{-beta} over the finest half of the samples
/// (at least 3). Samples need not be sorted. With `order` > 0 the constant for
/// e = alpha N_E^{-order} is reported as well.
ConvergenceFit fit_convergence(const std::vector<std::pair<double, double>>& samples, double order = 0.0);

/// (alpha / target)^{1/beta}, or (alpha_at_order / target)^{1/order} when
/// `at_order` is set.
double required_NE(const ConvergenceFit& fit, double target, bool at_order = false);

}  // namespace tetdisp
