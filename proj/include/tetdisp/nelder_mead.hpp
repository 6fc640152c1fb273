#pragma once

#include <Eigen/Dense>

#include <functional>

namespace tetdisp {

struct NelderMeadOptions {
  double initial_step = 0.1;  // edge length of the starting simplex
  double ftol = 1e-8;         // stop when the simplex values agree to ftol * (|f| + tiny)
  double xtol = 1e-8;         // ... and the simplex diameter is below xtol
  int max_evals = 400;        // hard cap on calls of f
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
};

/// Derivative-free minimization with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace tetdisp
