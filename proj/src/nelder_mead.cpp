#include "tetdisp/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace tetdisp {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts(static_cast<size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<size_t>(n + 1));
  int evals = 0;
  // Points past the budget are ranked last without calling f.
  auto eval = [&](const Eigen::VectorXd& x) {
    if (evals >= opts.max_evals) return std::numeric_limits<double>::infinity();
    ++evals;
    return f(x);
  };
  for (int i = 0; i < n; ++i) pts[i + 1][i] += opts.initial_step;
  for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<int> idx(static_cast<size_t>(n + 1));
  while (evals < opts.max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];

    double diam = 0.0;
    for (int i = 1; i <= n; ++i) diam = std::max(diam, (pts[idx[i]] - pts[best]).cwiseAbs().maxCoeff());
    const double spread = std::abs(vals[worst] - vals[best]);
    if (spread <= opts.ftol * (std::abs(vals[best]) + 1e-300) && diam <= opts.xtol) break;
    if (diam < 1e-14) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[idx[i]];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      const int j = idx[i];
      pts[j] = pts[best] + 0.5 * (pts[j] - pts[best]);
      vals[j] = eval(pts[j]);
    }
  }
  const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return NelderMeadResult{pts[best], vals[best], evals};
}

}  // namespace tetdisp
