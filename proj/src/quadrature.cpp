#include "tetdisp/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace tetdisp {

void gauss_legendre01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<size_t>(i)] = 0.5 * (1.0 - x);
    weights[static_cast<size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

SimplexQuadrature simplex_quadrature(int dim, int degree) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("simplex quadrature supports dim 2 or 3");
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));

  SimplexQuadrature q;
  q.dimension = dim;
  q.degree = degree;
  if (degree <= 1) {
    q.points.push_back(dim == 3 ? Vec3(0.25, 0.25, 0.25) : Vec3(1.0 / 3.0, 1.0 / 3.0, 0.0));
    q.weights.push_back(dim == 3 ? kRefTetVolume : kRefTriangleArea);
    return q;
  }

  // Collapsed coordinates; the Jacobian adds up to dim-1 to the degree in u.
  const int n = (degree + dim) / 2 + 1;
  std::vector<double> t, w;
  gauss_legendre01(n, t, w);
  if (dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double u = t[i], v = t[j];
        q.points.emplace_back(u, (1.0 - u) * v, 0.0);
        q.weights.push_back(w[i] * w[j] * (1.0 - u));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double u = t[i], v = t[j], s = t[k];
          q.points.emplace_back(u, (1.0 - u) * v, (1.0 - u) * (1.0 - v) * s);
          q.weights.push_back(w[i] * w[j] * w[k] * (1.0 - u) * (1.0 - u) * (1.0 - v));
        }
  }
  return q;
}

const SimplexQuadrature& cached_simplex_quadrature(int dim, int degree) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("simplex quadrature supports dim 2 or 3");
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  static const std::vector<SimplexQuadrature> table = [] {
    std::vector<SimplexQuadrature> t;
    for (int d = 2; d <= 3; ++d)
      for (int k = 0; k <= kMaxQuadratureDegree; ++k) t.push_back(simplex_quadrature(d, k));
    return t;
  }();
  return table[static_cast<size_t>((dim - 2) * (kMaxQuadratureDegree + 1) + degree)];
}

namespace {
double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

double tet_monomial_integral(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

double triangle_monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

}  // namespace tetdisp
