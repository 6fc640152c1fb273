#pragma once

#include "tetdisp/common.hpp"

#include <vector>

namespace tetdisp {

inline constexpr int kMaxQuadratureDegree = 40;
inline constexpr double kRefTetVolume = 1.0 / 6.0;
inline constexpr double kRefTriangleArea = 0.5;

/// Quadrature on the reference simplex. Triangles use the first two
/// coordinates of each point (z = 0); weights sum to the reference measure.
struct SimplexQuadrature {
  int dimension = 3;
  int degree = 0;
  std::vector<Vec3> points;
  std::vector<double> weights;

  size_t size() const { return points.size(); }
};

/// Exact for all polynomials up to `degree` (collapsed Gauss-Legendre products,
/// positive weights). Throws std::invalid_argument above kMaxQuadratureDegree.
SimplexQuadrature simplex_quadrature(int dim, int degree);

/// Same rules, built once per (dim, degree) and shared; thread-safe.
const SimplexQuadrature& cached_simplex_quadrature(int dim, int degree);

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Closed-form integral of x^a y^b z^c over the reference tetrahedron: a!b!c!/(a+b+c+3)!.
double tet_monomial_integral(int a, int b, int c);
/// Closed-form integral of x^a y^b over the reference triangle: a!b!/(a+b+2)!.
double triangle_monomial_integral(int a, int b);

}  // namespace tetdisp
