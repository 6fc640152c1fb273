#pragma once

#include "tetdisp/common.hpp"

#include <vector>

namespace tetdisp {

inline constexpr int kMaxPolyDegree = 8;

/// Monomials x^a y^b z^c with a+b+c <= degree, graded by total degree.
const std::vector<std::array<int, 3>>& monomial_exponents();
int num_monomials(int degree);
int monomial_index(int a, int b, int c);

/// Values of all monomials of total degree <= degree at x.
Eigen::VectorXd eval_monomials(const Vec3& x, int degree);

/// Dense polynomial in (x, y, z) on the reference tetrahedron.
class Polynomial {
 public:
  Polynomial();

  static Polynomial constant(double v);
  static Polynomial monomial(int a, int b, int c, double coef = 1.0);
  /// Barycentric coordinate of the reference tetrahedron: 1-x-y-z, x, y, z.
  static Polynomial barycentric(int i);

  double operator()(const Vec3& x) const;
  Polynomial derivative(int dim) const;
  int degree() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }

 private:
  Eigen::VectorXd c_;
};

}  // namespace tetdisp
