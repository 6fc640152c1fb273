#include "tetdisp/polynomial.hpp"

#include <cmath>

namespace tetdisp {

namespace {

struct MonomialTable {
  std::vector<std::array<int, 3>> exps;
  std::vector<int> index;  // (a,b,c) -> position, -1 if out of range

  MonomialTable() {
    const int n = kMaxPolyDegree + 1;
    index.assign(static_cast<size_t>(n * n * n), -1);
    for (int deg = 0; deg <= kMaxPolyDegree; ++deg)
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b) {
          const int c = deg - a - b;
          index[static_cast<size_t>((a * n + b) * n + c)] = static_cast<int>(exps.size());
          exps.push_back({a, b, c});
        }
  }
};

const MonomialTable& table() {
  static const MonomialTable t;
  return t;
}

}  // namespace

const std::vector<std::array<int, 3>>& monomial_exponents() { return table().exps; }

int num_monomials(int degree) { return (degree + 1) * (degree + 2) * (degree + 3) / 6; }

int monomial_index(int a, int b, int c) {
  const int n = kMaxPolyDegree + 1;
  if (a < 0 || b < 0 || c < 0 || a + b + c > kMaxPolyDegree) return -1;
  return table().index[static_cast<size_t>((a * n + b) * n + c)];
}

Eigen::VectorXd eval_monomials(const Vec3& x, int degree) {
  const auto& exps = monomial_exponents();
  std::array<std::array<double, kMaxPolyDegree + 1>, 3> pw;
  for (int d = 0; d < 3; ++d) {
    pw[d][0] = 1.0;
    for (int k = 1; k <= degree; ++k) pw[d][k] = pw[d][k - 1] * x[d];
  }
  const int n = num_monomials(degree);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = pw[0][exps[i][0]] * pw[1][exps[i][1]] * pw[2][exps[i][2]];
  return out;
}

Polynomial::Polynomial() : c_(Eigen::VectorXd::Zero(num_monomials(kMaxPolyDegree))) {}

Polynomial Polynomial::constant(double v) { return monomial(0, 0, 0, v); }

Polynomial Polynomial::monomial(int a, int b, int c, double coef) {
  Polynomial p;
  const int idx = monomial_index(a, b, c);
  if (idx < 0) throw std::invalid_argument("monomial degree exceeds supported maximum");
  p.c_[idx] = coef;
  return p;
}

Polynomial Polynomial::barycentric(int i) {
  switch (i) {
    case 0: return constant(1.0) - monomial(1, 0, 0) - monomial(0, 1, 0) - monomial(0, 0, 1);
    case 1: return monomial(1, 0, 0);
    case 2: return monomial(0, 1, 0);
    case 3: return monomial(0, 0, 1);
    default: throw std::invalid_argument("barycentric index must be 0..3");
  }
}

double Polynomial::operator()(const Vec3& x) const {
  const int deg = degree();
  return c_.head(num_monomials(deg)).dot(eval_monomials(x, deg));
}

Polynomial Polynomial::derivative(int dim) const {
  Polynomial out;
  const auto& exps = monomial_exponents();
  for (int i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0 || exps[i][dim] == 0) continue;
    auto e = exps[i];
    const double f = e[dim];
    e[dim] -= 1;
    out.c_[monomial_index(e[0], e[1], e[2])] += f * c_[i];
  }
  return out;
}

int Polynomial::degree() const {
  const auto& exps = monomial_exponents();
  int deg = 0;
  for (int i = 0; i < c_.size(); ++i)
    if (c_[i] != 0.0) deg = std::max(deg, exps[i][0] + exps[i][1] + exps[i][2]);
  return deg;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out;
  out.c_ = c_ + o.c_;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial out;
  out.c_ = c_ - o.c_;
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out;
  out.c_ = c_ * s;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (degree() + o.degree() > kMaxPolyDegree) throw std::invalid_argument("polynomial product degree too high");
  Polynomial out;
  const auto& exps = monomial_exponents();
  for (int i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    for (int j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j] == 0.0) continue;
      out.c_[monomial_index(exps[i][0] + exps[j][0], exps[i][1] + exps[j][1], exps[i][2] + exps[j][2])] +=
          c_[i] * o.c_[j];
    }
  }
  return out;
}

}  // namespace tetdisp
