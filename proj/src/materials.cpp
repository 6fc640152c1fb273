#include "tetdisp/materials.hpp"

#include <cmath>

namespace tetdisp {

namespace {
double delta(int a, int b) { return a == b ? 1.0 : 0.0; }
}  // namespace

MaterialModel acoustic(double rho_tilde, double c_tilde) {
  if (!(rho_tilde > 0.0) || !(c_tilde > 0.0))
    throw std::invalid_argument("acoustic model needs positive density and speed");
  MaterialModel mat;
  mat.kind_ = MaterialKind::acoustic;
  mat.m_ = 1;
  mat.rho_ = 1.0 / (rho_tilde * c_tilde * c_tilde);
  mat.c_ = c_tilde;
  mat.C_.assign(9, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) mat.C_[static_cast<size_t>(i * 3 + j)] = delta(i, j) / rho_tilde;
  return mat;
}

MaterialModel elastic(double rho, double lambda, double mu) {
  if (!(rho > 0.0) || !(mu > 0.0) || !(lambda >= 0.0))
    throw std::invalid_argument("elastic model needs rho > 0, mu > 0, lambda >= 0");
  MaterialModel mat;
  mat.kind_ = MaterialKind::elastic;
  mat.m_ = 3;
  mat.rho_ = rho;
  mat.lambda_ = lambda;
  mat.mu_ = mu;
  mat.c_p_ = std::sqrt((lambda + 2.0 * mu) / rho);
  mat.c_s_ = std::sqrt(mu / rho);
  mat.C_.assign(81, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int q = 0; q < 3; ++q)
        for (int p = 0; p < 3; ++p)
          mat.C_[static_cast<size_t>(((i * 3 + j) * 3 + q) * 3 + p)] =
              lambda * delta(i, j) * delta(p, q) + mu * (delta(i, p) * delta(j, q) + delta(i, q) * delta(j, p));
  return mat;
}

double MaterialModel::energy(const Grad& G, const Grad& H) const {
  double s = 0.0;
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < m_; ++a) {
      if (G(b, a) == 0.0) continue;
      double t = 0.0;
      for (int l = 0; l < m_; ++l)
        for (int k = 0; k < 3; ++k) t += C(b, a, l, k) * H(k, l);
      s += G(b, a) * t;
    }
  return s;
}

MaterialModel::Grad MaterialModel::contract(const Grad& H) const {
  Grad out = Grad::Zero(3, m_);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < m_; ++j)
      for (int l = 0; l < m_; ++l)
        for (int k = 0; k < 3; ++k) out(i, j) += C(i, j, l, k) * H(k, l);
  return out;
}

Eigen::VectorXd MaterialModel::traction(const Vec3& n, const Grad& G) const {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(m_);
  for (int q = 0; q < m_; ++q)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < m_; ++j)
        for (int i = 0; i < 3; ++i) t[q] += n[k] * C(k, q, j, i) * G(i, j);
  return t;
}

Eigen::MatrixXd MaterialModel::normal_tensor(const Vec3& n) const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m_, m_);
  for (int q = 0; q < m_; ++q)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i) c(q, j) += n[k] * C(k, q, j, i) * n[i];
  return c;
}

std::pair<Vec3, Vec3> secondary_amplitude_pair(const Vec3& kappa) {
  const double norm = kappa.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("secondary amplitudes need a nonzero wave vector");
  const Vec3 k = kappa / norm;
  // Cross with the coordinate axis least aligned with kappa.
  int axis = 0;
  k.cwiseAbs().minCoeff(&axis);
  const Vec3 a1 = k.cross(Vec3::Unit(axis)).normalized();
  const Vec3 a2 = k.cross(a1).normalized();
  return {a1, a2};
}

}  // namespace tetdisp
