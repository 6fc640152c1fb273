#pragma once

#include "tetdisp/common.hpp"

#include <vector>

namespace tetdisp {

enum class MaterialKind { acoustic, elastic };

/// Constant-coefficient system rho u_tt = div(C : grad u) with u in R^m.
///
/// Gradients are stored as 3 x m matrices G(b, a) = d_b u_a. The fourth-order
/// tensor is indexed C(i, j, q, p) with i, p spatial and j, q field indices.
class MaterialModel {
 public:
  using Grad = Eigen::MatrixXd;  // 3 x m

  MaterialKind kind() const { return kind_; }
  int m() const { return m_; }
  double rho() const { return rho_; }
  /// Propagation speed of the wave analysed: c (acoustic) or c_S (elastic).
  double wave_speed() const { return kind_ == MaterialKind::acoustic ? c_ : c_s_; }
  double c() const { return c_; }
  double c_p() const { return c_p_; }
  double c_s() const { return c_s_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  double C(int i, int j, int q, int p) const { return C_[static_cast<size_t>(((i * m_ + j) * m_ + q) * 3 + p)]; }

  /// (G)^t : C : H = sum G(b,a) C(b,a,l,k) H(k,l).
  double energy(const Grad& G, const Grad& H) const;
  /// C : H as a 3 x m matrix, [C:H]_{ij} = sum C(i,j,l,k) H(k,l).
  Grad contract(const Grad& H) const;
  /// Traction n . C : G (length m).
  Eigen::VectorXd traction(const Vec3& n, const Grad& G) const;
  /// c_n = n . C . n (m x m).
  Eigen::MatrixXd normal_tensor(const Vec3& n) const;

  friend MaterialModel acoustic(double rho_tilde, double c_tilde);
  friend MaterialModel elastic(double rho, double lambda, double mu);

 private:
  MaterialKind kind_ = MaterialKind::acoustic;
  int m_ = 1;
  double rho_ = 1.0;
  double c_ = 0.0, c_p_ = 0.0, c_s_ = 0.0;
  double lambda_ = 0.0, mu_ = 0.0;
  std::vector<double> C_;
};

/// Acoustic pressure model: m = 1, rho = 1/(rho~ c~^2), C_{i11j} = delta_ij / rho~.
MaterialModel acoustic(double rho_tilde, double c_tilde);
/// Isotropic elasticity: C_{ijqp} = lambda d_ij d_pq + mu (d_ip d_jq + d_iq d_jp).
MaterialModel elastic(double rho, double lambda, double mu);

/// Orthonormal pair spanning the plane perpendicular to kappa.
std::pair<Vec3, Vec3> secondary_amplitude_pair(const Vec3& kappa);

/// u(x,t) = a exp(i (kappa.x - omega t)).
struct PlaneWave {
  Vec3 kappa = Vec3::Zero();
  Eigen::VectorXd amplitude;
  double omega = 0.0;
  double speed = 0.0;
};

}  // namespace tetdisp
