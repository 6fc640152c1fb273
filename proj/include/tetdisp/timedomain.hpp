#pragma once

#include "tetdisp/symbol.hpp"

#include <vector>

namespace tetdisp {

/// Two consecutive time levels of a field on an N^3-cell periodic lattice.
/// Entry (cell * n0 + i) belongs to local dof i of cell (a, b, c) with
/// cell = (a * N + b) * N + c.
struct LatticeState {
  int N = 0;
  int n0 = 0;
  double dt = 0.0;
  int step = 0;
  Eigen::VectorXcd prev;  // U(t_{step-1})
  Eigen::VectorXcd cur;   // U(t_step)
};

/// y = A u with the 27 coupling blocks and periodic index arithmetic.
Eigen::VectorXcd lattice_apply_stiffness(const LocalOperatorSet& ops, int N, const Eigen::VectorXcd& u);
/// y = M^{-1} u with the cell mass block.
Eigen::VectorXcd lattice_apply_mass_inverse(const LocalOperatorSet& ops, int N, const Eigen::VectorXcd& u);
/// u^H M v summed over the lattice.
cplx lattice_mass_inner(const LocalOperatorSet& ops, int N, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

/// sum_{k=0}^{K} (dt^2 (-M^{-1}A))^k / (2k)! applied to u (Horner form).
Eigen::VectorXcd lattice_apply_polynomial(const LocalOperatorSet& ops, int N, int K, double dt,
                                          const Eigen::VectorXcd& u);

/// One Lax-Wendroff step: U(t+dt) = -U(t-dt) + 2 P(dt^2 M^{-1}A) U(t).
void lw_step(LatticeState& state, const LocalOperatorSet& ops, int K);

/// Swaps the two time levels so that further steps run backwards in time.
void reverse_time(LatticeState& state);

/// Bloch field u_c = v exp(i kappa . T c) of a cell vector v.
Eigen::VectorXcd bloch_field(const LocalOperatorSet& ops, int N, const Vec3& kappa, const Eigen::VectorXcd& v);

/// Symbol eigenpair at kappa_z = (2 pi / N) T^{-t} z, eigenvalues ascending.
struct LatticeMode {
  Vec3 kappa = Vec3::Zero();
  double s = 0.0;
  Eigen::VectorXcd vector;  // M0-normalized
};

LatticeMode lattice_mode(const LocalOperatorSet& ops, int N, const Shift& z, int mode_index);

/// Start values from the Taylor expansion of order 2K+1 with f = 0.
/// With `real_field` the cosine field Re(u) is used and v0 = Re(-i omega_h u);
/// otherwise the complex travelling field is used.
LatticeState initialize_plane_wave(const LocalOperatorSet& ops, int N, const LatticeMode& mode,
                                   const TimeScheme& scheme, bool real_field = true);

/// Same with a standing start (v0 = 0), used for the stability probe.
LatticeState initialize_standing_wave(const LocalOperatorSet& ops, int N, const LatticeMode& mode, int K, double dt);

/// Empirical omega from the recurrence of y_n = <U(t_n), U(t_0)>_M over the
/// recorded steps. Throws ResolutionError when fewer than 4 steps per period
/// are available or less than one period was simulated.
double measure_phase(const std::vector<cplx>& overlaps, double dt);

struct VerifyResult {
  double predicted_omega = 0.0;
  double empirical_omega = 0.0;
  double rel_err = 0.0;
  bool stable = true;
  double max_amplitude = 1.0;  // max_n ||U_n||_M / ||U_0||_M
  int steps = 0;
};

/// Runs the lattice stepper on one symbol eigenmode and compares omega.
VerifyResult verify_mode(const LocalOperatorSet& ops, int N, const Shift& z, int mode_index, const TimeScheme& scheme,
                         int steps);

/// Standing-wave run of the lattice mode with the largest eigenvalue at
/// dt = dt_factor * sqrt(c_K / sigma_max(lattice)). Unstable when the
/// amplitude exceeds 10x the start, stable when it stays below 1 + 1e-6.
VerifyResult stability_probe(const LocalOperatorSet& ops, int N, int K, double dt_factor, int steps);

/// Steps forward n times, reverses, steps n times again; returns the
/// max-norm distance to the initial pair relative to its size.
double reversal_error(const LocalOperatorSet& ops, LatticeState state, int K, int n);

}  // namespace tetdisp
