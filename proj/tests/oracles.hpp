#pragma once

// Brute-force reference computations used only by the tests.

#include "tetdisp/assembly.hpp"
#include "tetdisp/symbol.hpp"

namespace tetdisp::oracle {

struct GlobalSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd M;
};

/// Assembles the N^3-cell periodic problem element by element from the mesh,
/// with its own global numbering, geometric node and face matching and direct
/// quadrature of the bilinear form. Penalty values are taken from `d`.
GlobalSystem assemble_global(const Discretization& d, int N);

/// Sorted eigenvalues of A x = s M x.
Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

/// Sorted union of the symbol eigenvalues over kappa_z, z in Z_N^3.
Eigen::VectorXd symbol_union(const LocalOperatorSet& ops, int N);

/// Global matrices in lattice-state ordering (cell * n0 + i) built from the
/// coupling blocks; reference for the matrix-free lattice operators.
GlobalSystem dense_from_blocks(const LocalOperatorSet& ops, int N);

/// Largest relative mismatch of two sorted spectra, scaled by max |s|.
double spectrum_mismatch(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace tetdisp::oracle
