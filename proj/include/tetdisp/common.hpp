#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace tetdisp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using cplx = std::complex<double>;

/// Lattice shift of a periodic cell, each component in {-1, 0, 1} for couplings.
using Shift = std::array<int, 3>;

inline constexpr int kNumShifts = 27;

/// Index of a shift in {-1,0,1}^3, with (0,0,0) at 13.
constexpr int shift_index(const Shift& s) {
  return (s[0] + 1) * 9 + (s[1] + 1) * 3 + (s[2] + 1);
}

constexpr Shift shift_from_index(int idx) {
  return {idx / 9 - 1, (idx / 3) % 3 - 1, idx % 3 - 1};
}

constexpr Shift negate(const Shift& s) { return {-s[0], -s[1], -s[2]}; }

inline Vec3 to_vec(const Shift& s) { return Vec3(s[0], s[1], s[2]); }

// Error types. Invalid input is std::invalid_argument; failures that arise
// from the numerics carry their own type so callers (and the CLI exit codes)
// can tell them apart.
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tetdisp
