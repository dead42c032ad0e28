#pragma once

#include <Eigen/Dense>

namespace lowrank {

// Dense real matrices/vectors used throughout the library. Column-major
// storage (Eigen's default) is an internal detail; file formats and the
// public API are layout-agnostic.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Matrix& a) { return a.allFinite(); }
inline bool all_finite(const Vector& a) { return a.allFinite(); }

// Frobenius inner product <A, B> = sum_ij A_ij B_ij.
inline double frob_dot(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace lowrank
