#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "lowrank/matrix.hpp"

namespace lowrank {

// All randomness in the library flows from one root seed. Every consumer
// derives its own stream seed as hash(root, tag); independent tags give
// independent streams, so concurrent execution order cannot change what any
// one consumer draws.

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// FNV-1a over the tag bytes, mixed with the root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return mix64(root ^ h);
}

// Numeric sub-stream (instance index, iteration counter, ...).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  return mix64(root ^ mix64(index));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

// Uniform draw from the unit sphere in R^n: normalized i.i.d. Gaussians.
inline Vector random_unit_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

// Matrix with i.i.d. standard normal entries, filled in row-major order so
// the draw is reproducible independent of storage layout.
inline Matrix random_gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                     Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = gauss(rng);
  return a;
}

}  // namespace lowrank
