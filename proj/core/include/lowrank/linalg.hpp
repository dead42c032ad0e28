#pragma once

#include <cstdint>
#include <vector>

#include "lowrank/atoms.hpp"
#include "lowrank/matrix.hpp"

namespace lowrank {

// Top singular triple (sigma, u, v) of a matrix, with u^T G v = sigma.
struct SingularTriple {
  double sigma = 0.0;
  Vector u;
  Vector v;
};

// Matrices with ||G||_F below this are treated as zero.
inline constexpr double kZeroMatrixThreshold = 1e-14;

// Estimates the top singular triple of G by alternating power iteration
// from a seeded random start:  u <- Gv/||Gv||,  v <- G^T u/||G^T u||.
// Converged when the sigma estimate moves by less than tol (relative) over
// one sweep and the residual ||G v - sigma u|| is at most tol * sigma; the
// returned sigma then satisfies sigma >= (1 - tol) * sigma_1(G). With tied
// or near-tied leading singular values, any triple in the leading subspace
// passes the residual test and is accepted; if the sigma estimate instead
// stays stagnant for many consecutive sweeps without meeting the residual
// test, the iterate has settled inside such a near-degenerate cluster and
// is likewise accepted.
//
// Throws ZeroMatrixError when ||G||_F < kZeroMatrixThreshold and
// NonConvergedError when max_iter sweeps do not reach the test.
SingularTriple top_singular_pair(const Matrix& g, double tol = 1e-10,
                                 int max_iter = 10000,
                                 std::uint64_t seed = 0);

// Two-sided projection U^T U G V^T V onto the row/column spans of a stacked
// atom set (rows of u_stack/v_stack orthonormal). Accepts empty stacks, in
// which case the result is the zero matrix.
Matrix project_rowcol(const Matrix& g, const Matrix& u_stack,
                      const Matrix& v_stack);

// Sequentially Gram-Schmidt-orthogonalizes the u factors of `atoms` against
// the u factors of `support` and of previously accepted atoms, and
// independently the v factors against the v factors. An atom whose residual
// u or v norm falls below drop_tol is dropped (it carries no new direction
// in one of the factors). Surviving atoms are renormalized; two elimination
// passes keep residual inner products at the 1e-10 level. When `kept` is
// non-null it receives the input indices of the surviving atoms, in order.
std::vector<Atom> sequential_orthogonalize(const std::vector<Atom>& atoms,
                                           const SupportSet& support,
                                           double drop_tol = 1e-8,
                                           std::vector<std::size_t>* kept = nullptr);

}  // namespace lowrank
