#include "lowrank/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "lowrank/errors.hpp"
#include "lowrank/rng.hpp"

namespace lowrank {

SingularTriple top_singular_pair(const Matrix& g, double tol, int max_iter,
                                 std::uint64_t seed) {
  if (g.norm() < kZeroMatrixThreshold)
    throw ZeroMatrixError("top_singular_pair: matrix is numerically zero");
  if (tol <= 0.0) tol = 1e-10;

  auto rng = make_rng(derive_seed(seed, "top_singular_pair"));
  Vector v = random_unit_vector(rng, g.cols());
  Vector u = Vector::Zero(g.rows());
  double sigma = 0.0;
  int stagnant = 0;
  // The alternating update never decreases u^T G v, and the returned value
  // always equals u^T G v exactly for the returned pair.  When the top
  // singular values are separated the residual test below certifies the
  // global pair; when they form a near-degenerate cluster the residual can
  // stall even though the achieved value is already within the cluster
  // width of the maximum, so a long stretch of stagnant values is accepted
  // as convergence onto that cluster.
  constexpr int kStagnantWindow = 64;

  for (int it = 0; it < max_iter; ++it) {
    Vector gv = g * v;
    double gv_norm = gv.norm();
    if (gv_norm < kZeroMatrixThreshold) {
      // Start vector landed in the null space; re-draw.
      v = random_unit_vector(rng, g.cols());
      continue;
    }
    u = gv / gv_norm;
    Vector gtu = g.transpose() * u;
    double sigma_next = gtu.norm();
    v = gtu / sigma_next;  // sigma_next >= gv_norm > 0 here

    const double sigma_change = std::abs(sigma_next - sigma);
    sigma = sigma_next;  // equals u^T G v for the updated v
    if (sigma_change <= tol * sigma) {
      const double residual = (g * v - sigma * u).norm();
      if (residual <= tol * sigma) return {sigma, u, v};
      if (++stagnant >= kStagnantWindow) return {sigma, u, v};
    } else {
      stagnant = 0;
    }
  }
  throw NonConvergedError("top_singular_pair: no convergence within " +
                          std::to_string(max_iter) + " sweeps");
}

Matrix project_rowcol(const Matrix& g, const Matrix& u_stack,
                      const Matrix& v_stack) {
  if (u_stack.rows() == 0 || v_stack.rows() == 0)
    return Matrix::Zero(g.rows(), g.cols());
  if (u_stack.cols() != g.rows() || v_stack.cols() != g.cols())
    throw DimensionMismatchError(
        "project_rowcol: stacked factors do not match the matrix shape");
  // U^T (U G V^T) V, small-by-small in the middle.
  return u_stack.transpose() * (u_stack * g * v_stack.transpose()) * v_stack;
}

namespace {

// One modified-Gram-Schmidt elimination of `x` against the rows of each
// basis block, run twice for orthogonality at working precision.
void eliminate(Vector& x, const std::vector<const Vector*>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector* b : basis) x -= (b->dot(x)) * (*b);
}

}  // namespace

std::vector<Atom> sequential_orthogonalize(const std::vector<Atom>& atoms,
                                           const SupportSet& support,
                                           double drop_tol,
                                           std::vector<std::size_t>* kept) {
  if (kept) kept->clear();
  std::vector<const Vector*> u_basis;
  std::vector<const Vector*> v_basis;
  u_basis.reserve(support.size() + atoms.size());
  v_basis.reserve(support.size() + atoms.size());
  for (const Atom& a : support.atoms()) {
    u_basis.push_back(&a.u);
    v_basis.push_back(&a.v);
  }

  std::vector<Atom> out;
  // Reserving the maximum size keeps the basis pointers into `out` stable.
  out.reserve(atoms.size());
  for (std::size_t idx = 0; idx < atoms.size(); ++idx) {
    Vector u = atoms[idx].u;
    Vector v = atoms[idx].v;
    eliminate(u, u_basis);
    eliminate(v, v_basis);
    const double un = u.norm();
    const double vn = v.norm();
    if (un < drop_tol || vn < drop_tol) continue;  // nothing new in a factor
    out.push_back(Atom{u / un, v / vn});
    u_basis.push_back(&out.back().u);
    v_basis.push_back(&out.back().v);
    if (kept) kept->push_back(idx);
  }
  return out;
}

}  // namespace lowrank
