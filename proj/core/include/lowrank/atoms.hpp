#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lowrank/matrix.hpp"

namespace lowrank {

class Objective;

// One rank-one direction u v^T with unit-norm factors. Atoms are the
// "columns" greedy selection picks; a solution is a weighted combination of
// them, with the weights chosen by a full refit over the selected set.
struct Atom {
  Vector u;
  Vector v;
};

// Ordered set of selected atoms. Atoms are appended in selection order and
// kept mutually orthogonal in both factors (the solvers orthogonalize before
// appending), so the stacked factor matrices have orthonormal rows.
class SupportSet {
 public:
  SupportSet() = default;

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  void push_back(Atom atom) { atoms_.push_back(std::move(atom)); }
  void clear() { atoms_.clear(); }

  // Stacked factors: row i of U() is atom i's u (size() x n); likewise V().
  Matrix stacked_u() const;
  Matrix stacked_v() const;

  // Text round-trip: one atom per line, u entries, a '|' separator, then v
  // entries. Numbers are written with enough digits to restore the exact
  // double values.
  void write(std::ostream& out) const;
  static SupportSet read(std::istream& in);

 private:
  std::vector<Atom> atoms_;
};

bool operator==(const Atom& a, const Atom& b);
bool operator==(const SupportSet& a, const SupportSet& b);

// Result of the fully-corrective refit over a support set L: the coefficient
// matrix H (|L| x |L|), the assembled estimate B = U^T H V, and the achieved
// objective gain f_value = loss(B) - loss(0) >= 0.
struct RefitSolution {
  Matrix coefficients;  // H, |L| x |L|
  Matrix estimate;      // B = U^T H V, n x d
  double f_value = 0.0;
  int inner_iterations = 0;
  bool converged = true;
};

// Maximizes loss(U^T H V) over the coefficient matrix H. QuadraticFull has a
// closed form; every other loss runs gradient ascent on H with Armijo
// backtracking, warm-started from `warm_start` (padded with zeros by the
// caller when the support grew). A refit that exhausts max_iter returns the
// best iterate with converged=false rather than throwing: the iterate is
// still a valid (if loose) lower bound on the set value.
RefitSolution refit(const SupportSet& support, const Objective& objective,
                    double tol = 1e-8, int max_iter = 10000,
                    const std::optional<Matrix>& warm_start = std::nullopt);

// f(L) = max_H loss(U^T H V) - loss(0), the set function being maximized.
double set_value(const SupportSet& support, const Objective& objective,
                 double tol = 1e-8, int max_iter = 10000);

}  // namespace lowrank
