#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lowrank/atoms.hpp"
#include "lowrank/objective.hpp"
#include "lowrank/solvers.hpp"

namespace lowrank {

// Outcome of one inequality check. Every check is normalized to the
// direction lhs >= rhs, with slack = lhs - rhs; `holds` allows the
// documented tolerance (relative by default, absolute where a check says
// so). `vacuous` marks checks whose premise failed (e.g. a denominator too
// small to divide by); vacuous checks carry holds = true and are excluded
// from pass/fail accounting by the verify driver.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  bool vacuous = false;

  // lhs >= rhs - tol * (1 + |rhs|)
  static BoundReport greater_equal(double lhs, double rhs, double tol = 1e-6);
  // lhs >= rhs - tol (absolute slack)
  static BoundReport greater_equal_abs(double lhs, double rhs, double tol);
  static BoundReport vacuous_report();
};

// A named, seeded check row for report CSVs:
// check,seed,lhs,rhs,slack,holds.
struct NamedReport {
  std::string check;
  std::uint64_t seed = 0;
  BoundReport report;
};

void write_report_csv(std::ostream& out, const std::vector<NamedReport>& rows);

// Ratio used by the weak-submodularity analysis:
//   sum_{j in S} [f(L + {j}) - f(L)]  /  [f(L + S) - f(L)],
// with S first orthogonalized sequentially against L (atoms dropped by the
// orthogonalization leave both sums). Returns +infinity when the
// denominator is below 1e-12 (the ratio is undefined; callers report the
// check as vacuous).
double submodularity_ratio(const Objective& objective, const SupportSet& support,
                           const std::vector<Atom>& candidate_set,
                           double refit_tol = 1e-8, int refit_max_iter = 10000);

// Multiplicative approximation factor 1 - exp(-c) with
//   c = tau * ratio * k / r        (greedy selection)
//   c = tau^2 * ratio * k / r      (linear selection; squared_tau = true).
double approx_bound(double tau, double ratio, int k, int r,
                    bool squared_tau = false);

// Best rank-r approximation value sum_{i<=r} sigma_i^2 of a target matrix,
// computed by repeated top_singular_pair extraction and deflation. Also
// returns the extracted atoms (the singular vector pairs, in order).
struct TruncationOracle {
  double f_opt = 0.0;
  std::vector<Atom> atoms;
};

TruncationOracle svd_truncation_oracle(const Matrix& y, int r,
                                       std::uint64_t seed = 0);

// Runs the linear-selection solver and checks its approximation guarantee
//   f(S_k) >= (1 - exp(-tau^2 (m/M) k / r)) * oracle_opt,
// with (m, M) the curvature pair of the loss (M upper-bounds the rank-one
// restricted constant, so the certified factor is conservative).
NamedReport check_geco_guarantee(const Objective& objective,
                                 const CurvaturePair& curvature,
                                 const SolverConfig& cfg, int r,
                                 double oracle_opt);

// Parameter-recovery bound for an estimate B_k against a rank-r reference
// B_r, given a strong-concavity lower bound m and an approximation factor C:
//   ||B_k - B_r||_F^2 <= 4 (k+r) ||grad(B_r)||_2^2 / m^2
//                        + (4 (1-C) / m) * [loss(B_r) - loss(0)].
// Reported with lhs = bound, rhs = error (direction lhs >= rhs). A
// nonpositive m makes the premise fail: the report is vacuous.
NamedReport check_recovery_bound(const Objective& objective, const Matrix& b_k,
                                 const Matrix& b_r, double m, double c_factor,
                                 int k, int r, std::uint64_t seed = 0);

// Sandwich of the set value by the projected gradient at zero,
// g = ||P_U grad(0) P_V||_F^2:
//   g / (2M)  <=  f(S)  <=  g / (2m).
// Returned as two reports, "lower" (f >= g/2M) and "upper" (g/2m >= f).
struct SandwichReports {
  NamedReport lower;
  NamedReport upper;
};

SandwichReports check_subadditivity_lemmas(const Objective& objective,
                                           const SupportSet& support,
                                           const CurvaturePair& curvature,
                                           std::uint64_t seed = 0);

// Per-iteration gain lower bounds against the remaining gap
// B(i) = oracle_opt - f(S_i):
//   gain(i+1) >= factor * B(i) - tol,
// with factor = tau * gamma_lower / r for greedy runs and
// tau^2 * m / (r * M) for linear-selection runs. One report per recorded
// iteration, absolute tolerance per the acceptance statement.
std::vector<NamedReport> check_iteration_gains(const RunHistory& history,
                                               double oracle_opt,
                                               double factor,
                                               const std::string& check_name,
                                               std::uint64_t seed = 0,
                                               double tol = 1e-6);

}  // namespace lowrank
