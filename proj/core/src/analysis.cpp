#include "lowrank/analysis.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "lowrank/errors.hpp"
#include "lowrank/linalg.hpp"
#include "lowrank/matrix_market.hpp"
#include "lowrank/rng.hpp"

namespace lowrank {

BoundReport BoundReport::greater_equal(double lhs, double rhs, double tol) {
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.holds = lhs >= rhs - tol * (1.0 + std::abs(rhs));
  return r;
}

BoundReport BoundReport::greater_equal_abs(double lhs, double rhs, double tol) {
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.holds = lhs >= rhs - tol;
  return r;
}

BoundReport BoundReport::vacuous_report() {
  BoundReport r;
  r.holds = true;
  r.vacuous = true;
  return r;
}

void write_report_csv(std::ostream& out, const std::vector<NamedReport>& rows) {
  out << "check,seed,lhs,rhs,slack,holds\n";
  for (const NamedReport& row : rows) {
    out << row.check << "," << row.seed << ","
        << format_double(row.report.lhs) << "," << format_double(row.report.rhs)
        << "," << format_double(row.report.slack) << ","
        << (row.report.vacuous ? "vacuous" : (row.report.holds ? "1" : "0"))
        << "\n";
  }
}

double submodularity_ratio(const Objective& objective, const SupportSet& support,
                           const std::vector<Atom>& candidate_set,
                           double refit_tol, int refit_max_iter) {
  const std::vector<Atom> ortho =
      sequential_orthogonalize(candidate_set, support);
  const double f_base =
      set_value(support, objective, refit_tol, refit_max_iter);

  double numerator = 0.0;
  for (const Atom& a : ortho) {
    SupportSet single = support;
    single.push_back(a);
    numerator +=
        set_value(single, objective, refit_tol, refit_max_iter) - f_base;
  }

  SupportSet joint = support;
  for (const Atom& a : ortho) joint.push_back(a);
  const double denominator =
      set_value(joint, objective, refit_tol, refit_max_iter) - f_base;

  if (denominator < 1e-12)  // undefined ratio; callers report vacuous
    return std::numeric_limits<double>::infinity();
  return numerator / denominator;
}

double approx_bound(double tau, double ratio, int k, int r, bool squared_tau) {
  if (r < 1 || k < 0)
    throw DimensionMismatchError("approx_bound: need r >= 1 and k >= 0");
  if (!(tau > 0.0 && tau <= 1.0))
    throw DimensionMismatchError("approx_bound: tau must lie in (0, 1]");
  const double t = squared_tau ? tau * tau : tau;
  const double c = t * ratio * static_cast<double>(k) / static_cast<double>(r);
  return 1.0 - std::exp(-c);
}

TruncationOracle svd_truncation_oracle(const Matrix& y, int r,
                                       std::uint64_t seed) {
  TruncationOracle oracle;
  Matrix work = y;
  for (int i = 0; i < r; ++i) {
    SingularTriple t;
    try {
      t = top_singular_pair(work, 1e-10, 50000, derive_seed(seed, "svd-" + std::to_string(i)));
    } catch (const ZeroMatrixError&) {
      break;  // rank exhausted before r terms
    }
    oracle.f_opt += t.sigma * t.sigma;
    oracle.atoms.push_back(Atom{t.u, t.v});
    work -= t.sigma * t.u * t.v.transpose();
  }
  return oracle;
}

NamedReport check_geco_guarantee(const Objective& objective,
                                 const CurvaturePair& curvature,
                                 const SolverConfig& cfg, int r,
                                 double oracle_opt) {
  const SolverResult run = run_geco(objective, cfg);
  const double ratio = curvature.m / curvature.M;
  const double factor = approx_bound(cfg.tau, ratio, cfg.k, r, true);
  NamedReport row;
  row.check = "geco_guarantee";
  row.seed = cfg.seed;
  row.report =
      BoundReport::greater_equal(run.refit.f_value, factor * oracle_opt);
  return row;
}

NamedReport check_recovery_bound(const Objective& objective, const Matrix& b_k,
                                 const Matrix& b_r, double m, double c_factor,
                                 int k, int r, std::uint64_t seed) {
  NamedReport row;
  row.check = "recovery_bound";
  row.seed = seed;
  if (!(m > 0.0)) {
    row.report = BoundReport::vacuous_report();
    return row;
  }
  const Matrix grad = objective.gradient(b_r);
  double spectral = 0.0;
  if (grad.norm() >= kZeroMatrixThreshold)
    spectral = top_singular_pair(grad, 1e-8, 50000, derive_seed(seed, "recovery")).sigma;
  const double gap = objective.value(b_r) - objective.value_at_zero();
  const double bound = 4.0 * static_cast<double>(k + r) * spectral * spectral /
                           (m * m) +
                       4.0 * (1.0 - c_factor) / m * gap;
  const double error = (b_k - b_r).squaredNorm();
  // Normalized to the >= direction: bound >= error.
  row.report = BoundReport::greater_equal(bound, error);
  return row;
}

SandwichReports check_subadditivity_lemmas(const Objective& objective,
                                           const SupportSet& support,
                                           const CurvaturePair& curvature,
                                           std::uint64_t seed) {
  const Matrix grad0 =
      objective.gradient(Matrix::Zero(objective.rows(), objective.cols()));
  const Matrix projected =
      support.empty()
          ? Matrix::Zero(objective.rows(), objective.cols())
          : project_rowcol(grad0, support.stacked_u(), support.stacked_v());
  const double g = projected.squaredNorm();
  const double f = set_value(support, objective);

  SandwichReports out;
  out.lower.check = "sandwich_lower";
  out.lower.seed = seed;
  out.lower.report = BoundReport::greater_equal(f, g / (2.0 * curvature.M));
  out.upper.check = "sandwich_upper";
  out.upper.seed = seed;
  out.upper.report = BoundReport::greater_equal(g / (2.0 * curvature.m), f);
  return out;
}

std::vector<NamedReport> check_iteration_gains(const RunHistory& history,
                                               double oracle_opt,
                                               double factor,
                                               const std::string& check_name,
                                               std::uint64_t seed, double tol) {
  std::vector<NamedReport> rows;
  rows.reserve(history.records.size());
  double f_prev = 0.0;
  for (const IterationRecord& rec : history.records) {
    const double remaining = oracle_opt - f_prev;
    NamedReport row;
    row.check = check_name;
    row.seed = seed;
    row.report =
        BoundReport::greater_equal_abs(rec.gain, factor * remaining, tol);
    rows.push_back(std::move(row));
    f_prev = rec.f_after;
  }
  return rows;
}

}  // namespace lowrank
