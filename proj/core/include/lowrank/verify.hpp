#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lowrank/analysis.hpp"
#include "lowrank/matrix.hpp"
#include "lowrank/objective.hpp"

namespace lowrank {

// Self-contained verification suites behind the `verify` CLI subcommand.
// Every suite generates seeded instances, runs the relevant checks, and
// returns one NamedReport row per check. Suites:
//
//   gradients    finite-difference and concavity checks on all four losses
//   monotone     set-value monotonicity on nested supports (binomial loss)
//   ratio        submodularity ratio >= m/M on random quadratic instances
//   svd          linear-selection solver reaches the best rank-r value
//   guarantee    approximation-factor guarantee and the ratio curve in k
//   gains        per-iteration gain lower bounds (greedy and linear rules)
//   recovery     parameter-recovery bound on noisy measurement instances
//   sandwich     projected-gradient sandwich of the set value
//   distributed  partition/merge consistency of the distributed solver
//   quick        every suite at reduced instance counts
//   all          every suite at full instance counts
struct SuiteConfig {
  int instances = 0;  // 0 = suite default
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Throws Error for an unknown suite name.
std::vector<NamedReport> run_suite(const std::string& name,
                                   const SuiteConfig& cfg);

const std::vector<std::string>& suite_names();

struct SuiteSummary {
  int total = 0;
  int vacuous = 0;
  std::vector<std::string> failures;  // "check(seed=...)" of rows not holding
  bool all_hold() const { return failures.empty(); }
};

SuiteSummary summarize(const std::vector<NamedReport>& rows);

// Shared instance family: rows x cols target with `rank` planted rank-one
// terms of decreasing strength plus entrywise noise at the given level.
Matrix noisy_lowrank_target(Eigen::Index rows, Eigen::Index cols, int rank,
                            std::uint64_t seed, double noise = 0.02);

}  // namespace lowrank
