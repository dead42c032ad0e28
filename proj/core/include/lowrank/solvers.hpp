#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lowrank/atoms.hpp"
#include "lowrank/linalg.hpp"
#include "lowrank/objective.hpp"

namespace lowrank {

// One outer iteration of a solver run.
struct IterationRecord {
  int iteration = 0;        // 1-based
  double gain = 0.0;        // f(S_i) - f(S_{i-1})
  double f_after = 0.0;     // f(S_i)
  double sigma_estimate = 0.0;  // power-iteration sigma of the gradient
  bool refit_converged = true;
};

// Full trace of a solver run. f_after is nondecreasing and gains match its
// first differences by construction.
struct RunHistory {
  std::vector<IterationRecord> records;

  // CSV with header iteration,gain,f_after,sigma_estimate.
  void write_csv(std::ostream& out) const;
};

struct SolverConfig {
  int k = 5;                   // atoms to select
  double tau = 1.0;            // selection approximation factor in (0, 1]
  int pool_size = 16;          // candidates per iteration (pool-based greedy)
  std::uint64_t seed = 0;      // stream seed for starts and pool draws
  double refit_tol = 1e-8;     // relative gradient tolerance of the refit
  int refit_max_iter = 10000;  // inner iteration budget of the refit
  int power_max_iter = 20000;  // sweep budget of the power iteration
  int jobs = 1;                // worker threads for candidate scoring
};

struct SolverResult {
  SupportSet support;
  RefitSolution refit;
  RunHistory history;
};

// Atom proposed by a selection rule, with its certificate.
struct SelectedAtom {
  Atom atom;
  double sigma = 0.0;  // top_singular_pair estimate for omp_select
  double gain = 0.0;   // refit gain for greedy_select
  std::size_t pool_index = 0;
};

// Linear selection rule: the top singular pair of the gradient at the
// current estimate, which maximizes <grad, u v^T> over unit rank-one atoms.
// The power-iteration tolerance is 1 - tau clipped to [1e-10, 0.5], so the
// returned atom certifies <grad, u v^T> >= tau * sigma_1. Returns nullopt
// when the gradient is a zero matrix (the run has converged).
std::optional<SelectedAtom> omp_select(const Objective& objective,
                                       const Matrix& estimate, double tau,
                                       std::uint64_t seed,
                                       int power_max_iter = 20000);

// Pool selection rule: scores every pool atom by its refit gain
// f(L + {a}) - f(L) and returns the first atom whose gain reaches
// tau * (best pool gain); tau = 1 picks the argmax with ties broken by the
// lowest pool index. Pool atoms must already be orthogonal to the support
// (see sequential_orthogonalize). Scoring runs on cfg.jobs threads with
// per-index result slots, so the outcome is independent of scheduling.
// Returns nullopt when no pool atom has positive gain; throws
// EmptyPoolError on an empty pool.
std::optional<SelectedAtom> greedy_select(const Objective& objective,
                                          const SupportSet& support,
                                          const std::vector<Atom>& pool,
                                          double f_current,
                                          const std::optional<Matrix>& warm_h,
                                          const SolverConfig& cfg);

// Pool-based greedy: each iteration scores {omp_select atom} plus
// pool_size - 1 seeded random unit atoms (all orthogonalized against the
// current support), appends the winner, and refits. Stops early when the
// gradient vanishes, the pool dies out, or the best gain falls below
// 1e-10 * (1 + |f|).
SolverResult run_greedy(const Objective& objective, const SolverConfig& cfg);

// Greedy restricted to a fixed, finite atom pool: iterations score the
// not-yet-selected pool atoms (orthogonalized against the support) and no
// omp/random candidates are added. Used by the distributed variant.
SolverResult run_greedy(const Objective& objective,
                        const std::vector<Atom>& pool,
                        const SolverConfig& cfg);

// Linear-selection greedy: each iteration appends the omp_select atom
// (orthogonalized against the support) and refits.
SolverResult run_geco(const Objective& objective, const SolverConfig& cfg);

// Distributed greedy over l disjoint pools: a fixed-pool greedy run per
// partition, then one more fixed-pool greedy run on the union of the atoms
// the partitions selected (ordered by partition index, then selection
// order). Returns the better of the merged solution and the best partition
// solution; f values of all l + 1 runs are reported. With l = 1 the merge
// would re-run greedy on exactly the atoms partition 0 selected, so the
// partition result is returned directly. Partition runs execute on
// cfg.jobs threads with per-partition seeds and result slots.
struct DistributedResult {
  SolverResult result;                     // the returned solution
  std::vector<double> partition_f_values;  // f(G_1), ..., f(G_l)
  double merged_f_value = 0.0;             // f of the union run
  bool merged_won = false;
};

DistributedResult run_distributed_greedy(const Objective& objective,
                                         const std::vector<std::vector<Atom>>& pools,
                                         const SolverConfig& cfg);

// Deals pool[i] to partition i % l; partitions are disjoint and their
// concatenation in round-robin order restores the pool's atoms.
std::vector<std::vector<Atom>> partition_round_robin(
    const std::vector<Atom>& pool, int partitions);

// Seeded pool of independent random unit atom pairs.
std::vector<Atom> random_atom_pool(Eigen::Index n, Eigen::Index d,
                                   int count, std::uint64_t seed);

}  // namespace lowrank
