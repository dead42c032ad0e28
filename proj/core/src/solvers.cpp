#include "lowrank/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "lowrank/errors.hpp"
#include "lowrank/matrix_market.hpp"
#include "lowrank/parallel.hpp"
#include "lowrank/rng.hpp"

namespace lowrank {

void RunHistory::write_csv(std::ostream& out) const {
  out << "iteration,gain,f_after,sigma_estimate\n";
  for (const IterationRecord& r : records)
    out << r.iteration << "," << format_double(r.gain) << ","
        << format_double(r.f_after) << "," << format_double(r.sigma_estimate)
        << "\n";
}

namespace {

// Gains below this fraction of the current value are treated as converged.
double gain_floor(double f_current) {
  return 1e-10 * (1.0 + std::abs(f_current));
}

double power_tol_for_tau(double tau) {
  return std::clamp(1.0 - tau, 1e-10, 0.5);
}

// Zero-padded warm start for a support that grew to `k` atoms.
Matrix pad_coefficients(const std::optional<Matrix>& h, Eigen::Index k) {
  Matrix padded = Matrix::Zero(k, k);
  if (h && h->size() > 0) padded.topLeftCorner(h->rows(), h->cols()) = *h;
  return padded;
}

struct PoolChoice {
  std::size_t index = 0;
  double gain = 0.0;
  RefitSolution fit;  // refit of support + pool[index]
};

// Refit-scores every pool atom as an addition to `support` and picks the
// first one whose gain reaches tau * best (the lowest-index argmax when
// tau = 1). Candidate refits run on cfg.jobs threads writing per-index
// slots, so the result does not depend on scheduling. Returns nullopt when
// no gain is positive.
std::optional<PoolChoice> score_pool(const Objective& objective,
                                     const SupportSet& support,
                                     const std::vector<Atom>& pool,
                                     double f_current,
                                     const std::optional<Matrix>& warm_h,
                                     const SolverConfig& cfg) {
  if (pool.empty()) throw EmptyPoolError("greedy_select: empty candidate pool");

  const Eigen::Index grown = static_cast<Eigen::Index>(support.size()) + 1;
  const Matrix warm = pad_coefficients(warm_h, grown);

  std::vector<RefitSolution> fits(pool.size());
  parallel_for(pool.size(), cfg.jobs, [&](std::size_t i) {
    SupportSet trial = support;
    trial.push_back(pool[i]);
    fits[i] = refit(trial, objective, cfg.refit_tol, cfg.refit_max_iter, warm);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i)
    if (fits[i].f_value > fits[best].f_value) best = i;
  const double best_gain = fits[best].f_value - f_current;
  if (!(best_gain > 0.0)) return std::nullopt;  // all gains nonpositive

  const double threshold = cfg.tau * best_gain;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double gain = fits[i].f_value - f_current;
    if (gain >= threshold)
      return PoolChoice{i, gain, std::move(fits[i])};
  }
  return PoolChoice{best, best_gain, std::move(fits[best])};  // tau <= 0 guard
}

}  // namespace

std::optional<SelectedAtom> omp_select(const Objective& objective,
                                       const Matrix& estimate, double tau,
                                       std::uint64_t seed, int power_max_iter) {
  const Matrix grad = objective.gradient(estimate);
  if (grad.norm() < kZeroMatrixThreshold) return std::nullopt;  // converged
  const SingularTriple top =
      top_singular_pair(grad, power_tol_for_tau(tau), power_max_iter, seed);
  SelectedAtom s;
  s.atom = Atom{top.u, top.v};
  s.sigma = top.sigma;
  return s;
}

std::optional<SelectedAtom> greedy_select(const Objective& objective,
                                          const SupportSet& support,
                                          const std::vector<Atom>& pool,
                                          double f_current,
                                          const std::optional<Matrix>& warm_h,
                                          const SolverConfig& cfg) {
  auto choice = score_pool(objective, support, pool, f_current, warm_h, cfg);
  if (!choice) return std::nullopt;
  SelectedAtom s;
  s.atom = pool[choice->index];
  s.gain = choice->gain;
  s.pool_index = choice->index;
  return s;
}

std::vector<Atom> random_atom_pool(Eigen::Index n, Eigen::Index d, int count,
                                   std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<Atom> pool;
  pool.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i)
    pool.push_back(Atom{random_unit_vector(rng, n), random_unit_vector(rng, d)});
  return pool;
}

std::vector<std::vector<Atom>> partition_round_robin(
    const std::vector<Atom>& pool, int partitions) {
  if (partitions <= 0)
    throw EmptyPoolError("partition_round_robin: need at least one partition");
  std::vector<std::vector<Atom>> out(static_cast<std::size_t>(partitions));
  for (std::size_t i = 0; i < pool.size(); ++i)
    out[i % static_cast<std::size_t>(partitions)].push_back(pool[i]);
  return out;
}

namespace {

// Candidates for one outer iteration, already orthogonal to the support.
struct Proposal {
  std::vector<Atom> pool;
  double sigma = 0.0;  // gradient certificate, 0 when not applicable
};

// Shared outer loop of every solver: propose candidates, score, append the
// winner, keep its refit. `propose` returns nullopt to stop early;
// `consumed` (optional) learns the winning pool index so fixed-pool
// variants can retire the original atom.
SolverResult run_outer(
    const Objective& objective, const SolverConfig& cfg,
    const std::function<std::optional<Proposal>(int iter,
                                                const SupportSet& support,
                                                const Matrix& estimate)>& propose,
    const std::function<void(std::size_t pool_index)>& consumed = nullptr) {
  SolverResult res;
  res.refit.coefficients = Matrix(0, 0);
  res.refit.estimate = Matrix::Zero(objective.rows(), objective.cols());
  res.refit.f_value = 0.0;
  double f_current = 0.0;
  std::optional<Matrix> warm;

  for (int iter = 1; iter <= cfg.k; ++iter) {
    auto proposal = propose(iter, res.support, res.refit.estimate);
    if (!proposal) break;
    if (proposal->pool.empty()) break;  // candidates died in orthogonalization

    auto choice = score_pool(objective, res.support, proposal->pool, f_current,
                             warm, cfg);
    if (!choice) break;                                 // no positive gain
    if (choice->gain <= gain_floor(f_current)) break;   // no material progress
    if (consumed) consumed(choice->index);

    res.support.push_back(proposal->pool[choice->index]);

    IterationRecord rec;
    rec.iteration = iter;
    rec.gain = choice->fit.f_value - f_current;
    rec.f_after = choice->fit.f_value;
    rec.sigma_estimate = proposal->sigma;
    rec.refit_converged = choice->fit.converged;
    res.history.records.push_back(rec);

    f_current = choice->fit.f_value;
    warm = choice->fit.coefficients;
    res.refit = std::move(choice->fit);
  }
  return res;
}

}  // namespace

SolverResult run_greedy(const Objective& objective, const SolverConfig& cfg) {
  return run_outer(
      objective, cfg,
      [&](int iter, const SupportSet& support,
          const Matrix& estimate) -> std::optional<Proposal> {
        const std::string tag = std::to_string(iter);
        const auto omp =
            omp_select(objective, estimate, cfg.tau,
                       derive_seed(cfg.seed, "omp-" + tag), cfg.power_max_iter);
        if (!omp) return std::nullopt;  // zero gradient: converged
        Proposal p;
        p.sigma = omp->sigma;
        std::vector<Atom> raw;
        raw.reserve(static_cast<std::size_t>(std::max(cfg.pool_size, 1)));
        raw.push_back(omp->atom);
        const auto extra = random_atom_pool(
            objective.rows(), objective.cols(), cfg.pool_size - 1,
            derive_seed(cfg.seed, "pool-" + tag));
        raw.insert(raw.end(), extra.begin(), extra.end());
        p.pool = sequential_orthogonalize(raw, support);
        return p;
      });
}

SolverResult run_greedy(const Objective& objective,
                        const std::vector<Atom>& pool,
                        const SolverConfig& cfg) {
  if (pool.empty()) throw EmptyPoolError("run_greedy: empty fixed pool");
  // Selection is without replacement: the winner's original atom leaves
  // `remaining`, everything else is re-orthogonalized against the grown
  // support next iteration.
  std::vector<Atom> remaining = pool;
  std::vector<std::size_t> kept;
  return run_outer(
      objective, cfg,
      [&](int /*iter*/, const SupportSet& support,
          const Matrix& /*estimate*/) -> std::optional<Proposal> {
        if (remaining.empty()) return std::nullopt;
        Proposal p;
        p.pool = sequential_orthogonalize(remaining, support, 1e-8, &kept);
        return p;
      },
      [&](std::size_t pool_index) {
        remaining.erase(remaining.begin() +
                        static_cast<std::ptrdiff_t>(kept[pool_index]));
      });
}

SolverResult run_geco(const Objective& objective, const SolverConfig& cfg) {
  return run_outer(
      objective, cfg,
      [&](int iter, const SupportSet& support,
          const Matrix& estimate) -> std::optional<Proposal> {
        const auto omp = omp_select(
            objective, estimate, cfg.tau,
            derive_seed(cfg.seed, "omp-" + std::to_string(iter)),
            cfg.power_max_iter);
        if (!omp) return std::nullopt;
        Proposal p;
        p.sigma = omp->sigma;
        p.pool = sequential_orthogonalize({omp->atom}, support);
        return p;
      });
}

DistributedResult run_distributed_greedy(
    const Objective& objective, const std::vector<std::vector<Atom>>& pools,
    const SolverConfig& cfg) {
  if (pools.empty())
    throw EmptyPoolError("run_distributed_greedy: no partitions");

  DistributedResult out;
  const std::size_t l = pools.size();

  if (l == 1) {
    // The merge step would re-run greedy on exactly the atoms partition 0
    // selected; the round trip changes nothing, so return that run as is.
    SolverResult only = run_greedy(objective, pools[0], cfg);
    out.merged_f_value = only.refit.f_value;
    out.partition_f_values = {only.refit.f_value};
    out.result = std::move(only);
    out.merged_won = false;
    return out;
  }

  std::vector<SolverResult> parts(l);
  parallel_for(l, cfg.jobs, [&](std::size_t j) {
    if (pools[j].empty())
      throw EmptyPoolError("run_distributed_greedy: partition " +
                           std::to_string(j) + " is empty");
    parts[j] = run_greedy(objective, pools[j], cfg);
  });

  out.partition_f_values.resize(l);
  std::size_t best_j = 0;
  for (std::size_t j = 0; j < l; ++j) {
    out.partition_f_values[j] = parts[j].refit.f_value;
    if (parts[j].refit.f_value > parts[best_j].refit.f_value) best_j = j;
  }

  // Union of the selected atoms, partition-major then selection order.
  std::vector<Atom> merged_pool;
  for (const SolverResult& p : parts)
    for (const Atom& a : p.support.atoms()) merged_pool.push_back(a);

  SolverResult merged;
  if (!merged_pool.empty()) {
    merged = run_greedy(objective, merged_pool, cfg);
  } else {
    merged.refit.coefficients = Matrix(0, 0);
    merged.refit.estimate = Matrix::Zero(objective.rows(), objective.cols());
  }
  out.merged_f_value = merged.refit.f_value;

  // Ties go to the best partition run.
  if (merged.refit.f_value > parts[best_j].refit.f_value) {
    out.result = std::move(merged);
    out.merged_won = true;
  } else {
    out.result = std::move(parts[best_j]);
    out.merged_won = false;
  }
  return out;
}

}  // namespace lowrank
