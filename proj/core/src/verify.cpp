#include "lowrank/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "lowrank/errors.hpp"
#include "lowrank/experiments.hpp"
#include "lowrank/linalg.hpp"
#include "lowrank/parallel.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/solvers.hpp"

namespace lowrank {

Matrix noisy_lowrank_target(Eigen::Index rows, Eigen::Index cols, int rank,
                            std::uint64_t seed, double noise) {
  auto rng = make_rng(derive_seed(seed, "target"));
  Matrix y = Matrix::Zero(rows, cols);
  for (int i = 0; i < rank; ++i) {
    const double strength = std::max(3.0 - 0.5 * i, 0.5);
    const Vector u = random_unit_vector(rng, rows);
    const Vector v = random_unit_vector(rng, cols);
    y += strength * u * v.transpose();
  }
  if (noise > 0.0) y += noise * random_gaussian_matrix(rng, rows, cols);
  return y;
}

namespace {

// ---------------------------------------------------------------------------
// Shared instance helpers
// ---------------------------------------------------------------------------

// Gradient with the support's row and column spaces projected out. Candidate
// atoms drawn from this matrix are exactly orthogonal to the support, and its
// singular pairs are mutually uncorrelated through the gradient — the
// configuration the ratio and gain bounds are stated for.
Matrix deflated_gradient(const Objective& objective, const SupportSet& support) {
  const Matrix estimate =
      support.empty()
          ? Matrix::Zero(objective.rows(), objective.cols())
          : refit(support, objective).estimate;
  Matrix g = objective.gradient(estimate);
  if (support.empty()) return g;
  const Matrix u = support.stacked_u();  // |L| x n, orthonormal rows
  const Matrix v = support.stacked_v();  // |L| x d, orthonormal rows
  const Matrix pu_g = u.transpose() * (u * g);
  const Matrix g_pv = (g * v.transpose()) * v;
  const Matrix pu_g_pv = u.transpose() * ((u * g) * v.transpose()) * v;
  return g - pu_g - g_pv + pu_g_pv;
}

SupportSet random_support(Eigen::Index n, Eigen::Index d, int count,
                          std::uint64_t seed) {
  SupportSet support;
  if (count <= 0) return support;
  const std::vector<Atom> ortho =
      sequential_orthogonalize(random_atom_pool(n, d, count, seed), support);
  for (const Atom& a : ortho) support.push_back(a);
  return support;
}

Matrix uniform_matrix(std::mt19937_64& rng, Eigen::Index rows,
                      Eigen::Index cols) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = unif(rng);
  return out;
}

Matrix bernoulli_matrix(std::mt19937_64& rng, Eigen::Index rows,
                        Eigen::Index cols, double p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = unif(rng) < p ? 1.0 : 0.0;
  return out;
}

Vector vec_row_major_local(const Matrix& theta) {
  Vector out(theta.size());
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < theta.rows(); ++i)
    for (Eigen::Index j = 0; j < theta.cols(); ++j) out[p++] = theta(i, j);
  return out;
}

LinearMeasurements make_measurement_instance(Eigen::Index m1, Eigen::Index m2,
                                             Eigen::Index n_samples,
                                             std::uint64_t seed,
                                             double noise) {
  auto rng = make_rng(derive_seed(seed, "design"));
  const Matrix stacked = random_gaussian_matrix(rng, n_samples, m1 * m2);
  const Matrix theta0 = noisy_lowrank_target(m1, m2, 2, derive_seed(seed, "planted"), 0.0);
  Vector targets = stacked * vec_row_major_local(0.5 * theta0);
  if (noise > 0.0) {
    auto noise_rng = make_rng(derive_seed(seed, "noise"));
    std::normal_distribution<double> gauss(0.0, noise);
    for (Eigen::Index i = 0; i < targets.size(); ++i) targets[i] += gauss(noise_rng);
  }
  return LinearMeasurements(stacked, std::move(targets), m1, m2);
}

// Runs `make_rows` once per instance (possibly on several threads) and
// flattens the per-instance row blocks in instance order, so the output is
// independent of scheduling.
template <typename Fn>
std::vector<NamedReport> indexed_rows(int count, int jobs, Fn&& make_rows) {
  std::vector<std::vector<NamedReport>> parts(
      static_cast<std::size_t>(std::max(count, 0)));
  parallel_for(parts.size(), jobs,
               [&](std::size_t i) { parts[i] = make_rows(static_cast<int>(i)); });
  std::vector<NamedReport> rows;
  for (auto& block : parts)
    rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

NamedReport named(std::string check, std::uint64_t seed, BoundReport report) {
  NamedReport row;
  row.check = std::move(check);
  row.seed = seed;
  row.report = report;
  return row;
}

// ---------------------------------------------------------------------------
// gradients: finite differences and midpoint concavity on all four losses
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_gradients(int instances, const SuiteConfig& cfg) {
  const int points = instances;
  const int segments = std::max(5, instances * 5 / 2);
  struct LossCase {
    const char* name;
    std::function<std::unique_ptr<Objective>(std::uint64_t)> make;
  };

  auto make_quadratic = [](std::uint64_t s) -> std::unique_ptr<Objective> {
    auto rng = make_rng(derive_seed(s, "data"));
    return std::make_unique<QuadraticFull>(random_gaussian_matrix(rng, 6, 5));
  };
  auto make_measurement = [](std::uint64_t s) -> std::unique_ptr<Objective> {
    return std::make_unique<LinearMeasurements>(
        make_measurement_instance(5, 4, 40, s, 0.1));
  };
  auto make_logistic = [](std::uint64_t s) -> std::unique_ptr<Objective> {
    auto rng = make_rng(derive_seed(s, "data"));
    return std::make_unique<LogisticPCA>(bernoulli_matrix(rng, 6, 5, 0.4));
  };
  auto make_binomial = [](std::uint64_t s) -> std::unique_ptr<Objective> {
    auto rng = make_rng(derive_seed(s, "data"));
    return std::make_unique<BinomialCounts>(uniform_matrix(rng, 6, 5));
  };
  const std::vector<LossCase> losses = {
      {"quadratic", make_quadratic},
      {"measurement", make_measurement},
      {"logistic", make_logistic},
      {"binomial", make_binomial},
  };

  const int per_loss = points + segments;
  return indexed_rows(
      static_cast<int>(losses.size()) * per_loss, cfg.jobs, [&](int idx) {
        const LossCase& loss = losses[static_cast<std::size_t>(idx / per_loss)];
        const int j = idx % per_loss;
        std::vector<NamedReport> rows;
        if (j < points) {
          const std::uint64_t seed = derive_seed(
              cfg.seed, std::string("gradients-") + loss.name + "-" +
                            std::to_string(j));
          const auto objective = loss.make(seed);
          auto rng = make_rng(derive_seed(seed, "point"));
          const Matrix theta =
              0.7 * random_gaussian_matrix(rng, objective->rows(),
                                           objective->cols());
          const double err = check_gradient(*objective, theta);
          rows.push_back(named(std::string("gradient_") + loss.name, seed,
                               BoundReport::greater_equal_abs(1e-5, err, 0.0)));
        } else {
          const int s = j - points;
          const std::uint64_t seed = derive_seed(
              cfg.seed, std::string("concavity-") + loss.name + "-" +
                            std::to_string(s));
          const auto objective = loss.make(seed);
          auto rng = make_rng(derive_seed(seed, "segment"));
          const Matrix x = 0.8 * random_gaussian_matrix(rng, objective->rows(),
                                                        objective->cols());
          const Matrix y = 0.8 * random_gaussian_matrix(rng, objective->rows(),
                                                        objective->cols());
          const double mid = objective->value(0.5 * (x + y));
          const double avg = 0.5 * (objective->value(x) + objective->value(y));
          rows.push_back(named(std::string("concave_") + loss.name, seed,
                               BoundReport::greater_equal(mid, avg, 1e-9)));
        }
        return rows;
      });
}

// ---------------------------------------------------------------------------
// monotone: nested-support monotonicity and gain positivity (Bernoulli losses)
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_monotone(int instances, const SuiteConfig& cfg) {
  return indexed_rows(instances, cfg.jobs, [&](int i) {
    const std::uint64_t seed =
        derive_seed(cfg.seed, "monotone-" + std::to_string(i));
    std::vector<NamedReport> rows;

    auto rng = make_rng(derive_seed(seed, "data"));
    const BinomialCounts counts(uniform_matrix(rng, 8, 6));
    const SupportSet full = random_support(8, 6, 3, derive_seed(seed, "atoms"));
    double prev = 0.0;
    SupportSet prefix;
    for (std::size_t t = 0; t < full.size(); ++t) {
      prefix.push_back(full[t]);
      const double f = set_value(prefix, counts, 1e-8, 5000);
      rows.push_back(named("monotone_nested", seed,
                           BoundReport::greater_equal_abs(f, prev, 1e-6)));
      prev = f;
    }

    auto data_rng = make_rng(derive_seed(seed, "graph"));
    const LogisticPCA logistic(bernoulli_matrix(data_rng, 8, 6, 0.4));
    SolverConfig solver;
    solver.k = 2;
    solver.pool_size = 6;
    solver.seed = derive_seed(seed, "solver");
    solver.jobs = 1;
    const SolverResult run = run_greedy(logistic, solver);
    for (const IterationRecord& rec : run.history.records)
      rows.push_back(named("monotone_gain", seed,
                           BoundReport::greater_equal_abs(rec.gain, 0.0, 1e-9)));
    return rows;
  });
}

// ---------------------------------------------------------------------------
// ratio: submodularity ratio bounds
// ---------------------------------------------------------------------------

// Candidate set for the ratio checks: top singular pairs of the deflated
// gradient at the support's refit. These are exactly orthogonal to the
// support and mutually uncorrelated through the gradient, which is the
// configuration the lower bound is proved for (and the one the solvers
// actually generate).
std::vector<Atom> ratio_candidates(const Objective& objective,
                                   const SupportSet& support, int count,
                                   std::uint64_t seed) {
  const Matrix g = deflated_gradient(objective, support);
  return svd_truncation_oracle(g, count, seed).atoms;
}

std::vector<NamedReport> suite_ratio(int instances, const SuiteConfig& cfg) {
  // Full-observation quadratic instances: the ratio equals 1 and the
  // curvature bound m/M equals 1.
  std::vector<NamedReport> rows =
      indexed_rows(instances, cfg.jobs, [&](int i) {
        const std::uint64_t seed =
            derive_seed(cfg.seed, "ratio-" + std::to_string(i));
        auto rng = make_rng(derive_seed(seed, "data"));
        const Eigen::Index n = 3 + (i * 7) % 6;
        const Eigen::Index d = 3 + (i * 5) % 6;
        const QuadraticFull objective(random_gaussian_matrix(rng, n, d));
        const int l_count = i % 3;
        const int s_count = 1 + (i / 3) % 3;
        const SupportSet support =
            random_support(n, d, l_count, derive_seed(seed, "support"));

        std::vector<NamedReport> out;
        double gamma = std::numeric_limits<double>::infinity();
        try {
          const std::vector<Atom> candidates = ratio_candidates(
              objective, support, s_count, derive_seed(seed, "candidates"));
          gamma = submodularity_ratio(objective, support, candidates);
        } catch (const ZeroMatrixError&) {
          // deflated gradient vanished; ratio undefined
        }
        if (!std::isfinite(gamma)) {
          out.push_back(named("ratio_exact_lower", seed, BoundReport::vacuous_report()));
          out.push_back(named("ratio_exact_upper", seed, BoundReport::vacuous_report()));
          out.push_back(named("ratio_bound", seed, BoundReport::vacuous_report()));
          return out;
        }
        out.push_back(named("ratio_exact_lower", seed,
                            BoundReport::greater_equal_abs(gamma, 1.0, 1e-8)));
        out.push_back(named("ratio_exact_upper", seed,
                            BoundReport::greater_equal_abs(1.0, gamma, 1e-8)));
        const CurvaturePair curv = quadratic_curvature(objective);
        out.push_back(named("ratio_bound", seed,
                            BoundReport::greater_equal_abs(gamma, curv.m / curv.M,
                                                           1e-6)));
        return out;
      });

  // Measurement-loss instances: m/M < 1, checked against the power-iteration
  // curvature of the design Gram matrix.
  const int meas = std::max(instances / 5, 1);
  std::vector<NamedReport> meas_rows =
      indexed_rows(meas, cfg.jobs, [&](int i) {
        const std::uint64_t seed =
            derive_seed(cfg.seed, "ratio-measurement-" + std::to_string(i));
        const Eigen::Index m1 = 4 + i % 3;
        const Eigen::Index m2 = 4;
        const LinearMeasurements objective =
            make_measurement_instance(m1, m2, 3 * m1 * m2, seed, 0.05);
        const SupportSet support =
            random_support(m1, m2, i % 2, derive_seed(seed, "support"));

        std::vector<NamedReport> out;
        try {
          const CurvaturePair curv = quadratic_curvature(objective);
          const std::vector<Atom> candidates = ratio_candidates(
              objective, support, 2, derive_seed(seed, "candidates"));
          const double gamma = submodularity_ratio(objective, support, candidates);
          out.push_back(named(
              "ratio_measurement", seed,
              std::isfinite(gamma)
                  ? BoundReport::greater_equal_abs(gamma, curv.m / curv.M, 1e-6)
                  : BoundReport::vacuous_report()));
        } catch (const SingularDesignError&) {
          out.push_back(named("ratio_measurement", seed, BoundReport::vacuous_report()));
        } catch (const ZeroMatrixError&) {
          out.push_back(named("ratio_measurement", seed, BoundReport::vacuous_report()));
        }
        return out;
      });
  rows.insert(rows.end(), meas_rows.begin(), meas_rows.end());
  return rows;
}

// ---------------------------------------------------------------------------
// svd: the linear-selection solver reaches the best rank-r value
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_svd(int instances, const SuiteConfig& cfg) {
  return indexed_rows(instances, cfg.jobs, [&](int i) {
    const std::uint64_t seed = derive_seed(cfg.seed, "svd-" + std::to_string(i));
    const Matrix y = noisy_lowrank_target(20, 15, 5, derive_seed(seed, "target"));
    const QuadraticFull objective(y);
    const TruncationOracle oracle =
        svd_truncation_oracle(y, 5, derive_seed(seed, "oracle"));
    SolverConfig solver;
    solver.k = 5;
    solver.tau = 1.0 - 1e-6;
    solver.seed = derive_seed(seed, "solver");
    solver.jobs = 1;
    const SolverResult run = run_geco(objective, solver);
    std::vector<NamedReport> rows;
    rows.push_back(named("svd_optimum", seed,
                         BoundReport::greater_equal_abs(
                             run.refit.f_value, 0.999 * oracle.f_opt, 1e-9)));
    return rows;
  });
}

// ---------------------------------------------------------------------------
// guarantee: approximation factor of the linear-selection solver across k
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_guarantee(int instances, const SuiteConfig& cfg) {
  return indexed_rows(instances, cfg.jobs, [&](int i) {
    const std::uint64_t seed =
        derive_seed(cfg.seed, "guarantee-" + std::to_string(i));
    const Matrix y = noisy_lowrank_target(20, 15, 5, derive_seed(seed, "target"));
    const QuadraticFull objective(y);
    const double opt =
        svd_truncation_oracle(y, 5, derive_seed(seed, "oracle")).f_opt;
    std::vector<NamedReport> rows;
    for (int k = 1; k <= 10; ++k) {
      SolverConfig solver;
      solver.k = k;
      solver.tau = 1.0 - 1e-6;
      solver.seed = derive_seed(seed, "k-" + std::to_string(k));
      solver.jobs = 1;
      NamedReport row =
          check_geco_guarantee(objective, CurvaturePair{2.0, 2.0}, solver, 5, opt);
      row.check = "guarantee_k" + std::to_string(k);
      row.seed = seed;
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

// ---------------------------------------------------------------------------
// gains: per-iteration improvement lower bounds
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_gains(int instances, const SuiteConfig& cfg) {
  return indexed_rows(instances, cfg.jobs, [&](int i) {
    const std::uint64_t seed = derive_seed(cfg.seed, "gains-" + std::to_string(i));
    const Matrix y = noisy_lowrank_target(12, 10, 5, derive_seed(seed, "target"));
    const QuadraticFull objective(y);
    const int r = 5;
    const double opt =
        svd_truncation_oracle(y, r, derive_seed(seed, "oracle")).f_opt;

    SolverConfig greedy_cfg;
    greedy_cfg.k = r;
    greedy_cfg.tau = 1.0;
    greedy_cfg.pool_size = 8;
    greedy_cfg.seed = derive_seed(seed, "greedy");
    greedy_cfg.jobs = 1;
    const SolverResult greedy = run_greedy(objective, greedy_cfg);

    // Ratio of each visited prefix against the deflated-gradient candidates;
    // the smallest value is a uniform per-iteration factor.
    double gamma_min = std::numeric_limits<double>::infinity();
    SupportSet prefix;
    for (std::size_t t = 0; t < greedy.history.records.size(); ++t) {
      try {
        const std::vector<Atom> candidates = ratio_candidates(
            objective, prefix, r, derive_seed(seed, "prefix-" + std::to_string(t)));
        const double gamma = submodularity_ratio(objective, prefix, candidates);
        if (std::isfinite(gamma)) gamma_min = std::min(gamma_min, gamma);
      } catch (const ZeroMatrixError&) {
        // dead gradient at this prefix: that iteration's bound is void
      }
      if (t < greedy.support.size()) prefix.push_back(greedy.support[t]);
    }
    if (!std::isfinite(gamma_min)) gamma_min = 1.0;

    std::vector<NamedReport> rows = check_iteration_gains(
        greedy.history, opt, greedy_cfg.tau * gamma_min / r, "gain_greedy",
        seed, 1e-6);

    SolverConfig linear_cfg;
    linear_cfg.k = r;
    linear_cfg.tau = 1.0 - 1e-6;
    linear_cfg.seed = derive_seed(seed, "linear");
    linear_cfg.jobs = 1;
    const SolverResult linear = run_geco(objective, linear_cfg);
    const CurvaturePair curv = quadratic_curvature(objective);
    const double linear_factor =
        linear_cfg.tau * linear_cfg.tau * (curv.m / curv.M) / r;
    std::vector<NamedReport> linear_rows = check_iteration_gains(
        linear.history, opt, linear_factor, "gain_linear", seed, 1e-6);
    rows.insert(rows.end(), linear_rows.begin(), linear_rows.end());
    return rows;
  });
}

// ---------------------------------------------------------------------------
// recovery: parameter-recovery bound on noisy measurement instances
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_recovery(int instances, const SuiteConfig& cfg) {
  return indexed_rows(instances, cfg.jobs, [&](int i) {
    const std::uint64_t seed =
        derive_seed(cfg.seed, "recovery-" + std::to_string(i));
    RecoveryConfig rc;
    rc.seed = seed;
    const RecoveryReport rep = run_recovery_experiment(rc);
    BoundReport bound;
    if (rep.vacuous) {
      bound = BoundReport::vacuous_report();
    } else {
      bound.lhs = rep.bound_rhs;
      bound.rhs = rep.recovery_error;
      bound.slack = bound.lhs - bound.rhs;
      bound.holds = rep.holds;
      bound.vacuous = false;
    }
    std::vector<NamedReport> rows;
    rows.push_back(named("recovery_bound", seed, bound));
    return rows;
  });
}

// ---------------------------------------------------------------------------
// sandwich: projected-gradient sandwich of the set value
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_sandwich(int instances, const SuiteConfig& cfg) {
  return indexed_rows(instances, cfg.jobs, [&](int i) {
    const std::uint64_t seed =
        derive_seed(cfg.seed, "sandwich-" + std::to_string(i));
    std::vector<NamedReport> rows;
    if (i % 2 == 0) {
      auto rng = make_rng(derive_seed(seed, "data"));
      const Eigen::Index n = 5 + i % 4;
      const Eigen::Index d = 4 + i % 3;
      const QuadraticFull objective(random_gaussian_matrix(rng, n, d));
      const SupportSet support =
          random_support(n, d, 1 + (i / 2) % 3, derive_seed(seed, "support"));
      const SandwichReports sr = check_subadditivity_lemmas(
          objective, support, CurvaturePair{2.0, 2.0}, seed);
      rows.push_back(sr.lower);
      rows.push_back(sr.upper);
      // m = M makes the sandwich collapse: both sides equal f(S).
      const double f = sr.lower.report.lhs;
      const double side = sr.lower.report.rhs;
      rows.push_back(named("sandwich_equality", seed,
                           BoundReport::greater_equal_abs(
                               1e-8 * (1.0 + std::abs(f)), std::abs(f - side),
                               0.0)));
    } else {
      const LinearMeasurements objective =
          make_measurement_instance(6, 5, 200, seed, 0.1);
      const SupportSet support =
          random_support(6, 5, 2, derive_seed(seed, "support"));
      try {
        const CurvaturePair curv = quadratic_curvature(objective);
        const SandwichReports sr =
            check_subadditivity_lemmas(objective, support, curv, seed);
        rows.push_back(sr.lower);
        rows.push_back(sr.upper);
      } catch (const SingularDesignError&) {
        rows.push_back(named("sandwich_lower", seed, BoundReport::vacuous_report()));
        rows.push_back(named("sandwich_upper", seed, BoundReport::vacuous_report()));
      }
    }
    return rows;
  });
}

// ---------------------------------------------------------------------------
// distributed: merged solution at least as good as every partition
// ---------------------------------------------------------------------------

std::vector<NamedReport> suite_distributed(int instances, const SuiteConfig& cfg) {
  return indexed_rows(instances, cfg.jobs, [&](int i) {
    const std::uint64_t seed =
        derive_seed(cfg.seed, "distributed-" + std::to_string(i));
    const Matrix y = noisy_lowrank_target(10, 8, 3, derive_seed(seed, "target"));
    const QuadraticFull objective(y);
    const std::vector<Atom> pool =
        random_atom_pool(10, 8, 12, derive_seed(seed, "pool"));
    std::vector<NamedReport> rows;
    for (int l = 2; l <= 3; ++l) {
      SolverConfig solver;
      solver.k = 3;
      solver.tau = 1.0;
      solver.seed = derive_seed(seed, "parts-" + std::to_string(l));
      solver.jobs = 1;
      const DistributedResult dist = run_distributed_greedy(
          objective, partition_round_robin(pool, l), solver);
      const double best_partition = *std::max_element(
          dist.partition_f_values.begin(), dist.partition_f_values.end());
      rows.push_back(named("distributed_best_l" + std::to_string(l), seed,
                           BoundReport::greater_equal_abs(
                               dist.result.refit.f_value, best_partition, 1e-9)));
    }
    return rows;
  });
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

struct SuiteEntry {
  const char* name;
  int default_instances;
  std::vector<NamedReport> (*run)(int, const SuiteConfig&);
};

constexpr SuiteEntry kSuites[] = {
    {"gradients", 20, suite_gradients},
    {"monotone", 20, suite_monotone},
    {"ratio", 200, suite_ratio},
    {"svd", 20, suite_svd},
    {"guarantee", 20, suite_guarantee},
    {"gains", 20, suite_gains},
    {"recovery", 50, suite_recovery},
    {"sandwich", 100, suite_sandwich},
    {"distributed", 10, suite_distributed},
};

std::vector<NamedReport> run_composite(bool quick, const SuiteConfig& cfg) {
  std::vector<NamedReport> rows;
  for (const SuiteEntry& entry : kSuites) {
    int count = cfg.instances > 0 ? cfg.instances : entry.default_instances;
    if (quick && cfg.instances <= 0)
      count = std::max(2, entry.default_instances / 10);
    std::vector<NamedReport> part = entry.run(count, cfg);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace

std::vector<NamedReport> run_suite(const std::string& name,
                                   const SuiteConfig& cfg) {
  if (name == "quick") return run_composite(true, cfg);
  if (name == "all") return run_composite(false, cfg);
  for (const SuiteEntry& entry : kSuites) {
    if (name == entry.name) {
      const int count =
          cfg.instances > 0 ? cfg.instances : entry.default_instances;
      return entry.run(count, cfg);
    }
  }
  throw Error("unknown verification suite: '" + name + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const SuiteEntry& entry : kSuites) out.emplace_back(entry.name);
    out.emplace_back("quick");
    out.emplace_back("all");
    return out;
  }();
  return names;
}

SuiteSummary summarize(const std::vector<NamedReport>& rows) {
  SuiteSummary summary;
  summary.total = static_cast<int>(rows.size());
  for (const NamedReport& row : rows) {
    if (row.report.vacuous) {
      ++summary.vacuous;
    } else if (!row.report.holds) {
      summary.failures.push_back(row.check + "(seed=" +
                                 std::to_string(row.seed) + ")");
    }
  }
  return summary;
}

}  // namespace lowrank
