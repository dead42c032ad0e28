// lowrank: command-line driver for greedy low-rank matrix estimation.
//
// Subcommands:
//   fit         select rank-one atoms for a loss and write the solution
//   verify      run numeric property suites and write a bound-report CSV
//   experiment  run the clustering or recovery study and write its CSV
//
// All randomness flows from one root seed (--seed, or the LOWRANK_SEED
// environment variable); reruns with the same seed produce byte-identical
// files at any --jobs value.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lowrank/analysis.hpp"
#include "lowrank/atoms.hpp"
#include "lowrank/errors.hpp"
#include "lowrank/experiments.hpp"
#include "lowrank/matrix_market.hpp"
#include "lowrank/objective.hpp"
#include "lowrank/parallel.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/solvers.hpp"
#include "lowrank/verify.hpp"

namespace {

using namespace lowrank;

// --------------------------------------------------------------------------
// Option bags
// --------------------------------------------------------------------------

struct FitOptions {
  std::string loss = "quadratic";
  std::string input;
  std::string design;
  std::string targets;
  int m1 = 0;
  int m2 = 0;
  std::string algorithm = "geco";
  int k = 5;
  double tau = -1.0;  // negative = per-algorithm default
  int pool_size = 16;
  int partitions = 2;
  double refit_tol = 1e-8;
  int refit_max_iter = 10000;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string output_dir = ".";
};

struct VerifyOptions {
  std::string suite;
  int instances = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string output;  // empty = stdout
};

struct SbmOptions {
  int n = 60;
  int k_true = 3;
  std::string p_grid = "0.55:0.95:0.05";
  int runs = 10;
  std::vector<int> hyper_k = {3, 5, 10};
  double refit_tol = 1e-6;
  int refit_max_iter = 2000;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string output = "sbm.csv";
};

struct RecoveryOptions {
  int m1 = 8;
  int m2 = 8;
  int r = 2;
  int n = 600;
  double sigma = 0.1;
  int k = 4;
  int instances = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string output = "recovery.csv";
};

// --------------------------------------------------------------------------
// Helpers
// --------------------------------------------------------------------------

std::vector<double> parse_grid(const std::string& spec) {
  double start = 0.0;
  double end = 0.0;
  double step = 0.0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(spec);
  if (!(in >> start >> c1 >> end >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof())
    throw CLI::ValidationError("--p-grid", "expected start:end:step, got '" + spec + "'");
  if (step <= 0.0)
    throw CLI::ValidationError("--p-grid", "step must be positive");
  if (start > end)
    throw CLI::ValidationError("--p-grid", "start exceeds end");
  const int count = static_cast<int>((end - start) / step + 1e-9) + 1;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Snap accumulated floating-point drift (0.55 + 8*0.05 = 0.950000...01)
    // so grid values print cleanly and rerun output stays stable.
    values.push_back(std::round((start + i * step) * 1e9) / 1e9);
  }
  return values;
}

void write_text_file(const std::string& path, const std::string& what,
                     const std::function<void(std::ostream&)>& emit) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw IoError("cannot open " + what + " file for writing: " + path);
  emit(out);
  if (!out) throw IoError("failed writing " + what + " file: " + path);
}

// --------------------------------------------------------------------------
// fit
// --------------------------------------------------------------------------

std::unique_ptr<Objective> make_loss(const FitOptions& opt) {
  if (opt.loss == "linear") {
    if (opt.design.empty() || opt.targets.empty() || opt.m1 < 1 || opt.m2 < 1)
      throw Error("loss 'linear' needs --design, --targets, --m1 and --m2");
    const Matrix stacked = read_matrix_market_file(opt.design);
    const Matrix y = read_matrix_market_file(opt.targets);
    if (y.cols() != 1)
      throw Error("targets file must be a single-column matrix");
    if (stacked.cols() != static_cast<Eigen::Index>(opt.m1) * opt.m2)
      throw Error("design has " + std::to_string(stacked.cols()) +
                  " columns; expected m1*m2 = " +
                  std::to_string(static_cast<long long>(opt.m1) * opt.m2));
    return std::make_unique<LinearMeasurements>(stacked, y.col(0), opt.m1, opt.m2);
  }
  if (opt.input.empty())
    throw Error("loss '" + opt.loss + "' needs --input");
  Matrix data = read_matrix_market_file(opt.input);
  if (opt.loss == "quadratic") return std::make_unique<QuadraticFull>(std::move(data));
  if (opt.loss == "logistic") return std::make_unique<LogisticPCA>(std::move(data));
  if (opt.loss == "binomial") return std::make_unique<BinomialCounts>(std::move(data));
  throw Error("unknown loss: " + opt.loss);
}

int cmd_fit(const FitOptions& opt) {
  const std::unique_ptr<Objective> objective = make_loss(opt);

  SolverConfig cfg;
  cfg.k = opt.k;
  cfg.tau = opt.tau >= 0.0
                ? opt.tau
                : (opt.algorithm == "geco" ? 1.0 - 1e-6 : 1.0);
  cfg.pool_size = opt.pool_size;
  cfg.seed = opt.seed;
  cfg.refit_tol = opt.refit_tol;
  cfg.refit_max_iter = opt.refit_max_iter;
  cfg.jobs = opt.jobs;

  SolverResult result;
  if (opt.algorithm == "greedy") {
    result = run_greedy(*objective, cfg);
  } else if (opt.algorithm == "geco") {
    result = run_geco(*objective, cfg);
  } else {
    const std::vector<Atom> pool =
        random_atom_pool(objective->rows(), objective->cols(), opt.pool_size,
                         derive_seed(cfg.seed, "distributed-pool"));
    result = run_distributed_greedy(
                 *objective, partition_round_robin(pool, opt.partitions), cfg)
                 .result;
  }

  namespace fs = std::filesystem;
  fs::create_directories(opt.output_dir);
  const std::string support_path = (fs::path(opt.output_dir) / "support.txt").string();
  const std::string estimate_path = (fs::path(opt.output_dir) / "estimate.mtx").string();
  const std::string history_path = (fs::path(opt.output_dir) / "history.csv").string();
  write_text_file(support_path, "support",
                  [&](std::ostream& out) { result.support.write(out); });
  write_matrix_market_array_file(estimate_path, result.refit.estimate);
  write_text_file(history_path, "history",
                  [&](std::ostream& out) { result.history.write_csv(out); });

  std::cout << "f=" << format_double(result.refit.f_value) << " atoms="
            << result.support.size() << "\n";
  std::cerr << "wrote " << support_path << ", " << estimate_path << ", "
            << history_path << "\n";
  return 0;
}

// --------------------------------------------------------------------------
// verify
// --------------------------------------------------------------------------

int cmd_verify(const VerifyOptions& opt) {
  SuiteConfig cfg;
  cfg.instances = opt.instances;
  cfg.seed = opt.seed;
  cfg.jobs = opt.jobs;
  const std::vector<NamedReport> rows = run_suite(opt.suite, cfg);

  if (opt.output.empty()) {
    write_report_csv(std::cout, rows);
  } else {
    write_text_file(opt.output, "report",
                    [&](std::ostream& out) { write_report_csv(out, rows); });
  }

  const SuiteSummary summary = summarize(rows);
  std::cerr << summary.total << " checks, " << summary.vacuous << " vacuous, "
            << summary.failures.size() << " failing\n";
  for (const std::string& f : summary.failures) std::cerr << "FAIL " << f << "\n";
  return summary.all_hold() ? 0 : 1;
}

// --------------------------------------------------------------------------
// experiment
// --------------------------------------------------------------------------

int cmd_experiment_sbm(const SbmOptions& opt) {
  ClusteringGridConfig cfg;
  cfg.n = opt.n;
  cfg.k_true = opt.k_true;
  cfg.p_values = parse_grid(opt.p_grid);
  cfg.runs = opt.runs;
  cfg.hyper_k = opt.hyper_k;
  cfg.seed = opt.seed;
  cfg.jobs = opt.jobs;
  cfg.refit_tol = opt.refit_tol;
  cfg.refit_max_iter = opt.refit_max_iter;
  const std::vector<ClusteringRow> rows = run_clustering_experiment(cfg);
  write_text_file(opt.output, "experiment",
                  [&](std::ostream& out) { write_clustering_csv(out, rows); });
  std::cerr << "wrote " << rows.size() << " rows to " << opt.output << "\n";
  return 0;
}

int cmd_experiment_recovery(const RecoveryOptions& opt) {
  std::vector<RecoveryConfig> configs(static_cast<std::size_t>(opt.instances));
  for (int i = 0; i < opt.instances; ++i) {
    RecoveryConfig& cfg = configs[static_cast<std::size_t>(i)];
    cfg.m1 = opt.m1;
    cfg.m2 = opt.m2;
    cfg.r = opt.r;
    cfg.n = opt.n;
    cfg.sigma = opt.sigma;
    cfg.k = opt.k;
    cfg.seed = derive_seed(opt.seed, "instance-" + std::to_string(i));
  }
  std::vector<RecoveryReport> reports(configs.size());
  parallel_for(configs.size(), opt.jobs, [&](std::size_t i) {
    reports[i] = run_recovery_experiment(configs[i]);
  });
  write_text_file(opt.output, "experiment", [&](std::ostream& out) {
    write_recovery_csv(out, configs, reports);
  });
  int held = 0;
  for (const RecoveryReport& r : reports) held += r.holds ? 1 : 0;
  std::cerr << "wrote " << reports.size() << " rows to " << opt.output << " ("
            << held << " bounds hold)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Greedy low-rank matrix estimation: rank-one atom selection with "
      "fully-corrective refits, numeric verification suites, and seeded "
      "experiments."};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Flat key=value configuration file; command-line flags take "
                 "precedence");

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand(
      "fit",
      "Fit a low-rank model. Writes support.txt (atom factors), estimate.mtx "
      "(MatrixMarket array), and history.csv "
      "(iteration,gain,f_after,sigma_estimate).");
  fit->add_option("--loss", fit_opt.loss, "Loss function")
      ->check(CLI::IsMember({"quadratic", "linear", "logistic", "binomial"}))
      ->capture_default_str();
  fit->add_option("--input", fit_opt.input,
                  "Data matrix (MatrixMarket) for quadratic/logistic/binomial");
  fit->add_option("--design", fit_opt.design,
                  "Stacked design matrix (MatrixMarket, n x m1*m2; row i is "
                  "measurement i in row-major order) for --loss linear");
  fit->add_option("--targets", fit_opt.targets,
                  "Measurement targets (MatrixMarket, n x 1) for --loss linear");
  fit->add_option("--m1", fit_opt.m1, "Parameter row count for --loss linear");
  fit->add_option("--m2", fit_opt.m2, "Parameter column count for --loss linear");
  fit->add_option("--algorithm", fit_opt.algorithm, "Selection algorithm")
      ->check(CLI::IsMember({"greedy", "geco", "distributed"}))
      ->capture_default_str();
  fit->add_option("--k", fit_opt.k, "Number of atoms to select")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit->add_option("--tau", fit_opt.tau,
                  "Selection approximation factor in (0,1]; default 1 for "
                  "greedy/distributed and 1-1e-6 for geco")
      ->check(CLI::Range(1e-12, 1.0));
  fit->add_option("--pool-size", fit_opt.pool_size,
                  "Candidate pool size per iteration (greedy/distributed)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--partitions", fit_opt.partitions,
                  "Partition count for --algorithm distributed")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--refit-tol", fit_opt.refit_tol,
                  "Relative gradient tolerance of the refit")
      ->capture_default_str();
  fit->add_option("--refit-max-iter", fit_opt.refit_max_iter,
                  "Inner iteration budget of the refit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--seed", fit_opt.seed, "Root seed")
      ->envname("LOWRANK_SEED")
      ->capture_default_str();
  fit->add_option("--jobs", fit_opt.jobs, "Worker threads (output-invariant)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--output-dir", fit_opt.output_dir, "Output directory")
      ->capture_default_str();

  VerifyOptions verify_opt;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Run a numeric property suite. Writes a bound-report CSV "
      "(check,seed,lhs,rhs,slack,holds) to --output or stdout; exits 0 iff "
      "every non-vacuous check holds.");
  std::vector<std::string> names = suite_names();
  verify->add_option("--suite", verify_opt.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(names));
  verify->add_option("--instances", verify_opt.instances,
                     "Instance count override (0 = suite default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--seed", verify_opt.seed, "Root seed")
      ->envname("LOWRANK_SEED")
      ->capture_default_str();
  verify->add_option("--jobs", verify_opt.jobs, "Worker threads (output-invariant)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--output", verify_opt.output,
                     "Report CSV path (default: stdout)");

  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a seeded experiment study");
  experiment->require_subcommand(1);

  SbmOptions sbm_opt;
  CLI::App* sbm = experiment->add_subcommand(
      "sbm",
      "Stochastic-block-model clustering grid. Writes CSV "
      "(method,k,p,run,reconstruction,generalization).");
  sbm->add_option("--n", sbm_opt.n, "Nodes")->check(CLI::PositiveNumber)->capture_default_str();
  sbm->add_option("--k-true", sbm_opt.k_true, "Planted cluster count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sbm->add_option("--p-grid", sbm_opt.p_grid,
                  "Within-cluster edge probabilities as start:end:step")
      ->capture_default_str();
  sbm->add_option("--runs", sbm_opt.runs, "Graphs per probability")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sbm->add_option("--hyper-k", sbm_opt.hyper_k,
                  "Model ranks / cluster counts to evaluate (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  sbm->add_option("--refit-tol", sbm_opt.refit_tol, "Refit tolerance")
      ->capture_default_str();
  sbm->add_option("--refit-max-iter", sbm_opt.refit_max_iter, "Refit budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sbm->add_option("--seed", sbm_opt.seed, "Root seed")
      ->envname("LOWRANK_SEED")
      ->capture_default_str();
  sbm->add_option("--jobs", sbm_opt.jobs, "Worker threads (output-invariant)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sbm->add_option("--output", sbm_opt.output, "CSV path")->capture_default_str();

  RecoveryOptions rec_opt;
  CLI::App* recovery = experiment->add_subcommand(
      "recovery",
      "Gaussian-measurement recovery study. Writes CSV (seed,m1,m2,r,n,sigma,"
      "k,recovery_error,bound_rhs,m,C,holds,vacuous).");
  recovery->add_option("--m1", rec_opt.m1, "Parameter rows")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  recovery->add_option("--m2", rec_opt.m2, "Parameter columns")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  recovery->add_option("--r", rec_opt.r, "Planted rank")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  recovery->add_option("--n", rec_opt.n, "Measurement count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  recovery->add_option("--sigma", rec_opt.sigma, "Noise level")
      ->capture_default_str();
  recovery->add_option("--k", rec_opt.k, "Atoms to select")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  recovery->add_option("--instances", rec_opt.instances, "Instance count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  recovery->add_option("--seed", rec_opt.seed, "Root seed")
      ->envname("LOWRANK_SEED")
      ->capture_default_str();
  recovery->add_option("--jobs", rec_opt.jobs, "Worker threads (output-invariant)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  recovery->add_option("--output", rec_opt.output, "CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
  }

  try {
    if (*fit) return cmd_fit(fit_opt);
    if (*verify) return cmd_verify(verify_opt);
    if (*sbm) return cmd_experiment_sbm(sbm_opt);
    if (*recovery) return cmd_experiment_recovery(rec_opt);
  } catch (const CLI::ParseError& e) {
    // Option values validated after parsing (e.g. the grid syntax) are
    // still usage errors.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
