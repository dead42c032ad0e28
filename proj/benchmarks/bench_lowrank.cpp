// Microbenchmarks for the hot paths: the power-iteration kernel, the
// fully-corrective refit (closed form and iterative), and a full solver run.
//
//   ./lowrank_benchmarks [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "lowrank/atoms.hpp"
#include "lowrank/linalg.hpp"
#include "lowrank/objective.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/solvers.hpp"
#include "lowrank/verify.hpp"

namespace {

using lowrank::Matrix;

Matrix bernoulli_matrix(std::uint64_t seed, int n, int d, double p) {
  auto rng = lowrank::make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = unif(rng) < p ? 1.0 : 0.0;
  return x;
}

lowrank::SupportSet orthonormal_support(std::uint64_t seed, Eigen::Index n,
                                        Eigen::Index d, int k) {
  auto rng = lowrank::make_rng(seed);
  const Matrix gu = lowrank::random_gaussian_matrix(rng, n, k);
  const Matrix gv = lowrank::random_gaussian_matrix(rng, d, k);
  const Matrix qu = Eigen::HouseholderQR<Matrix>(gu).householderQ() *
                    Matrix::Identity(n, k);
  const Matrix qv = Eigen::HouseholderQR<Matrix>(gv).householderQ() *
                    Matrix::Identity(d, k);
  lowrank::SupportSet support;
  for (int j = 0; j < k; ++j)
    support.push_back(lowrank::Atom{qu.col(j), qv.col(j)});
  return support;
}

void BM_TopSingularPair(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  auto rng = lowrank::make_rng(11);
  const Matrix g = lowrank::random_gaussian_matrix(rng, n, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(lowrank::top_singular_pair(g, 1e-8, 20000, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TopSingularPair)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_RefitClosedForm(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  auto rng = lowrank::make_rng(12);
  const lowrank::QuadraticFull objective(
      lowrank::random_gaussian_matrix(rng, 64, 48));
  const lowrank::SupportSet support = orthonormal_support(13, 64, 48, k);
  for (auto _ : state)
    benchmark::DoNotOptimize(lowrank::refit(support, objective));
}
BENCHMARK(BM_RefitClosedForm)->Arg(2)->Arg(5)->Arg(10);

void BM_RefitIterative(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const lowrank::LogisticPCA objective(bernoulli_matrix(14, 60, 50, 0.4));
  const lowrank::SupportSet support = orthonormal_support(15, 60, 50, k);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lowrank::refit(support, objective, 1e-6, 2000));
}
BENCHMARK(BM_RefitIterative)->Arg(2)->Arg(5);

void BM_RunGeco(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Matrix y = lowrank::noisy_lowrank_target(40, 30, 5, 16);
  const lowrank::QuadraticFull objective(y);
  lowrank::SolverConfig cfg;
  cfg.k = k;
  cfg.tau = 1.0 - 1e-6;
  cfg.seed = 17;
  for (auto _ : state)
    benchmark::DoNotOptimize(lowrank::run_geco(objective, cfg));
}
BENCHMARK(BM_RunGeco)->Arg(3)->Arg(5)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
