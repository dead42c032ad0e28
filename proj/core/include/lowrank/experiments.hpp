#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lowrank/analysis.hpp"
#include "lowrank/matrix.hpp"
#include "lowrank/solvers.hpp"

namespace lowrank {

// ---------------------------------------------------------------------------
// Stochastic block model
// ---------------------------------------------------------------------------

struct SBMConfig {
  int n = 60;            // nodes
  int k_true = 3;        // planted clusters (contiguous, balanced)
  double p = 0.9;        // within-cluster edge probability; across = 1 - p
  std::uint64_t seed = 0;
};

struct SBMSample {
  Matrix adjacency;        // symmetric 0/1, zero diagonal
  Matrix probabilities;    // P_true: p within clusters, 1-p across, p on diag
  std::vector<int> labels; // planted cluster of each node
};

// Draws an undirected graph: nodes are split into k_true contiguous blocks
// with sizes differing by at most one, each within-block pair is an edge
// with probability p and each across-block pair with probability 1 - p.
SBMSample sbm_generate(const SBMConfig& cfg);

// ---------------------------------------------------------------------------
// Spectral clustering baseline
// ---------------------------------------------------------------------------

// k-means with seeded k-means++ starts, Lloyd iterations to a relative
// inertia change below 1e-8, best of `restarts` runs. Rows of `points` are
// the samples. Requires 1 <= k <= #points.
struct KMeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    int restarts = 10);

// Clusters the graph by k-means on the bottom-k eigenvectors of the graph
// Laplacian L = D - A (normalized = false) or of the symmetric normalized
// Laplacian D^{-1/2} L D^{-1/2} (normalized = true; zero-degree nodes
// contribute zero rows). The eigenvectors are extracted by deflated power
// iteration on c*I - L with c = 2 * max_degree + 1.
std::vector<int> spectral_clustering(const Matrix& adjacency, int k,
                                     bool normalized, std::uint64_t seed);

// Bottom-k eigenvectors of a symmetric PSD matrix whose spectrum lies in
// [0, c], as columns, via deflated power iteration on c*I - L. Exposed for
// the clustering pipeline and its tests.
Matrix bottom_eigenvectors(const Matrix& l, int k, double c,
                           std::uint64_t seed, double tol = 1e-7,
                           int max_iter = 3000);

// ---------------------------------------------------------------------------
// Error metrics on the probability scale
// ---------------------------------------------------------------------------

struct ModelErrors {
  double generalization = 0.0;  // vs the planted probabilities
  double reconstruction = 0.0;  // vs the observed adjacency
};

// Mean squared off-diagonal deviation (divided by n*d) between a
// probability-scale estimate and (a) the planted probability matrix and
// (b) the observed adjacency. The diagonal is excluded: adjacency
// diagonals are structurally zero, not data.
ModelErrors probability_errors(const Matrix& p_hat, const Matrix& p_true,
                               const Matrix& adjacency);

// Same, for a natural-parameter estimate: the estimate is passed through
// the logistic function first.
ModelErrors model_errors(const Matrix& theta_hat, const Matrix& p_true,
                         const Matrix& adjacency);

// Block-constant probability estimate implied by a hard clustering: entry
// (i, j) is the mean adjacency over the (cluster(i), cluster(j)) block,
// self-pairs excluded.
Matrix cluster_mean_matrix(const Matrix& adjacency,
                           const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Clustering experiment grid
// ---------------------------------------------------------------------------

struct ClusteringRow {
  std::string method;  // Greedy | Spectral_norm | Spectral_unnorm
  int k = 0;           // hyperparameter rank / cluster count
  double p = 0.0;
  int run = 0;
  double reconstruction = 0.0;
  double generalization = 0.0;
};

struct ClusteringGridConfig {
  int n = 60;
  int k_true = 3;
  std::vector<double> p_values;      // e.g. 0.55 .. 0.95 step 0.05
  int runs = 10;                     // replicates per p
  std::vector<int> hyper_k = {3, 5, 10};
  std::uint64_t seed = 0;
  int jobs = 1;
  double refit_tol = 1e-6;           // logistic refits need less precision
  int refit_max_iter = 2000;
};

// For every (p, run) cell: one SBM draw, then each method at each hyper-k.
// Greedy fits a rank-k logistic model with the linear-selection solver and
// is scored through the logistic function; the spectral baselines are
// scored by their block-constant cluster means. Rows come back sorted by
// (p, method, k, run) and are identical for any jobs count.
std::vector<ClusteringRow> run_clustering_experiment(
    const ClusteringGridConfig& cfg);

// CSV with header method,k,p,run,reconstruction,generalization.
void write_clustering_csv(std::ostream& out,
                          const std::vector<ClusteringRow>& rows);

// ---------------------------------------------------------------------------
// Recovery experiment (Gaussian linear measurements)
// ---------------------------------------------------------------------------

struct RecoveryConfig {
  int m1 = 8;
  int m2 = 8;
  int r = 2;            // planted rank
  int n = 600;          // measurements
  double sigma = 0.1;   // noise level
  int k = 4;            // solver rank budget
  std::uint64_t seed = 0;
};

struct RecoveryReport {
  double recovery_error = 0.0;  // ||B - Theta*||_F^2
  double bound_rhs = 0.0;       // recovery bound at (m, C)
  double m_used = 0.0;
  double c_used = 0.0;
  bool holds = false;
  bool vacuous = false;         // no positive curvature bound available
  double f_value = 0.0;
};

// Plants Theta* as a normalized sum of r seeded rank-one terms, draws a
// Gaussian design and noisy measurements, runs the linear-selection solver
// with rank budget k, and evaluates the recovery bound with
// m = max(design curvature, Gaussian restricted-curvature bound) and
// C = approx_bound(tau^2 weighted). A singular design (n < m1*m2) falls
// back to the Gaussian bound alone, which may leave the check vacuous.
RecoveryReport run_recovery_experiment(const RecoveryConfig& cfg);

// CSV with one row per config, header
// seed,m1,m2,r,n,sigma,k,recovery_error,bound_rhs,m,C,holds,vacuous.
void write_recovery_csv(std::ostream& out,
                        const std::vector<RecoveryConfig>& configs,
                        const std::vector<RecoveryReport>& reports);

}  // namespace lowrank
