#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lowrank/matrix.hpp"

namespace lowrank {

// Strong concavity / smoothness constants (m, M) of a loss:
//   -(m/2)||Y-X||_F^2  >=  loss(Y) - loss(X) - <grad(X), Y-X>  >=  -(M/2)||Y-X||_F^2.
struct CurvaturePair {
  double m = 0.0;
  double M = 0.0;
};

// A concave loss over n x d parameter matrices, maximized by the solvers.
// Implementations are immutable after construction: value() and gradient()
// are pure, so they may be called concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;

  virtual double value(const Matrix& theta) const = 0;
  virtual Matrix gradient(const Matrix& theta) const = 0;

  // Maximizer of loss(U^T H V) over H for losses that admit one in closed
  // form (rows of u_stack/v_stack orthonormal). Default: none.
  virtual std::optional<Matrix> refit_closed_form(const Matrix& u_stack,
                                                  const Matrix& v_stack) const {
    (void)u_stack;
    (void)v_stack;
    return std::nullopt;
  }

  double value_at_zero() const { return value(Matrix::Zero(rows(), cols())); }

 protected:
  void require_shape(const Matrix& theta) const;
};

// loss(Theta) = -||Y - Theta||_F^2. Exactly quadratic: m = M = 2.
class QuadraticFull final : public Objective {
 public:
  explicit QuadraticFull(Matrix y);

  Eigen::Index rows() const override { return y_.rows(); }
  Eigen::Index cols() const override { return y_.cols(); }
  double value(const Matrix& theta) const override;
  Matrix gradient(const Matrix& theta) const override;
  std::optional<Matrix> refit_closed_form(const Matrix& u_stack,
                                          const Matrix& v_stack) const override;

  const Matrix& target() const { return y_; }

 private:
  Matrix y_;
};

// loss(Theta) = -(1/n) sum_i (y_i - <X_i, Theta>)^2 for measurement
// matrices X_i. The design is held both as the list of X_i and as the
// n x (rows*cols) stacked matrix whose row i is vec(X_i) in row-major
// order; the latter drives the Gram computations.
class LinearMeasurements final : public Objective {
 public:
  LinearMeasurements(std::vector<Matrix> designs, Vector targets);

  // Builds the X_i by reshaping the rows of `stacked` (row-major vec).
  LinearMeasurements(const Matrix& stacked, Vector targets,
                     Eigen::Index theta_rows, Eigen::Index theta_cols);

  Eigen::Index rows() const override { return theta_rows_; }
  Eigen::Index cols() const override { return theta_cols_; }
  double value(const Matrix& theta) const override;
  Matrix gradient(const Matrix& theta) const override;

  Eigen::Index sample_count() const { return targets_.size(); }
  const Matrix& stacked_design() const { return stacked_; }
  const Vector& targets() const { return targets_; }

 private:
  Matrix stacked_;  // n x (rows*cols), row i = vec(X_i) row-major
  Vector targets_;
  Eigen::Index theta_rows_ = 0;
  Eigen::Index theta_cols_ = 0;
};

// loss(Theta) = sum_ij [ X_ij Theta_ij - log(1 + exp(Theta_ij)) ] for a 0/1
// matrix X; gradient X - sigmoid(Theta).
class LogisticPCA final : public Objective {
 public:
  explicit LogisticPCA(Matrix x);

  Eigen::Index rows() const override { return x_.rows(); }
  Eigen::Index cols() const override { return x_.cols(); }
  double value(const Matrix& theta) const override;
  Matrix gradient(const Matrix& theta) const override;

  const Matrix& data() const { return x_; }

 private:
  Matrix x_;
};

// Same Bernoulli log-likelihood with fractional responses P_ij in [0, 1]
// (normalized counts): loss = sum_ij [ P_ij Theta_ij - log(1+exp(Theta_ij)) ].
class BinomialCounts final : public Objective {
 public:
  explicit BinomialCounts(Matrix p);

  Eigen::Index rows() const override { return p_.rows(); }
  Eigen::Index cols() const override { return p_.cols(); }
  double value(const Matrix& theta) const override;
  Matrix gradient(const Matrix& theta) const override;

  const Matrix& responses() const { return p_; }

 private:
  Matrix p_;
};

// Overflow-free log(1 + exp(x)) = max(x, 0) + log1p(exp(-|x|)).
inline double log1p_exp(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// Elementwise logistic function.
Matrix sigmoid(const Matrix& theta);

// Max over entries of the relative error between gradient(theta) and a
// central finite difference with step h. Returns the worst-case error.
double check_gradient(const Objective& objective, const Matrix& theta,
                      double h = 1e-5);

// Exact curvature constants of the two quadratic losses. For QuadraticFull
// this is (2, 2); for LinearMeasurements it is (2/n) times the extreme
// eigenvalues of the design Gram matrix, computed by power iteration (the
// smallest via a spectral shift). Throws SingularDesignError when the Gram
// matrix is numerically singular (lambda_min <= 1e-12).
CurvaturePair quadratic_curvature(const QuadraticFull& objective);
CurvaturePair quadratic_curvature(const LinearMeasurements& objective);

// High-probability lower bound on the restricted strong concavity constant
// of the Gaussian-design measurement loss at rank k + r:
//   m >= 1/32 - 162 (k + r) ln(N) / n,  N = theta_rows * theta_cols.
// May be negative (vacuous) for small n.
double gaussian_rsc_bound(Eigen::Index n_samples, Eigen::Index theta_dim,
                          int k, int r);

}  // namespace lowrank
