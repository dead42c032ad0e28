#include "lowrank/objective.hpp"

#include <cmath>

#include "lowrank/errors.hpp"
#include "lowrank/linalg.hpp"

namespace lowrank {

void Objective::require_shape(const Matrix& theta) const {
  if (theta.rows() != rows() || theta.cols() != cols())
    throw DimensionMismatchError("objective: parameter matrix has shape " +
                                 std::to_string(theta.rows()) + "x" +
                                 std::to_string(theta.cols()) + ", expected " +
                                 std::to_string(rows()) + "x" +
                                 std::to_string(cols()));
}

namespace {

// vec in row-major order: entry (i, j) lands at position i*cols + j.
Vector vec_row_major(const Matrix& a) {
  Vector v(a.size());
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v[p++] = a(i, j);
  return v;
}

Matrix unvec_row_major(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix a(rows, cols);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = v[p++];
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadraticFull
// ---------------------------------------------------------------------------

QuadraticFull::QuadraticFull(Matrix y) : y_(std::move(y)) {
  if (!all_finite(y_))
    throw DimensionMismatchError("QuadraticFull: target has non-finite entries");
}

double QuadraticFull::value(const Matrix& theta) const {
  require_shape(theta);
  return -(y_ - theta).squaredNorm();
}

Matrix QuadraticFull::gradient(const Matrix& theta) const {
  require_shape(theta);
  return 2.0 * (y_ - theta);
}

std::optional<Matrix> QuadraticFull::refit_closed_form(
    const Matrix& u_stack, const Matrix& v_stack) const {
  // max_H -||Y - U^T H V||_F^2 has the stationary point H = U Y V^T when
  // the rows of U and V are orthonormal.
  return u_stack * y_ * v_stack.transpose();
}

// ---------------------------------------------------------------------------
// LinearMeasurements
// ---------------------------------------------------------------------------

LinearMeasurements::LinearMeasurements(std::vector<Matrix> designs,
                                       Vector targets)
    : targets_(std::move(targets)) {
  if (designs.empty())
    throw DimensionMismatchError("LinearMeasurements: no measurement matrices");
  if (static_cast<Eigen::Index>(designs.size()) != targets_.size())
    throw DimensionMismatchError(
        "LinearMeasurements: measurement/target count mismatch");
  theta_rows_ = designs.front().rows();
  theta_cols_ = designs.front().cols();
  stacked_.resize(static_cast<Eigen::Index>(designs.size()),
                  theta_rows_ * theta_cols_);
  for (std::size_t i = 0; i < designs.size(); ++i) {
    if (designs[i].rows() != theta_rows_ || designs[i].cols() != theta_cols_)
      throw DimensionMismatchError(
          "LinearMeasurements: inconsistent measurement shapes");
    stacked_.row(static_cast<Eigen::Index>(i)) =
        vec_row_major(designs[i]).transpose();
  }
  if (!all_finite(stacked_) || !all_finite(targets_))
    throw DimensionMismatchError("LinearMeasurements: non-finite input");
}

LinearMeasurements::LinearMeasurements(const Matrix& stacked, Vector targets,
                                       Eigen::Index theta_rows,
                                       Eigen::Index theta_cols)
    : stacked_(stacked),
      targets_(std::move(targets)),
      theta_rows_(theta_rows),
      theta_cols_(theta_cols) {
  if (theta_rows_ <= 0 || theta_cols_ <= 0 ||
      stacked_.cols() != theta_rows_ * theta_cols_)
    throw DimensionMismatchError(
        "LinearMeasurements: stacked design width must equal rows*cols");
  if (stacked_.rows() != targets_.size())
    throw DimensionMismatchError(
        "LinearMeasurements: design/target count mismatch");
  if (stacked_.rows() == 0)
    throw DimensionMismatchError("LinearMeasurements: no measurements");
  if (!all_finite(stacked_) || !all_finite(targets_))
    throw DimensionMismatchError("LinearMeasurements: non-finite input");
}

double LinearMeasurements::value(const Matrix& theta) const {
  require_shape(theta);
  const Vector residual = targets_ - stacked_ * vec_row_major(theta);
  return -residual.squaredNorm() / static_cast<double>(sample_count());
}

Matrix LinearMeasurements::gradient(const Matrix& theta) const {
  require_shape(theta);
  const Vector residual = targets_ - stacked_ * vec_row_major(theta);
  const Vector g =
      (2.0 / static_cast<double>(sample_count())) * (stacked_.transpose() * residual);
  return unvec_row_major(g, theta_rows_, theta_cols_);
}

// ---------------------------------------------------------------------------
// LogisticPCA / BinomialCounts
// ---------------------------------------------------------------------------

namespace {

double bernoulli_value(const Matrix& responses, const Matrix& theta) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i)
      s += responses(i, j) * theta(i, j) - log1p_exp(theta(i, j));
  return s;
}

}  // namespace

Matrix sigmoid(const Matrix& theta) {
  Matrix s(theta.rows(), theta.cols());
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
      const double x = theta(i, j);
      if (x >= 0.0) {
        s(i, j) = 1.0 / (1.0 + std::exp(-x));
      } else {
        const double e = std::exp(x);
        s(i, j) = e / (1.0 + e);
      }
    }
  }
  return s;
}

LogisticPCA::LogisticPCA(Matrix x) : x_(std::move(x)) {
  for (Eigen::Index j = 0; j < x_.cols(); ++j)
    for (Eigen::Index i = 0; i < x_.rows(); ++i)
      if (x_(i, j) != 0.0 && x_(i, j) != 1.0)
        throw DimensionMismatchError("LogisticPCA: entries must be 0 or 1");
}

double LogisticPCA::value(const Matrix& theta) const {
  require_shape(theta);
  return bernoulli_value(x_, theta);
}

Matrix LogisticPCA::gradient(const Matrix& theta) const {
  require_shape(theta);
  return x_ - sigmoid(theta);
}

BinomialCounts::BinomialCounts(Matrix p) : p_(std::move(p)) {
  for (Eigen::Index j = 0; j < p_.cols(); ++j)
    for (Eigen::Index i = 0; i < p_.rows(); ++i)
      if (!(p_(i, j) >= 0.0 && p_(i, j) <= 1.0))
        throw DimensionMismatchError(
            "BinomialCounts: entries must lie in [0, 1]");
}

double BinomialCounts::value(const Matrix& theta) const {
  require_shape(theta);
  return bernoulli_value(p_, theta);
}

Matrix BinomialCounts::gradient(const Matrix& theta) const {
  require_shape(theta);
  return p_ - sigmoid(theta);
}

// ---------------------------------------------------------------------------
// Checks and curvature
// ---------------------------------------------------------------------------

double check_gradient(const Objective& objective, const Matrix& theta,
                      double h) {
  const Matrix g = objective.gradient(theta);
  Matrix probe = theta;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
      const double orig = probe(i, j);
      probe(i, j) = orig + h;
      const double up = objective.value(probe);
      probe(i, j) = orig - h;
      const double down = objective.value(probe);
      probe(i, j) = orig;
      const double fd = (up - down) / (2.0 * h);
      const double err = std::abs(g(i, j) - fd) / (1.0 + std::abs(g(i, j)));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

CurvaturePair quadratic_curvature(const QuadraticFull&) {
  // -||Y - Theta||^2 has constant Hessian -2 I in every direction.
  return {2.0, 2.0};
}

CurvaturePair quadratic_curvature(const LinearMeasurements& objective) {
  const Matrix& a = objective.stacked_design();
  const double n = static_cast<double>(objective.sample_count());
  const Matrix gram = a.transpose() * a;

  // Extreme eigenvalues of the (symmetric PSD) Gram matrix by power
  // iteration; the smallest via the spectral shift c*I - Gram.
  const SingularTriple top = top_singular_pair(gram, 1e-12, 100000, 1);
  const double lambda_max = top.sigma;
  const double c = lambda_max * (1.0 + 1e-6) + 1e-12;
  const Matrix shifted =
      c * Matrix::Identity(gram.rows(), gram.cols()) - gram;
  const SingularTriple bottom = top_singular_pair(shifted, 1e-12, 100000, 2);
  const double lambda_min = c - bottom.sigma;

  if (lambda_min <= 1e-12)
    throw SingularDesignError(
        "quadratic_curvature: design Gram matrix is numerically singular");
  return {2.0 * lambda_min / n, 2.0 * lambda_max / n};
}

double gaussian_rsc_bound(Eigen::Index n_samples, Eigen::Index theta_dim,
                          int k, int r) {
  return 1.0 / 32.0 -
         162.0 * static_cast<double>(k + r) *
             std::log(static_cast<double>(theta_dim)) /
             static_cast<double>(n_samples);
}

}  // namespace lowrank
