#include "lowrank/atoms.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lowrank/errors.hpp"
#include "lowrank/matrix_market.hpp"
#include "lowrank/objective.hpp"

namespace lowrank {

Matrix SupportSet::stacked_u() const {
  if (atoms_.empty()) return Matrix(0, 0);
  Matrix u(static_cast<Eigen::Index>(atoms_.size()), atoms_.front().u.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    u.row(static_cast<Eigen::Index>(i)) = atoms_[i].u.transpose();
  return u;
}

Matrix SupportSet::stacked_v() const {
  if (atoms_.empty()) return Matrix(0, 0);
  Matrix v(static_cast<Eigen::Index>(atoms_.size()), atoms_.front().v.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    v.row(static_cast<Eigen::Index>(i)) = atoms_[i].v.transpose();
  return v;
}

void SupportSet::write(std::ostream& out) const {
  for (const Atom& a : atoms_) {
    for (Eigen::Index i = 0; i < a.u.size(); ++i) {
      if (i) out << " ";
      out << format_double(a.u[i]);
    }
    out << " |";
    for (Eigen::Index i = 0; i < a.v.size(); ++i) out << " " << format_double(a.v[i]);
    out << "\n";
  }
}

SupportSet SupportSet::read(std::istream& in) {
  SupportSet s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t bar = line.find('|');
    if (bar == std::string::npos)
      throw IoError("support set: missing '|' separator in line: " + line);
    std::istringstream us(line.substr(0, bar));
    std::istringstream vs(line.substr(bar + 1));
    std::vector<double> ue, ve;
    double x = 0.0;
    while (us >> x) ue.push_back(x);
    while (vs >> x) ve.push_back(x);
    if (ue.empty() || ve.empty())
      throw IoError("support set: empty factor in line: " + line);
    Atom a;
    a.u = Eigen::Map<const Vector>(ue.data(), static_cast<Eigen::Index>(ue.size()));
    a.v = Eigen::Map<const Vector>(ve.data(), static_cast<Eigen::Index>(ve.size()));
    s.push_back(std::move(a));
  }
  return s;
}

bool operator==(const Atom& a, const Atom& b) {
  return a.u.size() == b.u.size() && a.v.size() == b.v.size() && a.u == b.u &&
         a.v == b.v;
}

bool operator==(const SupportSet& a, const SupportSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

RefitSolution refit(const SupportSet& support, const Objective& objective,
                    double tol, int max_iter,
                    const std::optional<Matrix>& warm_start) {
  const Eigen::Index n = objective.rows();
  const Eigen::Index d = objective.cols();
  RefitSolution sol;
  if (support.empty()) {
    sol.coefficients = Matrix(0, 0);
    sol.estimate = Matrix::Zero(n, d);
    sol.f_value = 0.0;
    return sol;
  }

  const Matrix u_stack = support.stacked_u();
  const Matrix v_stack = support.stacked_v();
  if (u_stack.cols() != n || v_stack.cols() != d)
    throw DimensionMismatchError("refit: support factors do not match the loss shape");
  const Eigen::Index k = u_stack.rows();
  const double loss_at_zero = objective.value_at_zero();

  if (auto closed = objective.refit_closed_form(u_stack, v_stack)) {
    sol.coefficients = std::move(*closed);
    sol.estimate = u_stack.transpose() * sol.coefficients * v_stack;
    sol.f_value = objective.value(sol.estimate) - loss_at_zero;
    return sol;
  }

  Matrix h = Matrix::Zero(k, k);
  if (warm_start && warm_start->rows() == k && warm_start->cols() == k)
    h = *warm_start;
  Matrix b = u_stack.transpose() * h * v_stack;
  double val = objective.value(b);
  double step = 1.0;
  bool converged = false;
  int it = 0;

  for (; it < max_iter; ++it) {
    const Matrix grad_h = u_stack * objective.gradient(b) * v_stack.transpose();
    const double g2 = grad_h.squaredNorm();
    const double gnorm = std::sqrt(g2);
    if (gnorm <= tol * (1.0 + std::abs(val - loss_at_zero))) {
      converged = true;
      break;
    }
    // Armijo backtracking along the gradient, starting from twice the last
    // accepted step.
    double alpha = 2.0 * step;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      const Matrix h_try = h + alpha * grad_h;
      const Matrix b_try = u_stack.transpose() * h_try * v_stack;
      const double val_try = objective.value(b_try);
      if (val_try >= val + 1e-4 * alpha * g2) {
        h = h_try;
        b = b_try;
        val = val_try;
        step = alpha;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No representable step improves the value: stationary at working
      // precision even though the gradient test did not fire.
      converged = true;
      break;
    }
  }

  sol.coefficients = std::move(h);
  sol.estimate = std::move(b);
  sol.f_value = val - loss_at_zero;
  sol.inner_iterations = it;
  sol.converged = converged;
  return sol;
}

double set_value(const SupportSet& support, const Objective& objective,
                 double tol, int max_iter) {
  return refit(support, objective, tol, max_iter).f_value;
}

}  // namespace lowrank
