#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hesscov/types.hpp"

namespace hesscov {

/// Index sets mapping positions of the decision vector z to the independent
/// (p) block and the dependent (q) block. The dependent block must be square
/// against the constraints.
struct VariablePartition {
  std::vector<Index> independent;
  std::vector<Index> dependent;

  static VariablePartition contiguous(Index n, Index m) {
    VariablePartition part;
    part.independent.resize(static_cast<std::size_t>(n));
    part.dependent.resize(static_cast<std::size_t>(m));
    for (Index i = 0; i < n; ++i) part.independent[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < m; ++i) part.dependent[static_cast<std::size_t>(i)] = n + i;
    return part;
  }
};

/// Equality-constrained maximization problem
///
///   maximize    merit(z)
///   subject to  constraints(z) = 0,
///
/// with z split into n_independent independent and n_dependent dependent
/// variables. The number of constraints equals n_dependent, so the dependent
/// block of the constraint Jacobian is square. All callbacks must be
/// deterministic and reentrant.
struct ConstrainedProblem {
  Index n_independent = 0;
  Index n_dependent = 0;

  std::function<double(const Vector&)> merit;
  std::function<Vector(const Vector&)> merit_gradient;
  std::function<SparseMatrix(const Vector&)> merit_hessian;
  std::function<Vector(const Vector&)> constraints;
  std::function<SparseMatrix(const Vector&)> constraint_jacobian;
  /// (z, lambda) -> sum_i lambda_i * hessian(constraints_i)(z)
  std::function<SparseMatrix(const Vector&, const Vector&)> constraint_hessian_contraction;

  VariablePartition partition;

  /// Optional variable labels (size n+m when present). Used by reports.
  std::vector<std::string> variable_names;
  /// Variables the line search must keep strictly positive (noise scales).
  std::vector<Index> strictly_positive;

  Index size() const { return n_independent + n_dependent; }
  Index constraint_count() const { return n_dependent; }
};

/// Checks dimension bookkeeping of a problem definition. Throws ArgumentError.
inline void validate(const ConstrainedProblem& problem) {
  if (problem.n_independent < 0 || problem.n_dependent < 0) {
    throw ArgumentError("ConstrainedProblem: negative dimensions");
  }
  if (!problem.merit || !problem.merit_gradient || !problem.merit_hessian ||
      !problem.constraints || !problem.constraint_jacobian ||
      !problem.constraint_hessian_contraction) {
    throw ArgumentError("ConstrainedProblem: missing callback");
  }
  const Index total = problem.size();
  std::vector<bool> seen(static_cast<std::size_t>(total), false);
  auto mark = [&](const std::vector<Index>& idx) {
    for (Index i : idx) {
      if (i < 0 || i >= total || seen[static_cast<std::size_t>(i)]) {
        throw ArgumentError("ConstrainedProblem: partition is not a disjoint cover");
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  };
  if (static_cast<Index>(problem.partition.independent.size()) != problem.n_independent ||
      static_cast<Index>(problem.partition.dependent.size()) != problem.n_dependent) {
    throw ArgumentError("ConstrainedProblem: partition sizes disagree with dimensions");
  }
  mark(problem.partition.independent);
  mark(problem.partition.dependent);
  if (!problem.variable_names.empty() &&
      static_cast<Index>(problem.variable_names.size()) != total) {
    throw ArgumentError("ConstrainedProblem: variable_names size mismatch");
  }
}

/// Lagrangian L(z, lambda) = merit(z) + constraints(z)' lambda of the
/// augmented problem.
inline double eval_lagrangian(const ConstrainedProblem& problem, const Vector& z,
                              const Vector& lambda) {
  if (z.size() != problem.size()) {
    throw ArgumentError("eval_lagrangian: z has dimension " + std::to_string(z.size()) +
                        ", expected " + std::to_string(problem.size()));
  }
  if (lambda.size() != problem.constraint_count()) {
    throw ArgumentError("eval_lagrangian: lambda has dimension " +
                        std::to_string(lambda.size()) + ", expected " +
                        std::to_string(problem.constraint_count()));
  }
  return problem.merit(z) + problem.constraints(z).dot(lambda);
}

/// Worst relative discrepancy of one derivative callback against central
/// differences, with the location of the offending entry.
struct DerivativeCheck {
  double max_rel_error = 0.0;
  Index row = -1;
  Index col = -1;
};

struct DerivativeReport {
  DerivativeCheck merit_gradient;
  DerivativeCheck constraint_jacobian;
  DerivativeCheck merit_hessian;
  DerivativeCheck constraint_hessian;

  double worst() const {
    return std::max({merit_gradient.max_rel_error, constraint_jacobian.max_rel_error,
                     merit_hessian.max_rel_error, constraint_hessian.max_rel_error});
  }
};

namespace detail {

inline double rel_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline void track(DerivativeCheck& check, double a, double b, Index row, Index col) {
  const double err = rel_error(a, b);
  if (err > check.max_rel_error) {
    check.max_rel_error = err;
    check.row = row;
    check.col = col;
  }
}

}  // namespace detail

/// Compares all derivative callbacks against central finite differences of the
/// one-order-lower callbacks at the point (z, lambda). Report-only: large
/// discrepancies are flagged, not thrown.
inline DerivativeReport check_derivatives(const ConstrainedProblem& problem,
                                          const Vector& z, const Vector& lambda,
                                          double step) {
  if (step <= 0.0) throw ArgumentError("check_derivatives: step must be positive");
  validate(problem);
  const Index total = problem.size();
  const Index m = problem.constraint_count();

  DerivativeReport report;
  Vector zp = z, zm = z;

  const Vector grad = problem.merit_gradient(z);
  const Matrix hess = Matrix(problem.merit_hessian(z));
  const Matrix jac = Matrix(problem.constraint_jacobian(z));
  const Matrix whess = Matrix(problem.constraint_hessian_contraction(z, lambda));

  for (Index j = 0; j < total; ++j) {
    zp(j) = z(j) + step;
    zm(j) = z(j) - step;

    const double fd_grad = (problem.merit(zp) - problem.merit(zm)) / (2.0 * step);
    detail::track(report.merit_gradient, grad(j), fd_grad, j, -1);

    const Vector fd_jac_col = (problem.constraints(zp) - problem.constraints(zm)) / (2.0 * step);
    for (Index i = 0; i < m; ++i) {
      detail::track(report.constraint_jacobian, jac(i, j), fd_jac_col(i), i, j);
    }

    const Vector fd_hess_col =
        (problem.merit_gradient(zp) - problem.merit_gradient(zm)) / (2.0 * step);
    const Vector fd_whess_col = (Vector(problem.constraint_jacobian(zp).transpose() * lambda) -
                                 Vector(problem.constraint_jacobian(zm).transpose() * lambda)) /
                                (2.0 * step);
    for (Index i = 0; i < total; ++i) {
      detail::track(report.merit_hessian, hess(i, j), fd_hess_col(i), i, j);
      detail::track(report.constraint_hessian, whess(i, j), fd_whess_col(i), i, j);
    }

    zp(j) = z(j);
    zm(j) = z(j);
  }
  return report;
}

}  // namespace hesscov
