#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "hesscov/bordered_hessian.hpp"
#include "hesscov/kkt_factorization.hpp"
#include "hesscov/log.hpp"
#include "hesscov/problem.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

enum class SolveStatus { converged, max_iter, singular_kkt, line_search_failure };

inline const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::singular_kkt: return "singular_kkt";
    case SolveStatus::line_search_failure: return "line_search_failure";
  }
  return "unknown";
}

struct SolverOptions {
  double tol_kkt = 1e-8;
  double tol_feas = 1e-8;
  int max_iter = 200;
  double regularization_initial = 1e-8;
  double regularization_growth = 10.0;
  double regularization_max = 1e12;
  int line_search_max_halvings = 30;
  double armijo_coefficient = 1e-4;
  FactorBackend backend = FactorBackend::automatic;
};

struct KktSolution {
  Vector z_star;
  Vector lambda_star;
  double merit_value = 0.0;
  double kkt_residual = 0.0;
  double constraint_violation = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
};

namespace detail {

/// Least-squares multipliers: argmin over lambda of ||grad + G' lambda||_2,
/// from the normal equations (G G') lambda = -G grad.
inline Vector least_squares_multipliers(const SparseMatrix& jacobian, const Vector& gradient) {
  const Index m = jacobian.rows();
  if (m == 0) return Vector();
  SparseMatrix gram = SparseMatrix(jacobian * SparseMatrix(jacobian.transpose()));
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) return Vector::Zero(m);
  Vector rhs = -(jacobian * gradient);
  Vector lambda = ldlt.solve(rhs);
  return lambda.allFinite() ? lambda : Vector::Zero(m);
}

inline SparseMatrix kkt_matrix(const SparseMatrix& w, const SparseMatrix& jacobian,
                               double delta) {
  const Index nz = w.rows();
  const Index m = jacobian.rows();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(w.nonZeros() + 2 * jacobian.nonZeros() + nz));
  for (int k = 0; k < w.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  if (delta != 0.0) {
    // Maximization convention: regularize the z-block toward negative
    // curvature.
    for (Index i = 0; i < nz; ++i) triplets.emplace_back(i, i, -delta);
  }
  for (int k = 0; k < jacobian.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(jacobian, k); it; ++it) {
      triplets.emplace_back(nz + it.row(), it.col(), it.value());
      triplets.emplace_back(it.col(), nz + it.row(), it.value());
    }
  }
  SparseMatrix kkt(nz + m, nz + m);
  kkt.setFromTriplets(triplets.begin(), triplets.end());
  return kkt;
}

inline bool positivity_ok(const ConstrainedProblem& problem, const Vector& z) {
  for (Index i : problem.strictly_positive) {
    if (!(z(i) > 0.0)) return false;
  }
  return true;
}

}  // namespace detail

/// Newton-KKT method for the equality-constrained maximization problem.
///
/// Each iteration solves the symmetric indefinite KKT system for the step and
/// fresh multipliers. When the factorization does not show the saddle-point
/// inertia of a constrained maximum (n+m negative, m positive eigenvalues),
/// the z-block is regularized by -delta*I with delta grown geometrically from
/// `regularization_initial`. Steps are globalized by a backtracking line
/// search on the exact-penalty merit l(z) - rho*||g(z)||_1 with
/// rho = 2*||lambda||_inf.
inline KktSolution solve_equality_constrained(const ConstrainedProblem& problem,
                                              const Vector& z0,
                                              const SolverOptions& options = {}) {
  validate(problem);
  if (z0.size() != problem.size()) {
    throw ArgumentError("solve_equality_constrained: z0 has wrong dimension");
  }
  if (!z0.allFinite()) {
    throw ArgumentError("solve_equality_constrained: z0 has non-finite entries");
  }
  if (!detail::positivity_ok(problem, z0)) {
    throw ArgumentError("solve_equality_constrained: z0 violates positivity constraints");
  }

  const Index nz = problem.size();
  const Index m = problem.constraint_count();

  KktSolution solution;
  Vector z = z0;
  Vector gradient = problem.merit_gradient(z);
  Vector g = problem.constraints(z);
  SparseMatrix jacobian = problem.constraint_jacobian(z);
  Vector lambda = detail::least_squares_multipliers(jacobian, gradient);

  KktFactorization::Options factor_options;
  factor_options.backend = options.backend;

  for (int iter = 0;; ++iter) {
    const double kkt_residual =
        (gradient + jacobian.transpose() * lambda).lpNorm<Eigen::Infinity>();
    const double violation = m > 0 ? g.lpNorm<Eigen::Infinity>() : 0.0;

    solution.z_star = z;
    solution.lambda_star = lambda;
    solution.kkt_residual = kkt_residual;
    solution.constraint_violation = violation;
    solution.iterations = iter;
    solution.merit_value = problem.merit(z);

    if (kkt_residual <= options.tol_kkt && violation <= options.tol_feas) {
      solution.status = SolveStatus::converged;
      break;
    }
    if (iter >= options.max_iter) {
      solution.status = SolveStatus::max_iter;
      break;
    }

    // Lagrangian z-block at the current multipliers.
    SparseMatrix w = problem.merit_hessian(z);
    w += problem.constraint_hessian_contraction(z, lambda);
    w = SparseMatrix(0.5 * (SparseMatrix(w.transpose()) + w));

    // Inertia-corrected factorization.
    double delta = 0.0;
    std::optional<KktFactorization> factor;
    while (true) {
      factor.emplace(detail::kkt_matrix(w, jacobian, delta), nz, factor_options);
      if (factor->ok() && factor->inertia().negative == nz && factor->inertia().positive == m) {
        break;
      }
      delta = delta == 0.0 ? options.regularization_initial
                           : delta * options.regularization_growth;
      if (delta > options.regularization_max) {
        solution.status = SolveStatus::singular_kkt;
        return solution;
      }
    }
    if (delta > 0.0) {
      log::debug("iter ", iter, ": inertia correction delta=", delta);
    }

    Vector rhs(nz + m);
    rhs.head(nz) = -gradient;
    rhs.tail(m) = -g;
    Vector step(nz + m);
    if (!factor->solve(rhs, step)) {
      solution.status = SolveStatus::singular_kkt;
      return solution;
    }
    const Vector dz = step.head(nz);
    const Vector lambda_next = step.tail(m);

    // Exact-penalty line search (ascent).
    const double rho = m > 0 ? 2.0 * lambda_next.lpNorm<Eigen::Infinity>() : 0.0;
    const double g_l1 = m > 0 ? g.lpNorm<1>() : 0.0;
    const double merit0 = problem.merit(z);
    const double phi0 = merit0 - rho * g_l1;
    double directional = gradient.dot(dz) + rho * g_l1;
    if (directional <= 0.0) directional = std::numeric_limits<double>::min();

    // Keep noise-scale variables strictly positive.
    double alpha = 1.0;
    for (Index i : problem.strictly_positive) {
      if (dz(i) < 0.0) alpha = std::min(alpha, -0.995 * z(i) / dz(i));
    }

    bool accepted = false;
    Vector z_next;
    for (int halving = 0; halving <= options.line_search_max_halvings; ++halving) {
      z_next = z + alpha * dz;
      if (detail::positivity_ok(problem, z_next)) {
        const double merit_next = problem.merit(z_next);
        const Vector g_next = problem.constraints(z_next);
        if (std::isfinite(merit_next) && g_next.allFinite()) {
          const double phi_next = merit_next - rho * g_next.lpNorm<1>();
          if (phi_next >= phi0 + options.armijo_coefficient * alpha * directional) {
            accepted = true;
            g = g_next;
            break;
          }
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      solution.status = SolveStatus::line_search_failure;
      return solution;
    }

    z = z_next;
    lambda = lambda_next;
    gradient = problem.merit_gradient(z);
    jacobian = problem.constraint_jacobian(z);
  }

  return solution;
}

}  // namespace hesscov
