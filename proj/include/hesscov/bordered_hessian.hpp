#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "hesscov/problem.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

/// Hessian of the Lagrangian with respect to (z, lambda):
///
///   H_L = [ W   G' ]      W = hess(merit) + sum_i lambda_i hess(g_i),
///         [ G   0  ]      G = jacobian(g),
///
/// stored sparse and symmetric. Rows/cols 0..n+m-1 are the z-block (partition
/// labels tell which are p and which are q); the trailing m rows/cols are the
/// multiplier block.
struct BorderedHessian {
  Index n = 0;  ///< independent variables
  Index m = 0;  ///< dependent variables == constraints
  SparseMatrix matrix;
  VariablePartition partition;

  Index z_size() const { return n + m; }
  Index size() const { return n + 2 * m; }
};

/// Assembles the bordered Hessian at (z, lambda). The z-block is symmetrized;
/// non-finite entries raise NumericError.
inline BorderedHessian assemble_bordered_hessian(const ConstrainedProblem& problem,
                                                 const Vector& z, const Vector& lambda) {
  if (z.size() != problem.size() || lambda.size() != problem.constraint_count()) {
    throw ArgumentError("assemble_bordered_hessian: dimension mismatch");
  }
  const Index nz = problem.size();
  const Index m = problem.constraint_count();

  SparseMatrix w = problem.merit_hessian(z);
  {
    const SparseMatrix cw = problem.constraint_hessian_contraction(z, lambda);
    w += cw;
  }
  // Symmetrize: callbacks may fill one triangle only up to roundoff.
  w = SparseMatrix(0.5 * (SparseMatrix(w.transpose()) + w));
  const SparseMatrix jac = problem.constraint_jacobian(z);
  if (jac.rows() != m || jac.cols() != nz) {
    throw ArgumentError("assemble_bordered_hessian: constraint_jacobian has wrong shape");
  }

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(w.nonZeros() + 2 * jac.nonZeros()));
  for (int k = 0; k < w.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      if (!std::isfinite(it.value())) {
        throw NumericError("assemble_bordered_hessian: non-finite z-block entry");
      }
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int k = 0; k < jac.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(jac, k); it; ++it) {
      if (!std::isfinite(it.value())) {
        throw NumericError("assemble_bordered_hessian: non-finite Jacobian entry");
      }
      triplets.emplace_back(nz + it.row(), it.col(), it.value());
      triplets.emplace_back(it.col(), nz + it.row(), it.value());
    }
  }

  BorderedHessian hessian;
  hessian.n = problem.n_independent;
  hessian.m = m;
  hessian.partition = problem.partition;
  hessian.matrix.resize(nz + m, nz + m);
  hessian.matrix.setFromTriplets(triplets.begin(), triplets.end());
  hessian.matrix.makeCompressed();
  return hessian;
}

}  // namespace hesscov
