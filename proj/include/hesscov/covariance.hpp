#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SparseLU>

#include "hesscov/bordered_hessian.hpp"
#include "hesscov/kkt_factorization.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

/// Column extraction from the inverse bordered Hessian. The factorization is
/// computed once and reused across all requests; only the requested columns
/// of the (generally dense) inverse are ever formed.
class CovarianceExtractor {
 public:
  explicit CovarianceExtractor(const BorderedHessian& hessian,
                               FactorBackend backend = FactorBackend::automatic)
      : hessian_(&hessian),
        factorization_(hessian.matrix, hessian.z_size(),
                       KktFactorization::Options{.backend = backend}) {
    if (!factorization_.ok()) {
      throw RankError(
          "bordered Hessian is singular (Assumption violation or non-isolated optimum)");
    }
  }

  /// Columns of inv(H_L) at the requested indices.
  Matrix inverse_columns(std::span<const Index> indices) const {
    const Index size = hessian_->size();
    Matrix columns(size, static_cast<Index>(indices.size()));
    Vector unit = Vector::Zero(size);
    Vector x(size);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const Index i = indices[k];
      if (i < 0 || i >= size) throw ArgumentError("inverse_columns: index out of range");
      unit(i) = 1.0;
      if (!factorization_.solve(unit, x)) {
        throw RankError("bordered Hessian solve failed (near-singular matrix)");
      }
      columns.col(static_cast<Index>(k)) = x;
      unit(i) = 0.0;
    }
    return columns;
  }

  /// Inverse reduced Hessian: the p-block of inv(H_L), an n x n matrix equal
  /// to inv(hess of the reduced merit) at the optimum.
  Matrix reduced_hessian_inverse() const {
    const auto& p_idx = hessian_->partition.independent;
    const Matrix columns = inverse_columns(p_idx);
    Matrix block(hessian_->n, hessian_->n);
    for (Index i = 0; i < hessian_->n; ++i) {
      block.row(i) = columns.row(p_idx[static_cast<std::size_t>(i)]);
    }
    return 0.5 * (block + block.transpose());
  }

  /// Requested columns of the leading (n+m) x (n+m) block of -inv(H_L): the
  /// linearized covariance of all decision variables.
  Matrix full_covariance_block(std::span<const Index> indices) const {
    for (Index i : indices) {
      if (i < 0 || i >= hessian_->z_size()) {
        throw ArgumentError("full_covariance_block: index outside the decision-variable block");
      }
    }
    const Matrix columns = inverse_columns(indices);
    return -columns.topRows(hessian_->z_size());
  }

  /// Estimated standard deviations: square roots of the requested diagonal
  /// entries of -inv(H_L). A negative variance raises DefinitenessError.
  Vector standard_deviations(std::span<const Index> indices) const {
    const Matrix columns = inverse_columns(indices);
    Vector sigmas(static_cast<Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const double variance = -columns(indices[k], static_cast<Index>(k));
      if (variance < 0.0) {
        throw DefinitenessError(
            "negative variance for variable " + std::to_string(indices[k]) +
            ": the optimum is not a strict maximum in that direction");
      }
      sigmas(static_cast<Index>(k)) = std::sqrt(variance);
    }
    return sigmas;
  }

  double hessian_rcond() const { return factorization_.reciprocal_condition_estimate(); }

  /// Reciprocal 1-norm condition estimate of the dependent-block constraint
  /// Jacobian (Assumption 1c is only verifiable numerically).
  double dependent_jacobian_rcond() const {
    const Index nz = hessian_->z_size();
    const Index m = hessian_->m;
    if (m == 0) return 1.0;
    // Border rows of H_L restricted to the dependent columns.
    std::vector<Index> col_of(static_cast<std::size_t>(nz), -1);
    for (std::size_t j = 0; j < hessian_->partition.dependent.size(); ++j) {
      col_of[static_cast<std::size_t>(hessian_->partition.dependent[j])] =
          static_cast<Index>(j);
    }
    std::vector<Triplet> triplets;
    const SparseMatrix& h = hessian_->matrix;
    for (int k = 0; k < h.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
        if (it.row() >= nz && it.col() < nz) {
          const Index j = col_of[static_cast<std::size_t>(it.col())];
          if (j >= 0) triplets.emplace_back(it.row() - nz, j, it.value());
        }
      }
    }
    SparseMatrix gq(m, m);
    gq.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::SparseLU<SparseMatrix> lu(gq);
    if (lu.info() != Eigen::Success) return 0.0;
    // Hager's 1-norm estimator for ||inv(Gq)||_1.
    Vector x = Vector::Constant(m, 1.0 / static_cast<double>(m));
    double inv_norm = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
      const Vector y = lu.solve(x);
      if (!y.allFinite()) return 0.0;
      inv_norm = std::max(inv_norm, y.lpNorm<1>());
      const Vector xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
      const Vector z = lu.adjoint().solve(xi);
      if (!z.allFinite()) return 0.0;
      Index j;
      const double zmax = z.cwiseAbs().maxCoeff(&j);
      if (zmax <= z.dot(x)) break;
      x.setZero();
      x(j) = 1.0;
    }
    const double norm1 = KktFactorization::one_norm(gq);
    if (norm1 <= 0.0 || inv_norm <= 0.0) return 0.0;
    return 1.0 / (norm1 * inv_norm);
  }

 private:
  const BorderedHessian* hessian_;
  KktFactorization factorization_;
};

inline Matrix inverse_columns(const BorderedHessian& hessian, std::span<const Index> indices) {
  return CovarianceExtractor(hessian).inverse_columns(indices);
}

inline Matrix reduced_hessian_inverse(const BorderedHessian& hessian) {
  return CovarianceExtractor(hessian).reduced_hessian_inverse();
}

inline Matrix full_covariance_block(const BorderedHessian& hessian,
                                    std::span<const Index> indices) {
  return CovarianceExtractor(hessian).full_covariance_block(indices);
}

inline Vector standard_deviations(const BorderedHessian& hessian,
                                  std::span<const Index> indices) {
  return CovarianceExtractor(hessian).standard_deviations(indices);
}

/// Correlation coefficients rho_ij = cov_ij / sqrt(cov_ii cov_jj), with an
/// exactly unit diagonal. Requires a symmetric input with positive diagonal.
inline Matrix correlation_matrix(const Matrix& covariance) {
  if (covariance.rows() != covariance.cols()) {
    throw ArgumentError("correlation_matrix: matrix not square");
  }
  const Index size = covariance.rows();
  Vector scale(size);
  for (Index i = 0; i < size; ++i) {
    const double v = covariance(i, i);
    if (!(v > 0.0)) {
      throw DefinitenessError("correlation_matrix: nonpositive diagonal entry " +
                              std::to_string(i));
    }
    scale(i) = 1.0 / std::sqrt(v);
  }
  Matrix corr = scale.asDiagonal() * covariance * scale.asDiagonal();
  for (Index i = 0; i < size; ++i) corr(i, i) = 1.0;
  return corr;
}

/// Uncertainty summary extracted from one bordered Hessian.
struct CovarianceReport {
  Matrix reduced_covariance;             ///< n x n, -inv(reduced Hessian), SPD
  std::vector<Index> requested;          ///< variable indices of the rows below
  std::vector<std::string> names;
  Vector estimates;                      ///< z* at the requested indices
  Vector std_devs;
  Matrix full_covariance_columns;        ///< (n+m) x k block of -inv(H_L)
  Matrix correlations;                   ///< k x k over the requested variables
  double rcond_dependent_jacobian = 0.0;
  double rcond_bordered_hessian = 0.0;
};

/// Builds the full report for the requested variables (all within the
/// decision-variable block). Verifies that the reduced covariance is positive
/// definite, as required at a strict constrained maximum.
inline CovarianceReport build_covariance_report(const BorderedHessian& hessian,
                                                const Vector& z_star,
                                                std::span<const Index> requested,
                                                std::span<const std::string> names,
                                                FactorBackend backend = FactorBackend::automatic) {
  if (z_star.size() != hessian.z_size()) {
    throw ArgumentError("build_covariance_report: z_star dimension mismatch");
  }
  const CovarianceExtractor extractor(hessian, backend);
  CovarianceReport report;
  report.reduced_covariance = -extractor.reduced_hessian_inverse();
  {
    const Eigen::LLT<Matrix> llt(report.reduced_covariance);
    if (llt.info() != Eigen::Success) {
      throw DefinitenessError(
          "reduced covariance is not positive definite: optimum is not a strict maximum");
    }
  }
  report.requested.assign(requested.begin(), requested.end());
  report.names.assign(names.begin(), names.end());
  report.full_covariance_columns = extractor.full_covariance_block(requested);
  report.estimates.resize(static_cast<Index>(requested.size()));
  for (std::size_t k = 0; k < requested.size(); ++k) {
    report.estimates(static_cast<Index>(k)) = z_star(requested[k]);
  }
  Matrix small(static_cast<Index>(requested.size()), static_cast<Index>(requested.size()));
  for (std::size_t i = 0; i < requested.size(); ++i) {
    for (std::size_t j = 0; j < requested.size(); ++j) {
      small(static_cast<Index>(i), static_cast<Index>(j)) =
          report.full_covariance_columns(requested[i], static_cast<Index>(j));
    }
  }
  small = 0.5 * (small + small.transpose());
  report.std_devs.resize(small.rows());
  for (Index i = 0; i < small.rows(); ++i) {
    const double variance = small(i, i);
    if (variance < 0.0) {
      throw DefinitenessError("negative variance for requested variable " +
                              std::to_string(report.requested[static_cast<std::size_t>(i)]));
    }
    report.std_devs(i) = std::sqrt(variance);
  }
  report.correlations = correlation_matrix(small);
  report.rcond_dependent_jacobian = extractor.dependent_jacobian_rcond();
  report.rcond_bordered_hessian = extractor.hessian_rcond();
  return report;
}

}  // namespace hesscov
