#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include "hesscov/log.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

/// Fill-reducing ordering for KKT matrices with a few dense coupling rows
/// (global parameters touch every mesh interval): AMD on the sparse subgraph,
/// dense rows eliminated last. Plain AMD on such matrices produces a nearly
/// dense factor.
template <typename StorageIndex>
class DenseDeferringOrdering {
 public:
  using PermutationType =
      Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, StorageIndex>;

  template <typename MatrixType>
  void operator()(const MatrixType& mat, PermutationType& perm) {
    const StorageIndex n = static_cast<StorageIndex>(mat.cols());
    std::vector<StorageIndex> degree(static_cast<std::size_t>(n), 0);
    for (StorageIndex j = 0; j < n; ++j) {
      for (typename MatrixType::InnerIterator it(mat, j); it; ++it) {
        ++degree[static_cast<std::size_t>(j)];
      }
    }
    double avg = 0.0;
    for (StorageIndex d : degree) avg += d;
    avg /= std::max<double>(1.0, n);
    const auto threshold = static_cast<StorageIndex>(std::max(16.0, 8.0 * avg));

    std::vector<StorageIndex> sparse_set, dense_set;
    std::vector<StorageIndex> sub_of(static_cast<std::size_t>(n), -1);
    for (StorageIndex i = 0; i < n; ++i) {
      if (degree[static_cast<std::size_t>(i)] > threshold) {
        dense_set.push_back(i);
      } else {
        sub_of[static_cast<std::size_t>(i)] = static_cast<StorageIndex>(sparse_set.size());
        sparse_set.push_back(i);
      }
    }

    perm.resize(n);
    if (dense_set.empty() || sparse_set.size() < 2) {
      Eigen::AMDOrdering<StorageIndex> amd;
      amd(mat, perm);
      return;
    }

    const auto k = static_cast<StorageIndex>(sparse_set.size());
    Eigen::SparseMatrix<double, Eigen::ColMajor, StorageIndex> sub(k, k);
    {
      std::vector<Eigen::Triplet<double, StorageIndex>> triplets;
      for (StorageIndex j = 0; j < n; ++j) {
        const StorageIndex cj = sub_of[static_cast<std::size_t>(j)];
        if (cj < 0) continue;
        for (typename MatrixType::InnerIterator it(mat, j); it; ++it) {
          const StorageIndex ri = sub_of[static_cast<std::size_t>(it.row())];
          if (ri >= 0) triplets.emplace_back(ri, cj, 1.0);
        }
      }
      sub.setFromTriplets(triplets.begin(), triplets.end());
    }
    PermutationType sub_perm;
    Eigen::AMDOrdering<StorageIndex> amd;
    amd(sub, sub_perm);

    // Compose: sparse block in AMD order, dense rows appended. Ordering
    // output convention: indices()[elimination position] = original index.
    for (StorageIndex pos = 0; pos < k; ++pos) {
      perm.indices()[pos] =
          sparse_set[static_cast<std::size_t>(sub_perm.indices()[pos])];
    }
    for (std::size_t j = 0; j < dense_set.size(); ++j) {
      perm.indices()[k + static_cast<StorageIndex>(j)] = dense_set[j];
    }
  }
};

enum class FactorBackend { automatic, dense, sparse };

/// Eigenvalue sign counts of a symmetric factorization.
struct Inertia {
  Index positive = 0;
  Index negative = 0;
  Index zero = 0;
};

struct FactorizationOptions {
  FactorBackend backend = FactorBackend::automatic;
  Index dense_limit = 1200;  ///< automatic: dense at or below this size
  int max_refinements = 10;
  double refine_rel_tol = 1e-13;
};

/// Factorization of a symmetric indefinite KKT/bordered-Hessian matrix with
/// inertia reporting and iteratively refined solves.
///
/// The dense backend is LAPACK's Bunch-Kaufman (sytrf/sytrs). The sparse
/// backend is a no-pivoting LDLT; when plain factorization is unstable it
/// retries with small quasi-definite diagonal shifts (-eps on the first
/// `saddle_split` rows, +eps on the rest, the sign convention of a
/// maximization saddle point) and relies on refinement against the unshifted
/// matrix to restore accuracy.
class KktFactorization {
 public:
  using Options = FactorizationOptions;

  KktFactorization(SparseMatrix matrix, Index saddle_split, Options options = Options())
      : matrix_(std::move(matrix)), options_(options) {
    const Index size = matrix_.rows();
    if (matrix_.cols() != size) throw ArgumentError("KktFactorization: matrix not square");
    if (saddle_split < 0 || saddle_split > size) {
      throw ArgumentError("KktFactorization: saddle_split out of range");
    }
    matrix_.makeCompressed();
    norm_inf_ = infinity_norm(matrix_);
    dense_ = options_.backend == FactorBackend::dense ||
             (options_.backend == FactorBackend::automatic && size <= options_.dense_limit);
    if (dense_) {
      factorize_dense();
    } else {
      factorize_sparse(saddle_split);
    }
  }

  bool ok() const { return ok_; }
  const Inertia& inertia() const { return inertia_; }
  bool is_dense() const { return dense_; }
  Index size() const { return matrix_.rows(); }
  const SparseMatrix& matrix() const { return matrix_; }

  /// Solves matrix * x = b with iterative refinement. Returns false when the
  /// refined residual does not reach the tolerance (near-singular matrix).
  bool solve(const Vector& b, Vector& x) const {
    if (!ok_) return false;
    x = base_solve(b);
    if (!x.allFinite()) return false;
    double best_res = std::numeric_limits<double>::infinity();
    Vector best_x = x;
    for (int pass = 0; pass <= options_.max_refinements; ++pass) {
      const Vector r = b - matrix_ * x;
      const double res = r.lpNorm<Eigen::Infinity>();
      if (res < best_res) {
        best_res = res;
        best_x = x;
      }
      if (res <= solve_tolerance(b, x)) return true;
      if (pass == options_.max_refinements) break;
      const Vector dx = base_solve(r);
      if (!dx.allFinite()) break;
      x += dx;
    }
    x = best_x;
    last_residual_ = best_res;
    return best_res <= 1e3 * solve_tolerance(b, x);
  }

  /// Hager-style lower-bound estimate of 1 / (||A||_1 ||A^-1||_1).
  double reciprocal_condition_estimate() const {
    if (!ok_) return 0.0;
    const Index size = matrix_.rows();
    Vector x = Vector::Constant(size, 1.0 / static_cast<double>(size));
    Vector y(size), z(size);
    double inv_norm = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
      if (!solve(x, y)) return 0.0;
      inv_norm = std::max(inv_norm, y.lpNorm<1>());
      Vector xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
      if (!solve(xi, z)) return 0.0;
      Index j;
      const double zmax = z.cwiseAbs().maxCoeff(&j);
      if (zmax <= z.dot(x)) break;
      x.setZero();
      x(j) = 1.0;
    }
    const double norm1 = one_norm(matrix_);
    if (norm1 <= 0.0 || inv_norm <= 0.0) return 0.0;
    return 1.0 / (norm1 * inv_norm);
  }

  static double one_norm(const SparseMatrix& m) {
    Vector colsum = Vector::Zero(m.cols());
    for (int k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        colsum(it.col()) += std::abs(it.value());
      }
    }
    return colsum.size() > 0 ? colsum.maxCoeff() : 0.0;
  }

  static double infinity_norm(const SparseMatrix& m) {
    Vector rowsum = Vector::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        rowsum(it.row()) += std::abs(it.value());
      }
    }
    return rowsum.size() > 0 ? rowsum.maxCoeff() : 0.0;
  }

 private:
  double solve_tolerance(const Vector& b, const Vector& x) const {
    const double scale =
        std::max(b.lpNorm<Eigen::Infinity>(), norm_inf_ * x.lpNorm<Eigen::Infinity>());
    return options_.refine_rel_tol * std::max(scale, 1e-300);
  }

  Vector base_solve(const Vector& b) const {
    if (dense_) {
      Vector x = b;
      LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(dense_factor_.rows()), 1,
                     dense_factor_.data(), static_cast<lapack_int>(dense_factor_.rows()),
                     ipiv_.data(), x.data(), static_cast<lapack_int>(x.size()));
      return x;
    }
    return sparse_factor_->solve(b);
  }

  void factorize_dense() {
    const Index size = matrix_.rows();
    dense_factor_ = Matrix(matrix_);
    ipiv_.resize(static_cast<std::size_t>(size));
    const lapack_int info =
        LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(size),
                       dense_factor_.data(), static_cast<lapack_int>(size), ipiv_.data());
    if (info != 0) {
      ok_ = false;
      inertia_ = Inertia{0, 0, size};
      return;
    }
    ok_ = true;
    compute_dense_inertia();
  }

  void compute_dense_inertia() {
    const Index size = dense_factor_.rows();
    const double tiny = 1e-14 * std::max(1.0, norm_inf_);
    inertia_ = Inertia{};
    Index i = 0;
    while (i < size) {
      const bool block2 = ipiv_[static_cast<std::size_t>(i)] < 0;
      if (block2 && i + 1 < size) {
        const double d11 = dense_factor_(i, i);
        const double d21 = dense_factor_(i + 1, i);
        const double d22 = dense_factor_(i + 1, i + 1);
        const double mean = 0.5 * (d11 + d22);
        const double disc = std::sqrt(std::max(0.0, mean * mean - (d11 * d22 - d21 * d21)));
        classify(mean + disc, tiny);
        classify(mean - disc, tiny);
        i += 2;
      } else {
        classify(dense_factor_(i, i), tiny);
        i += 1;
      }
    }
    if (inertia_.zero > 0) ok_ = false;
  }

  void classify(double eigenvalue, double tiny) {
    if (std::abs(eigenvalue) <= tiny) {
      ++inertia_.zero;
    } else if (eigenvalue > 0.0) {
      ++inertia_.positive;
    } else {
      ++inertia_.negative;
    }
  }

  void factorize_sparse(Index saddle_split) {
    const double scale = std::max(1.0, norm_inf_);
    const double shifts[] = {0.0, 1e-12 * scale, 1e-9 * scale, 1e-6 * scale};
    for (double shift : shifts) {
      if (try_sparse(saddle_split, shift)) return;
    }
    ok_ = false;
  }

  bool try_sparse(Index saddle_split, double shift) {
    const Index size = matrix_.rows();
    SparseMatrix shifted = matrix_;
    if (shift != 0.0) {
      std::vector<Triplet> diag;
      diag.reserve(static_cast<std::size_t>(size));
      for (Index i = 0; i < size; ++i) {
        diag.emplace_back(i, i, i < saddle_split ? -shift : shift);
      }
      SparseMatrix d(size, size);
      d.setFromTriplets(diag.begin(), diag.end());
      shifted += d;
    }
    sparse_factor_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, DenseDeferringOrdering<int>>>();
    sparse_factor_->compute(shifted);
    if (sparse_factor_->info() != Eigen::Success) return false;

    const Vector d = sparse_factor_->vectorD();
    if (!d.allFinite()) return false;
    inertia_ = Inertia{};
    const double tiny = 1e-300;
    for (Index i = 0; i < d.size(); ++i) classify(d(i), tiny);
    if (inertia_.zero > 0) return false;

    // Probe solve: unstable no-pivot factorizations reveal themselves here.
    ok_ = true;
    Vector probe = Vector::Zero(size);
    probe(size / 2) = 1.0;
    Vector x;
    if (!solve(probe, x)) {
      ok_ = false;
      return false;
    }
    if (shift != 0.0) {
      log::debug("sparse LDLT required quasi-definite shift ", shift);
    }
    return true;
  }

  SparseMatrix matrix_;
  Options options_;
  double norm_inf_ = 0.0;
  bool dense_ = false;
  bool ok_ = false;
  Inertia inertia_;
  Matrix dense_factor_;
  std::vector<lapack_int> ipiv_;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, DenseDeferringOrdering<int>>> sparse_factor_;
  mutable double last_residual_ = 0.0;
};

}  // namespace hesscov
