#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace hesscov {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Dimension or precondition violations on call arguments.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values produced where finite ones are required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Singular or numerically rank-deficient matrix where a nonsingular one is
/// required. Signals an Assumption violation or a non-isolated optimum.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A covariance quantity failed a positivity/definiteness requirement, i.e.
/// the optimum is not a strict maximum in some direction.
struct DefinitenessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed experiment or transcription specification.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed configuration file or inconsistent option values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed data file (CSV/JSON).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hesscov
