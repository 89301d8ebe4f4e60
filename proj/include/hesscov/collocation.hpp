#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hesscov/mesh.hpp"
#include "hesscov/models.hpp"
#include "hesscov/problem.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

/// Trapezoidal collocation defect x_{k+1} - x_k - (h/2)(f_k + f_{k+1}).
inline Vector trapezoidal_defect(const Vector& x_k, const Vector& x_k1, const Vector& f_k,
                                 const Vector& f_k1, double h) {
  if (!(h > 0.0)) throw ArgumentError("trapezoidal_defect: step must be positive");
  if (x_k.size() != x_k1.size() || x_k.size() != f_k.size() || f_k.size() != f_k1.size()) {
    throw ArgumentError("trapezoidal_defect: dimension mismatch");
  }
  return x_k1 - x_k - 0.5 * h * (f_k + f_k1);
}

/// Output-error estimation setup: an ODE model, one observed state, Gaussian
/// measurement noise of scale sigma (estimated by default), and data on a
/// collocation mesh.
struct OemSpec {
  std::shared_ptr<const OdeDynamics> dynamics;
  Index observed_state = 0;
  Vector data;
  CollocationMesh mesh;
  bool estimate_sigma = true;
  double fixed_sigma = 1.0;  ///< used only when estimate_sigma is false
};

namespace detail {

struct OemData {
  std::shared_ptr<const OdeDynamics> dynamics;
  CollocationMesh mesh;
  Vector data;
  Index observed_state = 0;
  bool estimate_sigma = true;
  double fixed_sigma = 1.0;
  Index np = 0;
  Index nx = 0;
  Index intervals = 0;

  Index n_sigma() const { return estimate_sigma ? 1 : 0; }
  Index n_independent() const { return np + n_sigma() + nx; }
  Index n_dependent() const { return nx * intervals; }
  Index total() const { return n_independent() + n_dependent(); }
  Index sigma_index() const { return np; }
  Index state_index(Index node, Index comp) const {
    return np + n_sigma() + node * nx + comp;
  }
  double sigma_of(const Vector& z) const {
    return estimate_sigma ? z(sigma_index()) : fixed_sigma;
  }
  Vector theta_of(const Vector& z) const { return z.head(np); }
  Vector state_of(const Vector& z, Index node) const {
    return z.segment(state_index(node, 0), nx);
  }
};

}  // namespace detail

/// Transcribed output-error problem plus its variable layout.
struct OemTranscription {
  ConstrainedProblem problem;
  CollocationMesh mesh;
  Index param_count = 0;   ///< free dynamical parameters
  Index state_count = 0;   ///< state dimension
  Index interval_count = 0;
  bool sigma_estimated = true;

  Index param_index(Index i) const { return i; }
  Index sigma_index() const { return param_count; }
  Index state_index(Index node, Index comp) const {
    return param_count + (sigma_estimated ? 1 : 0) + node * state_count + comp;
  }

  /// Assembles a decision vector from parameter values, noise scale, and a
  /// node-by-state matrix of state values.
  Vector pack(const Vector& theta, double sigma, const Matrix& states) const {
    Vector z(problem.size());
    z.head(param_count) = theta;
    if (sigma_estimated) z(sigma_index()) = sigma;
    for (Index k = 0; k <= interval_count; ++k) {
      for (Index i = 0; i < state_count; ++i) z(state_index(k, i)) = states(k, i);
    }
    return z;
  }
};

/// Transcribes an output-error problem by trapezoidal collocation. Decision
/// variables are (theta, sigma, states at all mesh nodes); the independent
/// block is (theta, sigma, initial state); one defect vector per mesh
/// interval; merit is the Gaussian output-error log-likelihood
/// -N ln(sigma) - 1/2 sum((y - yhat)^2) / sigma^2 with the constant dropped.
inline OemTranscription transcribe_oem(const OemSpec& spec) {
  if (!spec.dynamics) throw SpecError("transcribe_oem: missing dynamics model");
  validate(spec.mesh);
  if (spec.data.size() != spec.mesh.measurement_count()) {
    throw SpecError("transcribe_oem: data length disagrees with the measurement map");
  }
  if (spec.observed_state < 0 || spec.observed_state >= spec.dynamics->state_dim()) {
    throw SpecError("transcribe_oem: observed state out of range");
  }
  if (!spec.estimate_sigma && !(spec.fixed_sigma > 0.0)) {
    throw SpecError("transcribe_oem: fixed sigma must be positive");
  }

  auto d = std::make_shared<detail::OemData>();
  d->dynamics = spec.dynamics;
  d->mesh = spec.mesh;
  d->data = spec.data;
  d->observed_state = spec.observed_state;
  d->estimate_sigma = spec.estimate_sigma;
  d->fixed_sigma = spec.fixed_sigma;
  d->np = spec.dynamics->param_dim();
  d->nx = spec.dynamics->state_dim();
  d->intervals = spec.mesh.interval_count();

  ConstrainedProblem pb;
  pb.n_independent = d->n_independent();
  pb.n_dependent = d->n_dependent();
  pb.partition = VariablePartition::contiguous(pb.n_independent, pb.n_dependent);

  pb.merit = [d](const Vector& z) -> double {
    const double sigma = d->sigma_of(z);
    if (!(sigma > 0.0)) return -std::numeric_limits<double>::infinity();
    double ssq = 0.0;
    for (Index k = 0; k < d->data.size(); ++k) {
      const Index node = d->mesh.measurement_nodes[static_cast<std::size_t>(k)];
      const double e = d->data(k) - z(d->state_index(node, d->observed_state));
      ssq += e * e;
    }
    const double n_y = static_cast<double>(d->data.size());
    return -n_y * std::log(sigma) - 0.5 * ssq / (sigma * sigma);
  };

  pb.merit_gradient = [d](const Vector& z) -> Vector {
    const double sigma = d->sigma_of(z);
    Vector grad = Vector::Zero(d->total());
    double ssq = 0.0;
    for (Index k = 0; k < d->data.size(); ++k) {
      const Index node = d->mesh.measurement_nodes[static_cast<std::size_t>(k)];
      const Index idx = d->state_index(node, d->observed_state);
      const double e = d->data(k) - z(idx);
      ssq += e * e;
      grad(idx) += e / (sigma * sigma);
    }
    if (d->estimate_sigma) {
      const double n_y = static_cast<double>(d->data.size());
      grad(d->sigma_index()) = -n_y / sigma + ssq / (sigma * sigma * sigma);
    }
    return grad;
  };

  pb.merit_hessian = [d](const Vector& z) -> SparseMatrix {
    const double sigma = d->sigma_of(z);
    const double s2 = sigma * sigma;
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(3 * d->data.size() + 1));
    double ssq = 0.0;
    for (Index k = 0; k < d->data.size(); ++k) {
      const Index node = d->mesh.measurement_nodes[static_cast<std::size_t>(k)];
      const Index idx = d->state_index(node, d->observed_state);
      const double e = d->data(k) - z(idx);
      ssq += e * e;
      triplets.emplace_back(idx, idx, -1.0 / s2);
      if (d->estimate_sigma) {
        const double cross = -2.0 * e / (s2 * sigma);
        triplets.emplace_back(d->sigma_index(), idx, cross);
        triplets.emplace_back(idx, d->sigma_index(), cross);
      }
    }
    if (d->estimate_sigma) {
      const double n_y = static_cast<double>(d->data.size());
      triplets.emplace_back(d->sigma_index(), d->sigma_index(),
                            n_y / s2 - 3.0 * ssq / (s2 * s2));
    }
    SparseMatrix h(d->total(), d->total());
    h.setFromTriplets(triplets.begin(), triplets.end());
    return h;
  };

  pb.constraints = [d](const Vector& z) -> Vector {
    Vector g(d->n_dependent());
    const Vector theta = d->theta_of(z);
    Vector f_prev = d->dynamics->drift(d->mesh.node_times(0), d->state_of(z, 0), theta);
    for (Index j = 0; j < d->intervals; ++j) {
      const Vector x_next = d->state_of(z, j + 1);
      const Vector f_next = d->dynamics->drift(d->mesh.node_times(j + 1), x_next, theta);
      g.segment(j * d->nx, d->nx) =
          x_next - d->state_of(z, j) - 0.5 * d->mesh.step(j) * (f_prev + f_next);
      f_prev = f_next;
    }
    return g;
  };

  pb.constraint_jacobian = [d](const Vector& z) -> SparseMatrix {
    const Vector theta = d->theta_of(z);
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(d->intervals * d->nx * (2 * d->nx + d->np + 2)));
    Matrix jx_prev = d->dynamics->drift_jacobian_state(d->mesh.node_times(0),
                                                       d->state_of(z, 0), theta);
    Matrix jp_prev = d->dynamics->drift_jacobian_params(d->mesh.node_times(0),
                                                        d->state_of(z, 0), theta);
    for (Index j = 0; j < d->intervals; ++j) {
      const double h = d->mesh.step(j);
      const Vector x_next = d->state_of(z, j + 1);
      const Matrix jx_next =
          d->dynamics->drift_jacobian_state(d->mesh.node_times(j + 1), x_next, theta);
      const Matrix jp_next =
          d->dynamics->drift_jacobian_params(d->mesh.node_times(j + 1), x_next, theta);
      for (Index i = 0; i < d->nx; ++i) {
        const Index row = j * d->nx + i;
        for (Index c = 0; c < d->nx; ++c) {
          double v = -0.5 * h * jx_prev(i, c);
          if (c == i) v -= 1.0;
          triplets.emplace_back(row, d->state_index(j, c), v);
          v = -0.5 * h * jx_next(i, c);
          if (c == i) v += 1.0;
          triplets.emplace_back(row, d->state_index(j + 1, c), v);
        }
        for (Index c = 0; c < d->np; ++c) {
          triplets.emplace_back(row, c, -0.5 * h * (jp_prev(i, c) + jp_next(i, c)));
        }
      }
      jx_prev = jx_next;
      jp_prev = jp_next;
    }
    SparseMatrix jac(d->n_dependent(), d->total());
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return jac;
  };

  pb.constraint_hessian_contraction = [d](const Vector& z, const Vector& lambda) -> SparseMatrix {
    if (lambda.size() != d->n_dependent()) {
      throw ArgumentError("constraint_hessian_contraction: lambda dimension mismatch");
    }
    const Vector theta = d->theta_of(z);
    std::vector<Triplet> triplets;
    const Index local = d->nx + d->np;
    triplets.reserve(static_cast<std::size_t>(2 * d->intervals * local * local));
    auto scatter = [&](Index node, const Matrix& block) {
      auto global = [&](Index l) {
        return l < d->nx ? d->state_index(node, l) : (l - d->nx);
      };
      for (Index r = 0; r < local; ++r) {
        for (Index c = 0; c < local; ++c) {
          const double v = block(r, c);
          if (v != 0.0) triplets.emplace_back(global(r), global(c), v);
        }
      }
    };
    for (Index j = 0; j < d->intervals; ++j) {
      const double h = d->mesh.step(j);
      const Vector w = -0.5 * h * lambda.segment(j * d->nx, d->nx);
      scatter(j, d->dynamics->drift_hessian_contraction(d->mesh.node_times(j),
                                                        d->state_of(z, j), theta, w));
      scatter(j + 1, d->dynamics->drift_hessian_contraction(d->mesh.node_times(j + 1),
                                                            d->state_of(z, j + 1), theta, w));
    }
    SparseMatrix hess(d->total(), d->total());
    hess.setFromTriplets(triplets.begin(), triplets.end());
    return hess;
  };

  pb.variable_names.reserve(static_cast<std::size_t>(d->total()));
  for (const std::string& name : spec.dynamics->param_names()) pb.variable_names.push_back(name);
  if (d->estimate_sigma) pb.variable_names.push_back("sigma");
  for (Index k = 0; k <= d->intervals; ++k) {
    for (Index i = 0; i < d->nx; ++i) {
      pb.variable_names.push_back("x" + std::to_string(i + 1) + "_" + std::to_string(k));
    }
  }
  if (d->estimate_sigma) pb.strictly_positive.push_back(d->sigma_index());

  OemTranscription result;
  result.problem = std::move(pb);
  result.mesh = spec.mesh;
  result.param_count = d->np;
  result.state_count = d->nx;
  result.interval_count = d->intervals;
  result.sigma_estimated = d->estimate_sigma;
  return result;
}

/// Joint MAP state-path and parameter estimation setup for the Duffing SDE.
/// gamma and sigma_d are taken from the model as known; a, b, d, sigma_y are
/// estimated.
struct JointMapSpec {
  DuffingModel model;
  Vector data;
  CollocationMesh mesh;
};

namespace detail {

struct JointMapData {
  DuffingModel model;
  CollocationMesh mesh;
  Vector data;
  Index intervals = 0;

  // p = [a, b, d, sigma_y, z_0, x_0..x_K], q = [z_1..z_K, eta_0..eta_{K-1}]
  Index n_independent() const { return 5 + intervals + 1; }
  Index n_dependent() const { return 2 * intervals; }
  Index total() const { return n_independent() + n_dependent(); }
  Index x_index(Index node) const { return 5 + node; }
  Index z_index(Index node) const { return node == 0 ? 4 : n_independent() + node - 1; }
  Index eta_index(Index interval) const { return n_independent() + intervals + interval; }
  double horizon() const {
    return mesh.node_times(mesh.node_count() - 1) - mesh.node_times(0);
  }

  double drift_x(const Vector& z, Index node) const {
    const double a = z(0), b = z(1), dd = z(2);
    const double zz = z(z_index(node));
    const double x = z(x_index(node));
    return -a * zz * zz * zz - b * zz - dd * x + model.gamma * std::cos(mesh.node_times(node));
  }
};

}  // namespace detail

/// Transcribed joint MAP problem plus its layout and the forward elimination
/// of the dependent block (z-chain, then process-noise chain), used by the
/// MCMC sampler's reduced merit.
struct JointMapTranscription {
  ConstrainedProblem problem;
  CollocationMesh mesh;
  Index interval_count = 0;

  Index a_index() const { return 0; }
  Index b_index() const { return 1; }
  Index d_index() const { return 2; }
  Index sigma_y_index() const { return 3; }
  Index z_index(Index node) const { return data_->z_index(node); }
  Index x_index(Index node) const { return data_->x_index(node); }
  Index eta_index(Index interval) const { return data_->eta_index(interval); }

  /// Solves the constraints for the dependent variables given the independent
  /// block of `p` (size n): z-chain forward, then eta from the x-defects.
  /// Returns the full decision vector.
  Vector eliminate(const Vector& p) const {
    const auto& d = *data_;
    if (p.size() != problem.n_independent) {
      throw ArgumentError("eliminate: independent vector has wrong dimension");
    }
    Vector z(problem.size());
    z.head(problem.n_independent) = p;
    double f_prev = d.drift_x(z, 0);
    for (Index j = 0; j < d.intervals; ++j) {
      const double h = d.mesh.step(j);
      z(d.z_index(j + 1)) =
          z(d.z_index(j)) + 0.5 * h * (z(d.x_index(j)) + z(d.x_index(j + 1)));
      const double f_next = d.drift_x(z, j + 1);
      z(d.eta_index(j)) = (z(d.x_index(j + 1)) - z(d.x_index(j)) - 0.5 * h * (f_prev + f_next)) /
                          (h * d.model.sigma_d);
      f_prev = f_next;
    }
    return z;
  }

  /// Reduced merit of the independent variables (the MCMC log target);
  /// -infinity when the elimination or the merit is not finite.
  double reduced_merit(const Vector& p) const {
    if (!p.allFinite()) return -std::numeric_limits<double>::infinity();
    const Vector z = eliminate(p);
    if (!z.allFinite()) return -std::numeric_limits<double>::infinity();
    const double value = problem.merit(z);
    return std::isfinite(value) ? value : -std::numeric_limits<double>::infinity();
  }

  /// Assembles a decision vector from parameters and per-node paths.
  Vector pack(double a, double b, double dpar, double sigma_y, const Vector& x_path,
              const Vector& z_path, const Vector& eta) const {
    const auto& d = *data_;
    Vector z(problem.size());
    z(0) = a;
    z(1) = b;
    z(2) = dpar;
    z(3) = sigma_y;
    for (Index k = 0; k <= d.intervals; ++k) {
      z(d.x_index(k)) = x_path(k);
      z(d.z_index(k)) = z_path(k);
    }
    for (Index j = 0; j < d.intervals; ++j) z(d.eta_index(j)) = eta(j);
    return z;
  }

  std::shared_ptr<const detail::JointMapData> data_;
};

/// Transcribes the joint MAP problem of the Duffing SDE with trapezoidal
/// collocation. Constraints are the z-chain defects followed by the x-chain
/// defects with piecewise-constant process noise per interval; the merit is
/// the log-posterior density (uniform priors):
///   -1/2 sum((y_k - z_k)^2)/sigma_y^2 - N ln(sigma_y)
///   -1/2 sum(h_j eta_j^2) + T d / 2.
inline JointMapTranscription transcribe_joint_map(const JointMapSpec& spec) {
  validate(spec.mesh);
  if (spec.data.size() != spec.mesh.measurement_count()) {
    throw SpecError("transcribe_joint_map: data length disagrees with the measurement map");
  }
  if (!(spec.model.sigma_d > 0.0)) {
    throw SpecError("transcribe_joint_map: sigma_d must be positive");
  }

  auto d = std::make_shared<detail::JointMapData>();
  d->model = spec.model;
  d->mesh = spec.mesh;
  d->data = spec.data;
  d->intervals = spec.mesh.interval_count();

  ConstrainedProblem pb;
  pb.n_independent = d->n_independent();
  pb.n_dependent = d->n_dependent();
  pb.partition = VariablePartition::contiguous(pb.n_independent, pb.n_dependent);

  pb.merit = [d](const Vector& z) -> double {
    const double sigma_y = z(3);
    if (!(sigma_y > 0.0)) return -std::numeric_limits<double>::infinity();
    double ssq = 0.0;
    for (Index k = 0; k < d->data.size(); ++k) {
      const Index node = d->mesh.measurement_nodes[static_cast<std::size_t>(k)];
      const double e = d->data(k) - z(d->z_index(node));
      ssq += e * e;
    }
    double eta_term = 0.0;
    for (Index j = 0; j < d->intervals; ++j) {
      const double eta = z(d->eta_index(j));
      eta_term += d->mesh.step(j) * eta * eta;
    }
    const double n_y = static_cast<double>(d->data.size());
    return -0.5 * ssq / (sigma_y * sigma_y) - n_y * std::log(sigma_y) - 0.5 * eta_term +
           0.5 * d->horizon() * z(2);
  };

  pb.merit_gradient = [d](const Vector& z) -> Vector {
    const double sigma_y = z(3);
    const double s2 = sigma_y * sigma_y;
    Vector grad = Vector::Zero(d->total());
    double ssq = 0.0;
    for (Index k = 0; k < d->data.size(); ++k) {
      const Index node = d->mesh.measurement_nodes[static_cast<std::size_t>(k)];
      const Index idx = d->z_index(node);
      const double e = d->data(k) - z(idx);
      ssq += e * e;
      grad(idx) += e / s2;
    }
    const double n_y = static_cast<double>(d->data.size());
    grad(3) = -n_y / sigma_y + ssq / (s2 * sigma_y);
    for (Index j = 0; j < d->intervals; ++j) {
      grad(d->eta_index(j)) = -d->mesh.step(j) * z(d->eta_index(j));
    }
    grad(2) += 0.5 * d->horizon();
    return grad;
  };

  pb.merit_hessian = [d](const Vector& z) -> SparseMatrix {
    const double sigma_y = z(3);
    const double s2 = sigma_y * sigma_y;
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(3 * d->data.size() + d->intervals + 1));
    double ssq = 0.0;
    for (Index k = 0; k < d->data.size(); ++k) {
      const Index node = d->mesh.measurement_nodes[static_cast<std::size_t>(k)];
      const Index idx = d->z_index(node);
      const double e = d->data(k) - z(idx);
      ssq += e * e;
      triplets.emplace_back(idx, idx, -1.0 / s2);
      const double cross = -2.0 * e / (s2 * sigma_y);
      triplets.emplace_back(3, idx, cross);
      triplets.emplace_back(idx, 3, cross);
    }
    const double n_y = static_cast<double>(d->data.size());
    triplets.emplace_back(3, 3, n_y / s2 - 3.0 * ssq / (s2 * s2));
    for (Index j = 0; j < d->intervals; ++j) {
      triplets.emplace_back(d->eta_index(j), d->eta_index(j), -d->mesh.step(j));
    }
    SparseMatrix h(d->total(), d->total());
    h.setFromTriplets(triplets.begin(), triplets.end());
    return h;
  };

  pb.constraints = [d](const Vector& z) -> Vector {
    Vector g(d->n_dependent());
    double f_prev = d->drift_x(z, 0);
    for (Index j = 0; j < d->intervals; ++j) {
      const double h = d->mesh.step(j);
      g(j) = z(d->z_index(j + 1)) - z(d->z_index(j)) -
             0.5 * h * (z(d->x_index(j)) + z(d->x_index(j + 1)));
      const double f_next = d->drift_x(z, j + 1);
      g(d->intervals + j) =
          z(d->x_index(j + 1)) - z(d->x_index(j)) -
          0.5 * h * (f_prev + f_next + 2.0 * d->model.sigma_d * z(d->eta_index(j)));
      f_prev = f_next;
    }
    return g;
  };

  pb.constraint_jacobian = [d](const Vector& z) -> SparseMatrix {
    const double a = z(0), b = z(1), dpar = z(2);
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(13 * d->intervals));
    for (Index j = 0; j < d->intervals; ++j) {
      const double h = d->mesh.step(j);
      // z-chain defect.
      triplets.emplace_back(j, d->z_index(j + 1), 1.0);
      triplets.emplace_back(j, d->z_index(j), -1.0);
      triplets.emplace_back(j, d->x_index(j), -0.5 * h);
      triplets.emplace_back(j, d->x_index(j + 1), -0.5 * h);
      // x-chain defect.
      const Index row = d->intervals + j;
      const double zj = z(d->z_index(j));
      const double zj1 = z(d->z_index(j + 1));
      triplets.emplace_back(row, d->x_index(j), -1.0 + 0.5 * h * dpar);
      triplets.emplace_back(row, d->x_index(j + 1), 1.0 + 0.5 * h * dpar);
      triplets.emplace_back(row, d->z_index(j), 0.5 * h * (3.0 * a * zj * zj + b));
      triplets.emplace_back(row, d->z_index(j + 1), 0.5 * h * (3.0 * a * zj1 * zj1 + b));
      triplets.emplace_back(row, 0, 0.5 * h * (zj * zj * zj + zj1 * zj1 * zj1));
      triplets.emplace_back(row, 1, 0.5 * h * (zj + zj1));
      triplets.emplace_back(row, 2, 0.5 * h * (z(d->x_index(j)) + z(d->x_index(j + 1))));
      triplets.emplace_back(row, d->eta_index(j), -h * d->model.sigma_d);
    }
    SparseMatrix jac(d->n_dependent(), d->total());
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return jac;
  };

  pb.constraint_hessian_contraction = [d](const Vector& z, const Vector& lambda) -> SparseMatrix {
    if (lambda.size() != d->n_dependent()) {
      throw ArgumentError("constraint_hessian_contraction: lambda dimension mismatch");
    }
    const double a = z(0);
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(10 * d->intervals));
    for (Index j = 0; j < d->intervals; ++j) {
      const double h = d->mesh.step(j);
      const double w = lambda(d->intervals + j);
      for (Index node : {j, j + 1}) {
        const Index zi = d->z_index(node);
        const double zz = z(zi);
        // -(h/2) w * second derivatives of the x-drift at this node.
        triplets.emplace_back(zi, zi, 3.0 * h * w * a * zz);
        const double za = 1.5 * h * w * zz * zz;
        triplets.emplace_back(zi, 0, za);
        triplets.emplace_back(0, zi, za);
        const double zb = 0.5 * h * w;
        triplets.emplace_back(zi, 1, zb);
        triplets.emplace_back(1, zi, zb);
        const Index xi = d->x_index(node);
        triplets.emplace_back(xi, 2, zb);
        triplets.emplace_back(2, xi, zb);
      }
    }
    SparseMatrix hess(d->total(), d->total());
    hess.setFromTriplets(triplets.begin(), triplets.end());
    return hess;
  };

  pb.variable_names = {"a", "b", "d", "sigma_y", "z_0"};
  for (Index k = 0; k <= d->intervals; ++k) {
    pb.variable_names.push_back("x_" + std::to_string(k));
  }
  for (Index k = 1; k <= d->intervals; ++k) {
    pb.variable_names.push_back("z_" + std::to_string(k));
  }
  for (Index j = 0; j < d->intervals; ++j) {
    pb.variable_names.push_back("eta_" + std::to_string(j));
  }
  pb.strictly_positive.push_back(3);

  JointMapTranscription result;
  result.problem = std::move(pb);
  result.mesh = spec.mesh;
  result.interval_count = d->intervals;
  result.data_ = d;
  return result;
}

}  // namespace hesscov
