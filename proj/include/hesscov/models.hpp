#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hesscov/types.hpp"

namespace hesscov {

/// Van der Pol oscillator benchmark: damping parameter and measurement noise
/// standard deviation used for data generation.
struct VdpModel {
  double mu = 2.0;
  double sigma = 0.1;
};

/// dx1 = x2, dx2 = mu (1 - x1^2) x2 - x1.
inline Eigen::Vector2d vdp_drift(const Eigen::Vector2d& x, double mu) {
  return {x(1), mu * (1.0 - x(0) * x(0)) * x(1) - x(0)};
}

/// Duffing oscillator benchmark (SDE):
///   dX = (-a Z^3 - b Z - d X + gamma cos t) dt + sigma_d dW,
///   dZ = X dt,
/// with Z measured at spacing ts under Gaussian noise of std sigma_y.
struct DuffingModel {
  double a = 1.0;
  double b = -1.0;
  double d = 0.2;
  double gamma = 0.3;    ///< known forcing amplitude
  double sigma_d = 0.1;  ///< known diffusion coefficient
  double sigma_y = 0.1;
  double ts = 0.1;
  double T = 200.0;
};

/// Drift of the Duffing SDE; returns (dx, dz).
inline std::pair<double, double> duffing_drift(double x, double z, double t,
                                               const DuffingModel& params) {
  const double dx = -params.a * z * z * z - params.b * z - params.d * x +
                    params.gamma * std::cos(t);
  return {dx, x};
}

/// Parametric ODE dynamics xdot = f(t, x, theta) with analytic first and
/// second derivatives, used by the collocation transcription. theta holds the
/// free dynamical parameters only.
class OdeDynamics {
 public:
  virtual ~OdeDynamics() = default;
  virtual Index state_dim() const = 0;
  virtual Index param_dim() const = 0;
  virtual std::vector<std::string> param_names() const = 0;
  virtual Vector drift(double t, const Vector& x, const Vector& theta) const = 0;
  virtual Matrix drift_jacobian_state(double t, const Vector& x, const Vector& theta) const = 0;
  virtual Matrix drift_jacobian_params(double t, const Vector& x, const Vector& theta) const = 0;
  /// Hessian of w' f over the stacked variables (x, theta):
  /// (nx+np) x (nx+np), symmetric.
  virtual Matrix drift_hessian_contraction(double t, const Vector& x, const Vector& theta,
                                           const Vector& w) const = 0;
};

/// Van der Pol dynamics with mu free.
class VdpDynamics final : public OdeDynamics {
 public:
  Index state_dim() const override { return 2; }
  Index param_dim() const override { return 1; }
  std::vector<std::string> param_names() const override { return {"mu"}; }

  Vector drift(double, const Vector& x, const Vector& theta) const override {
    Vector f(2);
    f(0) = x(1);
    f(1) = theta(0) * (1.0 - x(0) * x(0)) * x(1) - x(0);
    return f;
  }

  Matrix drift_jacobian_state(double, const Vector& x, const Vector& theta) const override {
    Matrix j(2, 2);
    j(0, 0) = 0.0;
    j(0, 1) = 1.0;
    j(1, 0) = -2.0 * theta(0) * x(0) * x(1) - 1.0;
    j(1, 1) = theta(0) * (1.0 - x(0) * x(0));
    return j;
  }

  Matrix drift_jacobian_params(double, const Vector& x, const Vector&) const override {
    Matrix j(2, 1);
    j(0, 0) = 0.0;
    j(1, 0) = (1.0 - x(0) * x(0)) * x(1);
    return j;
  }

  Matrix drift_hessian_contraction(double, const Vector& x, const Vector& theta,
                                   const Vector& w) const override {
    // Only f2 is nonlinear; variables ordered (x1, x2, mu).
    Matrix h = Matrix::Zero(3, 3);
    const double w2 = w(1);
    const double mu = theta(0);
    h(0, 0) = w2 * (-2.0 * mu * x(1));
    h(0, 1) = w2 * (-2.0 * mu * x(0));
    h(1, 0) = h(0, 1);
    h(0, 2) = w2 * (-2.0 * x(0) * x(1));
    h(2, 0) = h(0, 2);
    h(1, 2) = w2 * (1.0 - x(0) * x(0));
    h(2, 1) = h(1, 2);
    return h;
  }
};

/// Linear time-invariant dynamics xdot = A x with no free parameters; test
/// model for exactness properties.
class LinearDynamics final : public OdeDynamics {
 public:
  explicit LinearDynamics(Matrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw ArgumentError("LinearDynamics: A must be square");
  }

  Index state_dim() const override { return a_.rows(); }
  Index param_dim() const override { return 0; }
  std::vector<std::string> param_names() const override { return {}; }

  Vector drift(double, const Vector& x, const Vector&) const override { return a_ * x; }

  Matrix drift_jacobian_state(double, const Vector&, const Vector&) const override { return a_; }

  Matrix drift_jacobian_params(double, const Vector&, const Vector&) const override {
    return Matrix(a_.rows(), 0);
  }

  Matrix drift_hessian_contraction(double, const Vector&, const Vector&,
                                   const Vector&) const override {
    return Matrix::Zero(a_.rows(), a_.rows());
  }

  const Matrix& system_matrix() const { return a_; }

 private:
  Matrix a_;
};

/// Frozen dynamics xdot = 0; reduces output-error estimation to i.i.d.
/// Gaussian mean/scale estimation.
class ZeroDynamics final : public OdeDynamics {
 public:
  explicit ZeroDynamics(Index state_dim) : state_dim_(state_dim) {}

  Index state_dim() const override { return state_dim_; }
  Index param_dim() const override { return 0; }
  std::vector<std::string> param_names() const override { return {}; }
  Vector drift(double, const Vector&, const Vector&) const override {
    return Vector::Zero(state_dim_);
  }
  Matrix drift_jacobian_state(double, const Vector&, const Vector&) const override {
    return Matrix::Zero(state_dim_, state_dim_);
  }
  Matrix drift_jacobian_params(double, const Vector&, const Vector&) const override {
    return Matrix(state_dim_, 0);
  }
  Matrix drift_hessian_contraction(double, const Vector&, const Vector&,
                                   const Vector&) const override {
    return Matrix::Zero(state_dim_, state_dim_);
  }

 private:
  Index state_dim_;
};

}  // namespace hesscov
