#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>

#include "hesscov/mesh.hpp"
#include "hesscov/models.hpp"
#include "hesscov/rng.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

/// Classical 4th-order Runge-Kutta integration over the given node times.
/// Throws NumericError when the state blows up.
inline MeshTrajectory rk4_simulate(const std::function<Vector(double, const Vector&)>& drift,
                                   const Vector& x0, const Vector& times) {
  MeshTrajectory traj;
  traj.times = times;
  traj.states.resize(times.size(), x0.size());
  Vector x = x0;
  traj.states.row(0) = x.transpose();
  for (Index k = 0; k + 1 < times.size(); ++k) {
    const double t = times(k);
    const double h = times(k + 1) - t;
    const Vector k1 = drift(t, x);
    const Vector k2 = drift(t + 0.5 * h, Vector(x + 0.5 * h * k1));
    const Vector k3 = drift(t + 0.5 * h, Vector(x + 0.5 * h * k2));
    const Vector k4 = drift(t + h, Vector(x + h * k3));
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      throw NumericError("rk4_simulate: state blow-up at t = " + std::to_string(times(k + 1)));
    }
    traj.states.row(k + 1) = x.transpose();
  }
  return traj;
}

/// Reference Van der Pol trajectory on the mesh nodes.
inline MeshTrajectory simulate_ode(const VdpModel& model, const Eigen::Vector2d& x0,
                                   const CollocationMesh& mesh) {
  validate(mesh);
  return rk4_simulate(
      [&](double, const Vector& x) -> Vector {
        return vdp_drift(Eigen::Vector2d(x(0), x(1)), model.mu);
      },
      x0, mesh.node_times);
}

/// One step of the explicit strong order 1.5 scheme for the Duffing SDE
/// (additive scalar noise on the x equation). `dw` and `dz` are the Wiener
/// increment and its time integral over the step.
inline Eigen::Vector2d duffing_sde_step(const DuffingModel& model, const Eigen::Vector2d& xz,
                                        double t, double h, double dw, double dz) {
  const auto drift = [&](double time, const Eigen::Vector2d& s) -> Eigen::Vector2d {
    const auto [dx, dzdt] = duffing_drift(s(0), s(1), time, model);
    return {dx, dzdt};
  };
  const Eigen::Vector2d b(model.sigma_d, 0.0);
  const double sqrt_h = std::sqrt(h);
  const Eigen::Vector2d a0 = drift(t, xz);
  const Eigen::Vector2d y_plus = xz + h * a0 + sqrt_h * b;
  const Eigen::Vector2d y_minus = xz + h * a0 - sqrt_h * b;
  const Eigen::Vector2d a_plus = drift(t + h, y_plus);
  const Eigen::Vector2d a_minus = drift(t + h, y_minus);
  return xz + dw * b + 0.5 * h * a0 + 0.25 * h * (a_plus + a_minus) +
         (dz / (2.0 * sqrt_h)) * (a_plus - a_minus);
}

/// Simulates the Duffing SDE over [0, T] with the explicit strong order 1.5
/// scheme. States are (x, z) per node; the noise matrix records the Wiener
/// increments, one per interval. Deterministic given the seed.
inline MeshTrajectory simulate_sde(const DuffingModel& model, std::pair<double, double> x0,
                                   double step, std::uint64_t rng_seed) {
  if (!(step > 0.0)) throw ArgumentError("simulate_sde: step must be positive");
  const auto steps = static_cast<Index>(std::llround(model.T / step));
  if (steps < 1 || std::abs(steps * step - model.T) > 1e-9 * std::max(1.0, model.T)) {
    throw ArgumentError("simulate_sde: step must divide the horizon");
  }
  RandomEngine rng = make_engine(rng_seed, SeedStream::sde_path);
  std::normal_distribution<double> normal(0.0, 1.0);

  MeshTrajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(steps + 1, 2);
  traj.noise.resize(steps, 1);
  Eigen::Vector2d xz(x0.first, x0.second);
  traj.times(0) = 0.0;
  traj.states.row(0) = xz.transpose();
  const double sqrt_step = std::sqrt(step);
  for (Index k = 0; k < steps; ++k) {
    const double t = k * step;
    const double u1 = normal(rng);
    const double u2 = normal(rng);
    // Joint draw of (dW, integral of W): Var(dZ) = h^3/3, Cov = h^2/2.
    const double dw = sqrt_step * u1;
    const double dz = step * sqrt_step * (0.5 * u1 + u2 / (2.0 * std::sqrt(3.0)));
    xz = duffing_sde_step(model, xz, t, step, dw, dz);
    if (!xz.allFinite()) {
      throw NumericError("simulate_sde: state blow-up at t = " + std::to_string(t + step));
    }
    traj.times(k + 1) = (k + 1) * step;
    traj.states.row(k + 1) = xz.transpose();
    traj.noise(k, 0) = dw;
  }
  return traj;
}

/// Samples one state component at the given trajectory nodes and adds i.i.d.
/// Gaussian measurement noise. Deterministic given the seed.
inline Vector measure(const MeshTrajectory& traj, Index component,
                      std::span<const Index> sample_nodes, double noise_std,
                      std::uint64_t rng_seed) {
  if (noise_std < 0.0) throw ArgumentError("measure: negative noise std");
  if (component < 0 || component >= traj.state_dim()) {
    throw ArgumentError("measure: component out of range");
  }
  RandomEngine rng = make_engine(rng_seed, SeedStream::data_noise);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y(static_cast<Index>(sample_nodes.size()));
  for (std::size_t k = 0; k < sample_nodes.size(); ++k) {
    const Index node = sample_nodes[k];
    if (node < 0 || node >= traj.node_count()) {
      throw ArgumentError("measure: sample node out of range");
    }
    y(static_cast<Index>(k)) = traj.states(node, component) + noise_std * normal(rng);
  }
  return y;
}

}  // namespace hesscov
