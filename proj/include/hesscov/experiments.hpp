#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "hesscov/collocation.hpp"
#include "hesscov/covariance.hpp"
#include "hesscov/log.hpp"
#include "hesscov/mesh.hpp"
#include "hesscov/models.hpp"
#include "hesscov/rng.hpp"
#include "hesscov/simulate.hpp"
#include "hesscov/solver.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

namespace detail {

/// Zero-phase (forward-backward) second-order Butterworth low-pass smoother.
/// `cutoff` is in rad per time unit, `dt` the sample spacing. Edges are
/// padded by odd reflection before filtering.
inline Vector lowpass_filtfilt(const Vector& signal, double dt, double cutoff = 1.0) {
  const Index n = signal.size();
  if (n < 3) return signal;
  const double omega = std::tan(0.5 * cutoff * dt);
  const double denom = 1.0 + std::sqrt(2.0) * omega + omega * omega;
  const double b0 = omega * omega / denom;
  const double b1 = 2.0 * b0;
  const double b2 = b0;
  const double a1 = 2.0 * (omega * omega - 1.0) / denom;
  const double a2 = (1.0 - std::sqrt(2.0) * omega + omega * omega) / denom;

  const Index pad = std::min<Index>(n - 1, static_cast<Index>(std::ceil(3.0 / (cutoff * dt))));
  Vector padded(n + 2 * pad);
  for (Index i = 0; i < pad; ++i) padded(i) = 2.0 * signal(0) - signal(pad - i);
  padded.segment(pad, n) = signal;
  for (Index i = 0; i < pad; ++i) {
    padded(pad + n + i) = 2.0 * signal(n - 1) - signal(n - 2 - i);
  }

  auto pass = [&](const Vector& x) {
    Vector y(x.size());
    double x1 = x(0), x2 = x(0), y1 = x(0), y2 = x(0);
    for (Index i = 0; i < x.size(); ++i) {
      const double yi = b0 * x(i) + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = x(i);
      y2 = y1;
      y1 = yi;
      y(i) = yi;
    }
    return y;
  };

  Vector forward = pass(padded);
  Vector backward = pass(forward.reverse());
  Vector smoothed = backward.reverse().segment(pad, n);
  return smoothed;
}

/// Linear interpolation of (xs, ys) samples onto query times; xs must be
/// increasing and cover the queries.
inline Vector interp_linear(const Vector& xs, const Vector& ys, const Vector& queries) {
  Vector out(queries.size());
  Index hint = 0;
  for (Index k = 0; k < queries.size(); ++k) {
    const double t = queries(k);
    while (hint + 2 < xs.size() && xs(hint + 1) < t) ++hint;
    const double t0 = xs(hint), t1 = xs(hint + 1);
    const double w = (t - t0) / (t1 - t0);
    out(k) = (1.0 - w) * ys(hint) + w * ys(hint + 1);
  }
  return out;
}

/// Central differences on a (possibly nonuniform) grid; one-sided at the ends.
inline Vector finite_difference(const Vector& times, const Vector& values) {
  const Index n = values.size();
  Vector dv(n);
  dv(0) = (values(1) - values(0)) / (times(1) - times(0));
  for (Index k = 1; k + 1 < n; ++k) {
    dv(k) = (values(k + 1) - values(k - 1)) / (times(k + 1) - times(k - 1));
  }
  dv(n - 1) = (values(n - 1) - values(n - 2)) / (times(n - 1) - times(n - 2));
  return dv;
}

}  // namespace detail

/// Initial guess for the Van der Pol output-error problem.
struct OemGuess {
  double mu = 1.0;
  double sigma = 0.0;
  Vector x1;  ///< per mesh node
  Vector x2;  ///< per mesh node
};

/// Default smoother cutoff (rad per time unit) for the Van der Pol guess. The
/// relaxation oscillation at mu = 2 carries strong harmonics up to several
/// rad per unit; a lower cutoff distorts the derivative guesses badly.
inline constexpr double kOemGuessCutoff = 10.0;

/// Builds the initial guess for all decision variables of the Van der Pol
/// output-error transcription: x1 from zero-phase low-pass filtered
/// measurements interpolated to the mesh, x2 from finite differences of the
/// x1 guess, mu from a linear least-squares fit of the x2-equation residual
/// in trapezoidal-integrated form, and sigma from the spread of the data
/// residual normalized by the smoother's residual degrees of freedom.
inline OemGuess initial_guess_oem_parts(const Vector& data, const CollocationMesh& mesh,
                                        double cutoff = kOemGuessCutoff) {
  validate(mesh);
  if (data.size() != mesh.measurement_count()) {
    throw SpecError("initial_guess_oem: data length disagrees with the measurement map");
  }
  if (data.size() < 3) throw SpecError("initial_guess_oem: needs at least 3 measurements");

  const Index n = data.size();
  Vector sample_times(n);
  for (Index k = 0; k < n; ++k) {
    sample_times(k) = mesh.node_times(mesh.measurement_nodes[static_cast<std::size_t>(k)]);
  }
  const double dt =
      (sample_times(n - 1) - sample_times(0)) / static_cast<double>(n - 1);

  // All signal processing happens on the sample grid; mesh values are
  // interpolated afterwards so a fine mesh does not differentiate the
  // interpolant.
  OemGuess guess;
  const Vector x1_s = detail::lowpass_filtfilt(data, dt, cutoff);
  const Vector x2_s = detail::finite_difference(sample_times, x1_s);

  // mu from least squares on the trapezoidal residual of the x2 equation:
  //   x2(k+1) - x2(k) + int(x1) = mu * int((1 - x1^2) x2).
  double num = 0.0, den = 0.0;
  for (Index k = 0; k + 1 < n; ++k) {
    const double h = sample_times(k + 1) - sample_times(k);
    const double response = x2_s(k + 1) - x2_s(k) + 0.5 * h * (x1_s(k + 1) + x1_s(k));
    const double regressor =
        0.5 * h * ((1.0 - x1_s(k + 1) * x1_s(k + 1)) * x2_s(k + 1) +
                   (1.0 - x1_s(k) * x1_s(k)) * x2_s(k));
    num += regressor * response;
    den += regressor * regressor;
  }
  guess.mu = den > 1e-12 ? num / den : 1.0;

  guess.x1 = detail::interp_linear(sample_times, x1_s, mesh.node_times);
  guess.x2 = detail::interp_linear(sample_times, x2_s, mesh.node_times);

  // Residual spread, normalized by trace((I-S)'(I-S)) of the linear smoother
  // S so that pure noise yields an unbiased scale estimate.
  double ssq = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double e = data(k) - x1_s(k);
    ssq += e * e;
  }
  double dof = 0.0;
  {
    Vector unit = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
      unit(j) = 1.0;
      Vector column = detail::lowpass_filtfilt(unit, dt, cutoff);
      column(j) -= 1.0;
      dof += column.squaredNorm();
      unit(j) = 0.0;
    }
  }
  guess.sigma = std::max(std::sqrt(ssq / std::max(dof, 1.0)), 1e-8);
  return guess;
}

/// Packed decision vector [mu, sigma, x1_0, x2_0, x1_1, x2_1, ...] matching
/// the Van der Pol output-error transcription layout.
inline Vector initial_guess_oem(const Vector& data, const CollocationMesh& mesh) {
  const OemGuess guess = initial_guess_oem_parts(data, mesh);
  Vector z(2 + 2 * mesh.node_count());
  z(0) = guess.mu;
  z(1) = guess.sigma;
  for (Index k = 0; k < mesh.node_count(); ++k) {
    z(2 + 2 * k) = guess.x1(k);
    z(2 + 2 * k + 1) = guess.x2(k);
  }
  return z;
}

/// Repeated-realization study configuration for the Van der Pol output-error
/// experiment.
struct MonteCarloConfig {
  Index realization_count = 500;
  std::uint64_t master_seed = 0;
  VdpModel model;
  Eigen::Vector2d x0{0.0, 1.0};
  double t_start = 0.0;
  double t_end = 20.0;
  double sample_spacing = 0.1;
  double mesh_spacing = 0.02;
  SolverOptions solver;
  std::vector<std::string> report_targets = {"mu", "sigma", "x1_0", "x2_0"};
  int workers = 0;  ///< 0: hardware concurrency
};

struct MonteCarloReport {
  struct TargetRow {
    std::string name;
    double truth = 0.0;
    double estimate_mean = 0.0;
    double sample_std = 0.0;      ///< NaN when fewer than 2 converged runs
    double mean_sigma_hat = 0.0;
    double std_sigma_hat = 0.0;   ///< NaN when fewer than 2 converged runs
    double coverage = 0.0;        ///< fraction with |estimate - truth| <= sigma_hat
  };
  struct RealizationRecord {
    std::uint64_t noise_seed = 0;
    SolveStatus status = SolveStatus::max_iter;
    int iterations = 0;
    Vector estimates;   ///< per target; empty when not converged
    Vector sigma_hats;  ///< per target; empty when not converged
  };

  std::vector<TargetRow> rows;
  std::vector<RealizationRecord> realizations;
  Index converged_count = 0;
  double convergence_rate = 0.0;
};

/// Runs the repeated-realization calibration study: per realization, generate
/// noisy data, build the initial guess, transcribe, solve, and extract the
/// estimated standard deviations of the report targets. Non-converged
/// realizations are excluded from the statistics and counted. Realizations
/// run on a bounded worker pool; aggregation is a deterministic reduction in
/// realization order.
inline MonteCarloReport run_monte_carlo(const MonteCarloConfig& config) {
  if (config.realization_count < 1) {
    throw ArgumentError("run_monte_carlo: realization_count must be >= 1");
  }
  const auto sample_count =
      static_cast<Index>(std::llround((config.t_end - config.t_start) / config.sample_spacing)) + 1;
  const CollocationMesh mesh = mesh_for_samples_spacing(config.t_start, sample_count,
                                                        config.sample_spacing,
                                                        config.mesh_spacing);
  const MeshTrajectory truth = simulate_ode(config.model, config.x0, mesh);

  // Target truth values; only p-block targets are supported.
  auto truth_value = [&](const std::string& name) -> double {
    if (name == "mu") return config.model.mu;
    if (name == "sigma") return config.model.sigma;
    if (name == "x1_0") return config.x0(0);
    if (name == "x2_0") return config.x0(1);
    throw ArgumentError("run_monte_carlo: unknown report target " + name);
  };
  const std::vector<std::string> target_names = config.report_targets;
  const auto n_targets = static_cast<Index>(target_names.size());

  std::vector<MonteCarloReport::RealizationRecord> records(
      static_cast<std::size_t>(config.realization_count));

  auto run_one = [&](Index r) {
    MonteCarloReport::RealizationRecord record;
    record.noise_seed = derive_seed(config.master_seed, SeedStream::realization,
                                    static_cast<std::uint64_t>(r));
    try {
      const Vector data = measure(truth, 0, mesh.measurement_nodes, config.model.sigma,
                                  record.noise_seed);
      OemSpec spec;
      spec.dynamics = std::make_shared<VdpDynamics>();
      spec.observed_state = 0;
      spec.data = data;
      spec.mesh = mesh;
      const OemTranscription transcription = transcribe_oem(spec);
      const Vector z0 = initial_guess_oem(data, mesh);
      const KktSolution solution =
          solve_equality_constrained(transcription.problem, z0, config.solver);
      record.status = solution.status;
      record.iterations = solution.iterations;
      if (solution.status == SolveStatus::converged) {
        const BorderedHessian hessian = assemble_bordered_hessian(
            transcription.problem, solution.z_star, solution.lambda_star);
        const CovarianceExtractor extractor(hessian, config.solver.backend);
        std::vector<Index> indices;
        indices.reserve(target_names.size());
        for (const std::string& name : target_names) {
          const auto& names = transcription.problem.variable_names;
          const auto it = std::find(names.begin(), names.end(), name);
          if (it == names.end()) {
            throw ArgumentError("run_monte_carlo: unknown report target " + name);
          }
          indices.push_back(static_cast<Index>(it - names.begin()));
        }
        record.sigma_hats = extractor.standard_deviations(indices);
        record.estimates.resize(n_targets);
        for (Index i = 0; i < n_targets; ++i) {
          record.estimates(i) = solution.z_star(indices[static_cast<std::size_t>(i)]);
        }
      }
    } catch (const std::exception& e) {
      log::warn("realization ", r, " failed: ", e.what());
      record.status = SolveStatus::singular_kkt;
    }
    records[static_cast<std::size_t>(r)] = std::move(record);
  };

  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(
      std::min<Index>(workers, config.realization_count));
  if (workers <= 1) {
    for (Index r = 0; r < config.realization_count; ++r) run_one(r);
  } else {
    std::atomic<Index> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const Index r = next.fetch_add(1);
          if (r >= config.realization_count) break;
          run_one(r);
        }
      });
    }
    for (auto& thread : pool) thread.join();
  }

  MonteCarloReport report;
  report.realizations = std::move(records);
  for (const auto& record : report.realizations) {
    if (record.status == SolveStatus::converged) ++report.converged_count;
  }
  report.convergence_rate = static_cast<double>(report.converged_count) /
                            static_cast<double>(config.realization_count);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Index i = 0; i < n_targets; ++i) {
    MonteCarloReport::TargetRow row;
    row.name = target_names[static_cast<std::size_t>(i)];
    row.truth = truth_value(row.name);
    double est_sum = 0.0, sig_sum = 0.0;
    Index covered = 0;
    for (const auto& record : report.realizations) {
      if (record.status != SolveStatus::converged) continue;
      est_sum += record.estimates(i);
      sig_sum += record.sigma_hats(i);
      if (std::abs(record.estimates(i) - row.truth) <= record.sigma_hats(i)) ++covered;
    }
    const auto count = static_cast<double>(report.converged_count);
    if (report.converged_count > 0) {
      row.estimate_mean = est_sum / count;
      row.mean_sigma_hat = sig_sum / count;
      row.coverage = static_cast<double>(covered) / count;
    }
    if (report.converged_count > 1) {
      double est_var = 0.0, sig_var = 0.0;
      for (const auto& record : report.realizations) {
        if (record.status != SolveStatus::converged) continue;
        est_var += std::pow(record.estimates(i) - row.estimate_mean, 2);
        sig_var += std::pow(record.sigma_hats(i) - row.mean_sigma_hat, 2);
      }
      row.sample_std = std::sqrt(est_var / (count - 1.0));
      row.std_sigma_hat = std::sqrt(sig_var / (count - 1.0));
    } else {
      row.sample_std = nan;
      row.std_sigma_hat = nan;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Pointwise confidence band for one state component along the mesh.
struct StateBand {
  Vector times;
  Vector lower;
  Vector estimate;
  Vector upper;
};

/// Band of estimate +- multiplier * sigma_hat for a state component, with
/// sigma_hat from the diagonal of the full decision-variable covariance.
inline StateBand state_band(const KktSolution& solution, const BorderedHessian& hessian,
                            const OemTranscription& transcription, Index component,
                            double multiplier) {
  if (solution.status != SolveStatus::converged) {
    throw ArgumentError("state_band: solution is not converged");
  }
  const Index nodes = transcription.interval_count + 1;
  std::vector<Index> indices(static_cast<std::size_t>(nodes));
  for (Index k = 0; k < nodes; ++k) {
    indices[static_cast<std::size_t>(k)] = transcription.state_index(k, component);
  }
  const CovarianceExtractor extractor(hessian);
  const Vector sigmas = extractor.standard_deviations(indices);

  StateBand band;
  band.times = transcription.mesh.node_times;
  band.estimate.resize(nodes);
  band.lower.resize(nodes);
  band.upper.resize(nodes);
  for (Index k = 0; k < nodes; ++k) {
    const double value = solution.z_star(indices[static_cast<std::size_t>(k)]);
    band.estimate(k) = value;
    band.lower(k) = value - multiplier * sigmas(k);
    band.upper(k) = value + multiplier * sigmas(k);
  }
  return band;
}

}  // namespace hesscov
