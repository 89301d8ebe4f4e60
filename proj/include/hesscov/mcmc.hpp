#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <Eigen/Cholesky>

#include "hesscov/collocation.hpp"
#include "hesscov/rng.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

using LogTargetFn = std::function<double(const Vector&)>;

/// Log posterior of the independent variables of the joint MAP problem:
/// dependents eliminated by the forward solve, merit evaluated at the result.
inline double log_target(const Vector& p, const JointMapTranscription& transcription) {
  return transcription.reduced_merit(p);
}

/// Metropolis acceptance for a symmetric proposal: accept with probability
/// min(1, exp(log_cand - log_cur)). A -inf or NaN candidate always rejects.
inline bool metropolis_accept(double log_cand, double log_cur, RandomEngine& rng) {
  if (!std::isfinite(log_cand)) return false;
  const double diff = log_cand - log_cur;
  if (diff >= 0.0) return true;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) < std::exp(diff);
}

/// Hybrid Gibbs sampler configuration. Scales follow the random-walk
/// Metropolis tuning of the source experiment: per-coordinate proposals of
/// std coordinate_scale * sqrt(R_ii) and joint proposals drawn from
/// (full_step_scale / sqrt(n)) * N(0, R).
struct ChainConfig {
  Index chain_length = 10000;
  int gibbs_cycles_per_full_step = 15;
  double coordinate_scale = 3.2;
  double full_step_scale = 1.8;
  std::uint64_t seed = 0;
  Vector initial_point;
  Matrix covariance;             ///< R, symmetric positive definite
  double burn_in_fraction = 0.2; ///< recorded for consumers; samples are not dropped here
  Index thinning = 1;
  double diagonal_load = 0.0;    ///< optional jitter added to R before factoring
};

struct ChainResult {
  Matrix samples;                 ///< chain_length x n
  Vector log_targets;             ///< per sample
  Vector coordinate_acceptance;   ///< per-coordinate acceptance rate
  double full_step_acceptance = 0.0;
  double overall_acceptance = 0.0;
  double burn_in_fraction = 0.2;

  Index dimension() const { return samples.cols(); }
};

namespace detail {

/// Precomputed proposal scales shared by the chain steps.
struct ProposalGeometry {
  Vector coordinate_std;  ///< coordinate_scale * sqrt(R_ii)
  Matrix chol_lower;      ///< scaled Cholesky factor of R for the full step
};

inline ProposalGeometry make_geometry(const ChainConfig& config) {
  const Index n = config.covariance.rows();
  if (config.covariance.cols() != n || n == 0) {
    throw ConfigError("mcmc: covariance R must be square and nonempty");
  }
  if (!(config.coordinate_scale > 0.0) || !(config.full_step_scale > 0.0)) {
    throw ConfigError("mcmc: proposal scales must be positive");
  }
  Matrix r = 0.5 * (config.covariance + config.covariance.transpose());
  if (config.diagonal_load > 0.0) {
    r += config.diagonal_load * Matrix::Identity(n, n);
  }
  const Eigen::LLT<Matrix> llt(r);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("mcmc: covariance R is not positive definite");
  }
  ProposalGeometry geometry;
  geometry.coordinate_std.resize(n);
  for (Index i = 0; i < n; ++i) {
    geometry.coordinate_std(i) = config.coordinate_scale * std::sqrt(r(i, i));
  }
  geometry.chol_lower =
      (config.full_step_scale / std::sqrt(static_cast<double>(n))) * Matrix(llt.matrixL());
  return geometry;
}

}  // namespace detail

/// Mutable chain state plus acceptance counters.
struct ChainState {
  Vector point;
  double log_value = -std::numeric_limits<double>::infinity();
  Eigen::ArrayX<long> coordinate_accepts;
  Eigen::ArrayX<long> coordinate_proposals;
  long full_accepts = 0;
  long full_proposals = 0;

  static ChainState start(Vector point, const LogTargetFn& target) {
    ChainState state;
    state.log_value = target(point);
    state.point = std::move(point);
    const Index n = state.point.size();
    state.coordinate_accepts = Eigen::ArrayX<long>::Zero(n);
    state.coordinate_proposals = Eigen::ArrayX<long>::Zero(n);
    return state;
  }

  long total_accepts() const { return coordinate_accepts.sum() + full_accepts; }
  long total_proposals() const { return coordinate_proposals.sum() + full_proposals; }
};

/// One Metropolis-within-Gibbs cycle: every coordinate updated in fixed
/// ascending order with a scaled-normal proposal.
inline void gibbs_cycle(ChainState& state, const LogTargetFn& target,
                        const detail::ProposalGeometry& geometry, RandomEngine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index n = state.point.size();
  for (Index i = 0; i < n; ++i) {
    const double current = state.point(i);
    const double candidate = current + geometry.coordinate_std(i) * normal(rng);
    state.point(i) = candidate;
    const double log_cand = target(state.point);
    ++state.coordinate_proposals(i);
    if (metropolis_accept(log_cand, state.log_value, rng)) {
      state.log_value = log_cand;
      ++state.coordinate_accepts(i);
    } else {
      state.point(i) = current;
    }
  }
}

/// One full random-walk Metropolis step with a joint proposal drawn from the
/// scaled covariance.
inline void full_rwm_step(ChainState& state, const LogTargetFn& target,
                          const detail::ProposalGeometry& geometry, RandomEngine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index n = state.point.size();
  Vector noise(n);
  for (Index i = 0; i < n; ++i) noise(i) = normal(rng);
  const Vector candidate = state.point + geometry.chol_lower * noise;
  const double log_cand = target(candidate);
  ++state.full_proposals;
  if (metropolis_accept(log_cand, state.log_value, rng)) {
    state.point = candidate;
    state.log_value = log_cand;
    ++state.full_accepts;
  }
}

/// Runs the hybrid sampler: blocks of `gibbs_cycles_per_full_step` Gibbs
/// cycles, each followed by one full random-walk Metropolis step. One sample
/// is recorded after every cycle and every full step until `chain_length`
/// samples exist. Deterministic given the seed.
inline ChainResult run_chain(const ChainConfig& config, const LogTargetFn& target) {
  const detail::ProposalGeometry geometry = detail::make_geometry(config);
  if (config.initial_point.size() != config.covariance.rows()) {
    throw ConfigError("mcmc: initial point and covariance dimensions disagree");
  }
  if (config.chain_length < 1) throw ConfigError("mcmc: chain_length must be >= 1");

  RandomEngine rng = make_engine(config.seed, SeedStream::mcmc_chain);
  ChainState state = ChainState::start(config.initial_point, target);
  if (!std::isfinite(state.log_value)) {
    throw ArgumentError("run_chain: initial point has non-finite log target");
  }

  const Index n = state.point.size();
  ChainResult result;
  result.samples.resize(config.chain_length, n);
  result.log_targets.resize(config.chain_length);
  result.burn_in_fraction = config.burn_in_fraction;

  Index recorded = 0;
  int cycles_since_full = 0;
  auto record = [&] {
    result.samples.row(recorded) = state.point.transpose();
    result.log_targets(recorded) = state.log_value;
    ++recorded;
  };
  while (recorded < config.chain_length) {
    if (cycles_since_full < config.gibbs_cycles_per_full_step) {
      gibbs_cycle(state, target, geometry, rng);
      ++cycles_since_full;
    } else {
      full_rwm_step(state, target, geometry, rng);
      cycles_since_full = 0;
    }
    record();
  }

  result.coordinate_acceptance.resize(n);
  for (Index i = 0; i < n; ++i) {
    result.coordinate_acceptance(i) =
        state.coordinate_proposals(i) > 0
            ? static_cast<double>(state.coordinate_accepts(i)) /
                  static_cast<double>(state.coordinate_proposals(i))
            : 0.0;
  }
  result.full_step_acceptance =
      state.full_proposals > 0
          ? static_cast<double>(state.full_accepts) / static_cast<double>(state.full_proposals)
          : 0.0;
  result.overall_acceptance =
      state.total_proposals() > 0
          ? static_cast<double>(state.total_accepts()) / static_cast<double>(state.total_proposals())
          : 0.0;
  return result;
}

/// Convenience overload sampling the joint MAP posterior of a transcription.
inline ChainResult run_chain(const ChainConfig& config,
                             const JointMapTranscription& transcription) {
  return run_chain(config,
                   [&transcription](const Vector& p) { return transcription.reduced_merit(p); });
}

/// Draws the chain start as a random perturbation of the modal estimate:
/// mode + L xi with L the Cholesky factor of R.
inline Vector perturbed_mode(const Vector& mode, const Matrix& covariance, std::uint64_t seed,
                             const LogTargetFn& target) {
  const Eigen::LLT<Matrix> llt(0.5 * (covariance + covariance.transpose()));
  if (llt.info() != Eigen::Success) {
    throw ConfigError("perturbed_mode: covariance is not positive definite");
  }
  RandomEngine rng = make_engine(seed, SeedStream::initial_perturbation);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Matrix chol = llt.matrixL();
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector noise(mode.size());
    for (Index i = 0; i < mode.size(); ++i) noise(i) = normal(rng);
    Vector candidate = mode + chol * noise;
    if (std::isfinite(target(candidate))) return candidate;
  }
  return mode;
}

}  // namespace hesscov
