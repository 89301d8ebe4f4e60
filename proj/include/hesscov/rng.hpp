#pragma once

#include <cstdint>
#include <random>

namespace hesscov {

using RandomEngine = std::mt19937_64;

/// Purpose tags for counter-based seed derivation. Every random stream in an
/// experiment is keyed by (master seed, stream tag, counter), so realizations
/// are reproducible and independent of execution order.
enum class SeedStream : std::uint64_t {
  data_noise = 1,
  sde_path = 2,
  realization = 3,
  mcmc_chain = 4,
  initial_perturbation = 5,
  test = 99,
};

namespace detail {

// splitmix64; used as a mixing function, not as the stream generator itself.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Derives an independent engine seed from a master seed, a stream tag, and a
/// counter (e.g. the realization index).
inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream,
                                 std::uint64_t counter = 0) {
  std::uint64_t s = detail::splitmix64(master);
  s = detail::splitmix64(s ^ static_cast<std::uint64_t>(stream));
  s = detail::splitmix64(s ^ counter);
  return s;
}

inline RandomEngine make_engine(std::uint64_t master, SeedStream stream,
                                std::uint64_t counter = 0) {
  return RandomEngine(derive_seed(master, stream, counter));
}

}  // namespace hesscov
