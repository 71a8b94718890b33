#pragma once

#include <cstdint>
#include <random>

namespace sagitta {

/// The library's only random source: std::mt19937_64, seeded per shard.
///
/// Streams are derived from (seed, shard) through the SplitMix64 finalizer so
/// that shard k of a computation is reproducible independently of how many
/// threads ran it.
using Rng = std::mt19937_64;

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t shard);

inline Rng make_rng(std::uint64_t seed, std::uint64_t shard = 0) {
  return Rng(split_seed(seed, shard));
}

}  // namespace sagitta
