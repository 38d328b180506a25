#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace choicestat {

using Rng = std::mt19937_64;

/// Mixes a base seed with a sequence of stream indices (splitmix64 finaliser).
/// Used for per-start, per-replicate and per-replication seeds so that results
/// do not depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (auto i : indices) h = mix(h ^ mix(i + 0x632BE59BD9B4E019ULL));
  return h;
}

}  // namespace choicestat
