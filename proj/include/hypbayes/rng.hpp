#pragma once

#include <cstdint>
#include <random>

namespace hypbayes {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` derived from `base`. Distinct (base, index) pairs
/// give unrelated seeds; `domain` separates independent uses of one base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index,
                                    std::uint64_t domain = 0) noexcept {
  return splitmix64(splitmix64(base ^ splitmix64(domain)) + index);
}

}  // namespace hypbayes
