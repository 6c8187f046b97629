#pragma once

#include <cstdint>
#include <random>

namespace dynsense {

using Rng = std::mt19937_64;

/// Independent generator stream keyed by (seed, stream). Used wherever work
/// is split across threads so results do not depend on scheduling.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Seed for trial `index` of a run seeded with `seed`. Trial 0 keeps the seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  if (index == 0) return seed;
  Rng rng = make_stream(seed, index | (std::uint64_t{1} << 63));
  return rng();
}

// Stream tags for the simulator's independent random sources.
namespace streams {
inline constexpr std::uint64_t kLayout = 1;
inline constexpr std::uint64_t kSignal = 2;
inline constexpr std::uint64_t kChannel = 3;
inline constexpr std::uint64_t kQuery = 4;
inline constexpr std::uint64_t kCertify = 5;
}  // namespace streams

}  // namespace dynsense
