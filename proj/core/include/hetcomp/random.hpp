#pragma once

#include <cstdint>
#include <random>

namespace hetcomp {

using Rng = std::mt19937_64;

/// Mixes (seed, stream) into an independent 64-bit seed. Trial t of a run
/// seeded with s always uses stream_seed(s, t), whatever the thread layout.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng{stream_seed(seed, stream)};
}

/// Unit-mean exponential draw.
inline double unit_exponential(Rng& rng) {
  return std::exponential_distribution<double>{1.0}(rng);
}

}  // namespace hetcomp
