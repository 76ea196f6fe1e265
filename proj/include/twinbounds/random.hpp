#pragma once

#include <cstdint>
#include <random>

namespace twinbounds {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent seeds for replicate
/// streams so results do not depend on the order replicates run in.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Engine for stream `stream` of a run seeded with `seed`.
inline Engine stream_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)),
                      static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                      static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(stream + 1))),
                      static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(stream + 1)) >> 32)};
    return Engine(seq);
}

}  // namespace twinbounds
