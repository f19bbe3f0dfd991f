#pragma once

#include <cstdint>

#include "mccdma/channel.hpp"

namespace mccdma {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Generator for trial `counter` of stream `stream` (a sweep point) under `master`.
// Depends only on the three integers, never on scheduling.
inline Rng trial_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t key = splitmix64(splitmix64(splitmix64(master) ^ stream) ^ counter);
    return Rng(key);
}

}  // namespace mccdma
