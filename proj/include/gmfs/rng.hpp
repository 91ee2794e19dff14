#pragma once

#include <cstdint>
#include <random>

namespace gmfs {

using Engine = std::mt19937_64;

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Substream seed for (root, a, b). Counter-based: seed = mix(mix(mix(root) ^ a) ^ b),
/// so every (component, trial) pair gets an independent engine regardless
/// of evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return mix64(mix64(mix64(root) ^ (a + 0x632be59bd9b4e019ULL)) ^ (b + 0x85157af5ULL));
}

inline Engine make_engine(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
    return Engine(derive_seed(root, a, b));
}

}  // namespace gmfs
