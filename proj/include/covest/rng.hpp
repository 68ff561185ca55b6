#pragma once

#include <cstdint>
#include <random>

namespace covest {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Named substreams inside one Monte Carlo trial.
enum class Stream : std::uint64_t {
    scene = 1,
    directions = 2,
    powers = 3,
};

/// Per-trial seed: master XOR trial index, so trials are order-independent.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
    return master ^ trial;
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream s) noexcept {
    return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(s));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

}  // namespace covest
