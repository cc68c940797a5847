#pragma once

#include <cstdint>
#include <random>

namespace igmtf {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent deterministic stream for (seed, tag, index), so shuffling,
/// initialization and random sampling never share draws.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    return std::mt19937_64(splitmix64(splitmix64(seed ^ tag) + index));
}

namespace rng_tag {
inline constexpr std::uint64_t init = 0x1111'0001;
inline constexpr std::uint64_t shuffle = 0x1111'0002;
inline constexpr std::uint64_t sampler = 0x1111'0003;
}  // namespace rng_tag

}  // namespace igmtf
