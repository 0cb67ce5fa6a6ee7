#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gmfs::rng {

/// Stream tags keep draws for different purposes disjoint under one seed.
enum class Stream : std::uint64_t { Table = 1, Path = 2, PathSeed = 3 };

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, Stream stream, std::uint64_t a,
                            std::uint64_t b) noexcept {
    return mix64(mix64(mix64(seed ^ (static_cast<std::uint64_t>(stream) << 56)) + a) + b);
}

/// Uniform in (0, 1].
inline double to_unit(std::uint64_t h) noexcept {
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal determined entirely by (seed, stream, a, b).
inline double normal(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t h = key(seed, stream, a, b);
    const double u1 = to_unit(h);
    const double u2 = to_unit(mix64(h ^ 0xd1b54a32d192ed03ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace gmfs::rng
