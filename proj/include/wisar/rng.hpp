/**
 * @file rng.hpp
 * @brief Seeded random streams.
 *
 * Every stochastic component draws from its own `Rng` derived from a base seed
 * and a stream index, so results never depend on evaluation order.
 */

#pragma once

#include <cstdint>
#include <random>

namespace wisar {

using Rng = std::mt19937_64;

/// Stream tags for the independent draws a trial makes.
enum class StreamTag : std::uint64_t {
    terrain = 1,
    cloud = 2,
    target = 3,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of sub-stream `stream` of `base`.
constexpr std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t stream_seed(std::uint64_t base, StreamTag tag) {
    return stream_seed(base, static_cast<std::uint64_t>(tag));
}

inline Rng make_rng(std::uint64_t base, std::uint64_t stream) { return Rng{stream_seed(base, stream)}; }

/// Uniform double in [0, 1) using the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Fair coin from the top bit.
inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

/// Standard normal draw (Marsaglia polar method), independent of the
/// standard library's distribution implementation.
inline double standard_normal(Rng& rng) {
    for (;;) {
        const double u = 2.0 * uniform01(rng) - 1.0;
        const double v = 2.0 * uniform01(rng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

}  // namespace wisar
