#pragma once

#include <cstdint>

namespace symsen {

/// Default seed for every command; fixed (never time-based) so accidental
/// non-reproducibility is impossible.
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// SplitMix64 finalizer (Steele/Lea/Flood mixing constants).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream: value `ctr` of stream `stream` under `seed`.
/// Stateless and random-access, so work distributed over any number of
/// threads produces identical draws as long as (stream, ctr) assignment is
/// fixed. Stream keys are whitened independently of the counter so that
/// neighbouring streams are uncorrelated.
inline std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr) {
    const std::uint64_t key = mix64(seed ^ mix64(stream ^ 0x6a09e667f3bcc909ULL));
    return mix64(key + ctr * 0x9e3779b97f4a7c15ULL);
}

/// Uniform double in [0,1) from the 53 high bits.
inline double counter_unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr) {
    return static_cast<double>(counter_u64(seed, stream, ctr) >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by bounded rejection; draw `slot` of the
/// stream owns counters [64*slot, 64*slot+63] so rejection retries never
/// collide with other draws.
inline std::uint64_t counter_below(std::uint64_t seed, std::uint64_t stream, std::uint64_t slot,
                                   std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        const std::uint64_t r = counter_u64(seed, stream, slot * 64 + attempt);
        if (r < limit) return r % bound;
    }
    // Unreachable for bound << 2^64 (reject probability ~ bound/2^64 per try).
    return counter_u64(seed, stream, slot * 64 + 63) % bound;
}

}  // namespace symsen
