#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace symsen {

struct SystemSpec;

/// Exact rational state in [0,1], kept in lowest terms.
struct RationalState {
    std::int64_t num{0};
    std::int64_t den{1};

    /// Validates 0 <= n <= d, d > 0, and reduces.
    static RationalState make(std::int64_t n, std::int64_t d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const RationalState&) const = default;
};

/// Exact orbit (x, Tx, ..., T^n x) under rational arithmetic. Only the r-adic
/// and tent maps are supported (the irrational data of logistic/rotation rule
/// them out). Denominators never grow, so one up-front width check suffices:
/// den and r*den must fit in 63 bits or an overflow error is thrown rather
/// than silently wrapping.
std::vector<RationalState> exact_orbit(const SystemSpec& system, RationalState x, std::size_t n);

/// One exact step; same support and overflow contract as exact_orbit.
RationalState exact_step(const SystemSpec& system, RationalState x);

/// Exact cylinder-set measure of a word over the canonical r-cell partition
/// {[i/r,(i+1)/r)} of the r-adic map. Symbols are digits 0..r-1; a word of
/// length n has measure r^-n (full r-shift). Throws on out-of-range symbols
/// or when r^n overflows the 63-bit width.
RationalState exact_word_measure(const SystemSpec& system, std::span<const int> word);

}  // namespace symsen
