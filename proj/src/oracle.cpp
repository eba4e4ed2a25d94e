#include "symsen/oracle.hpp"

#include <numeric>
#include <stdexcept>

#include "symsen/systems.hpp"

namespace symsen {

namespace {

constexpr std::int64_t kMaxWidth = std::int64_t{1} << 62;

RationalState reduced(std::int64_t num, std::int64_t den) {
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

void check_width(const SystemSpec& system, const RationalState& x) {
    const std::int64_t factor = system.kind == SystemKind::Radic ? system.radic_base : 2;
    if (x.den > kMaxWidth / factor)
        throw std::overflow_error("oracle: denominator too wide for exact iteration");
}

}  // namespace

RationalState RationalState::make(std::int64_t n, std::int64_t d) {
    if (d <= 0) throw std::invalid_argument("rational: denominator must be positive");
    if (n < 0 || n > d) throw std::invalid_argument("rational: numerator outside [0, den]");
    return reduced(n, d);
}

RationalState exact_step(const SystemSpec& system, RationalState x) {
    check_width(system, x);
    switch (system.kind) {
        case SystemKind::Radic:
            return reduced(system.radic_base * x.num % x.den, x.den);
        case SystemKind::Tent: {
            const std::int64_t doubled = 2 * x.num;
            return reduced(doubled <= x.den ? doubled : 2 * x.den - doubled, x.den);
        }
        default:
            throw std::invalid_argument("oracle: exact arithmetic supports radic and tent only");
    }
}

std::vector<RationalState> exact_orbit(const SystemSpec& system, RationalState x, std::size_t n) {
    std::vector<RationalState> out;
    out.reserve(n + 1);
    out.push_back(RationalState::make(x.num, x.den));
    for (std::size_t k = 0; k < n; ++k) out.push_back(exact_step(system, out.back()));
    return out;
}

RationalState exact_word_measure(const SystemSpec& system, std::span<const int> word) {
    if (system.kind != SystemKind::Radic)
        throw std::invalid_argument("oracle: word measures are defined for r-adic systems");
    const int r = system.radic_base;
    std::int64_t den = 1;
    for (const int s : word) {
        if (s < 0 || s >= r) throw std::out_of_range("oracle: word symbol outside 0..r-1");
        if (den > kMaxWidth / r) throw std::overflow_error("oracle: word too long for exact measure");
        den *= r;
    }
    return {1, den};
}

}  // namespace symsen
