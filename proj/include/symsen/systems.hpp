#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symsen/oracle.hpp"

namespace symsen {

enum class SystemKind { Radic, Tent, Logistic, Rotation };
enum class StateSpace { UnitInterval, Circle };
enum class Metric { AbsoluteDifference, CircleDistance };

/// Lattice denominator for exact r-adic iteration: the first prime above 2^31
/// for which 2 (and 3) are primitive roots, so multiply-by-r orbits have
/// period ~2^31 and uniform lattice draws approximate Lebesgue within O(1/q).
/// (A Mersenne prime would be useless here: ord(2) mod 2^31-1 is only 31.)
inline constexpr std::int64_t kLatticePrime = 2147483659;

/// An interval/circle endomorphism together with its metric, invariant-measure
/// sampler and known theoretical flags.
struct SystemSpec {
    SystemKind kind{SystemKind::Tent};
    int radic_base{0};          // r >= 2, radic only
    double rotation_angle{0.0}; // theta in (0,1), rotation only
    StateSpace state_space{StateSpace::UnitInterval};
    Metric metric{Metric::AbsoluteDifference};
    bool known_weak_mixing{false};
    std::optional<double> known_entropy_bits;
    double known_diam_supp{1.0}; // extent of supp(mu) in [0,1] coordinates
    std::string id;
};

SystemSpec radic_system(int r);
SystemSpec tent_system();
SystemSpec logistic_system();
SystemSpec rotation_system(double theta);

/// Parses "radic:2", "tent", "logistic", "rotation:0.6180339887".
SystemSpec parse_system(std::string_view id);

/// A point of the state space; exact_form, when present, lets orbit code run
/// on exact rational arithmetic (r-adic lattice states).
struct StatePoint {
    double value{0.0};
    std::optional<RationalState> exact_form;

    static StatePoint from_value(double v) { return {v, std::nullopt}; }
    static StatePoint from_rational(RationalState r) { return {r.value(), r}; }
};

/// One application of T. Throws std::domain_error if x lies outside [0,1].
/// r-adic states carrying exact_form advance by exact modular arithmetic.
StatePoint evaluate(const SystemSpec& system, const StatePoint& x);

/// (x, Tx, ..., T^n x). Rotation iterates by the direct formula
/// frac(x + k*theta) rather than repeated addition.
std::vector<StatePoint> orbit(const SystemSpec& system, const StatePoint& x, std::size_t n);

double distance(Metric metric, double x, double y);

/// m independent draws from the invariant measure: Lebesgue for r-adic, tent
/// and rotation, the arcsine law for logistic (u -> sin^2(pi u/2)). r-adic
/// draws land on the lattice k/q, q = kLatticePrime, with exact_form set.
/// Draw i is a pure function of (seed, i).
std::vector<StatePoint> sample_measure(const SystemSpec& system, std::uint64_t seed, std::size_t m);

/// Single counter-based draw: `slot` distinguishes several draws inside one
/// stream (pair coordinates use slots 0 and 1).
StatePoint sample_point(const SystemSpec& system, std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t slot);

/// Maximum pairwise distance over a sample; max-min for the absolute metric,
/// exact antipode search over the sorted points for the circle metric.
double diam_supp_estimate(std::span<const double> samples, Metric metric);

/// Incremental orbit walker. Equivalent to indexing orbit() but without
/// materializing it; rotation advances by the direct formula.
class OrbitCursor {
  public:
    OrbitCursor(const SystemSpec& system, StatePoint start);
    double value() const { return value_; }
    void advance();

  private:
    const SystemSpec* system_;
    double start_;
    std::uint64_t step_{0};
    double value_;
    std::optional<RationalState> exact_;
};

}  // namespace symsen
