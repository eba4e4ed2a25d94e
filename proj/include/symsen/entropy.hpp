#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symsen/systems.hpp"

namespace symsen {

/// Finite partition of [0,1] into l half-open interval cells [a_i, a_{i+1})
/// (last cell closed), labelled 1..l. A finite boundary set makes every cell
/// a continuity set of the non-atomic built-in measures.
class IntervalPartition {
  public:
    /// Breakpoints must be strictly increasing inside (0,1); an empty list
    /// gives the trivial one-cell partition.
    explicit IntervalPartition(std::vector<double> interior_breakpoints);

    std::size_t cell_count() const { return endpoints_.size() - 1; }
    const std::vector<double>& endpoints() const { return endpoints_; }
    /// [a,b) of the 1-based cell label (last cell is [a,1]).
    std::pair<double, double> cell(std::size_t label) const;
    /// 1-based label of the cell containing x in [0,1].
    int locate(double x) const;

  private:
    std::vector<double> endpoints_;
};

enum class InvariantDensity { Lebesgue, Arcsine };

InvariantDensity invariant_density(const SystemSpec& system);
double measure_of_interval(InvariantDensity density, double a, double b);
std::vector<double> cell_measures(const IntervalPartition& partition, InvariantDensity density);

/// Labels (i_0,...,i_n) with T^k x in cell i_k.
std::vector<int> encode_orbit(const SystemSpec& system, const IntervalPartition& partition,
                              const StatePoint& x, std::size_t n);

/// Block entropies H_n of the symbolic coding and the derived entropy rate,
/// all in bits. Each sampled orbit contributes `windows` sliding word windows
/// per length; length-n counts are exactly the prefix marginals of the
/// length-(n+1) counts, so H_n is non-decreasing in n by construction.
struct BlockEntropyCurve {
    std::vector<std::size_t> lengths;           // 1..n_max
    std::vector<double> block_entropy_bits;     // H_n
    std::vector<std::size_t> distinct_words;
    std::vector<std::size_t> unreliable_words;  // p_hat < 1/(10*orbits)
    double rate_diff_bits{0.0};                 // H_{n_max} - H_{n_max-1} (headline)
    double rate_slope_bits{0.0};                // least-squares slope of H_n on n
    double rate_per_symbol_bits{0.0};           // H_{n_max}/n_max
    std::size_t sample_size{0};                 // word samples per length
    std::size_t orbit_count{0};
    std::size_t windows{0};
    bool coverage_reliable{true};               // l^{n_max} small vs sample_size
    bool degenerate{false};                     // all orbits produced one word
    /// Word-frequency table at n_max (rendered label strings, sorted).
    std::map<std::string, std::uint64_t> word_counts;
};

BlockEntropyCurve block_entropy(const SystemSpec& system, const IntervalPartition& partition,
                                std::size_t n_max, std::size_t orbits, std::uint64_t seed,
                                std::size_t windows = 64, unsigned workers = 1);

/// Plugin entropy -sum p log2 p of a (sub-)probability vector; zeros skipped.
double entropy_bits(std::span<const double> probabilities);

/// mu(P_i^-eps): the part of cell i within eps of the cell's complement,
/// in closed form from the interval geometry of [0,1]. Edges at 0 and 1 touch
/// no complement and contribute nothing.
double internal_boundary_measure(const IntervalPartition& partition, std::size_t cell_label,
                                 double epsilon, InvariantDensity density);

/// Monte-Carlo cross-check of the closed form, with its 3-sigma half-width.
struct McEstimate {
    double probability{0.0};
    double half_width{0.0};
};
McEstimate internal_boundary_measure_mc(const IntervalPartition& partition, std::size_t cell_label,
                                        double epsilon, InvariantDensity density,
                                        std::size_t samples, std::uint64_t seed);

/// exp(2l * sum_i mu(P_i^-eps)); tends to 1 as eps -> 0.
double k_epsilon(const IntervalPartition& partition, double epsilon, InvariantDensity density);

/// A certified sensitivity level: the largest delta with
/// K_delta * 2^(-h/2) < 1, found by bisection (1e-12 absolute tolerance,
/// returning the bracket's satisfying end). Absent when h = 0, since
/// K_delta >= 1 makes the criterion unsatisfiable.
struct Certificate {
    std::optional<double> delta_star;
    double k_delta{0.0};  // K at delta_star, when present
    double entropy_used_bits{0.0};
};

Certificate certificate_delta(const IntervalPartition& partition, double h_bits,
                              InvariantDensity density);

struct IntervalUnion {
    std::vector<std::pair<double, double>> parts;  // half-open [lo, hi)
    bool contains(double x) const;
};

/// Fraction of k in {0..horizon} with T^k x in the target; converges to the
/// invariant measure of the target for the ergodic built-ins.
double visit_frequency(const SystemSpec& system, const StatePoint& x, const IntervalUnion& target,
                       std::size_t horizon);

/// Equipartition split of a word distribution: good words have measure
/// <= 2^(-n(h-eps)), bad words carry the remaining mass.
struct EquipartitionReport {
    std::size_t word_length{0};
    std::vector<std::string> good_words;
    std::vector<std::string> bad_words;
    double bad_mass{0.0};
    double epsilon{0.0};
};

EquipartitionReport equipartition_classify(const std::map<std::string, double>& word_measures,
                                           std::size_t n, double h_bits, double epsilon);

/// Rendered form of a label word: plain digits for l <= 9 ("1212"),
/// dash-separated otherwise.
std::string render_word(std::span<const int> labels);

}  // namespace symsen
