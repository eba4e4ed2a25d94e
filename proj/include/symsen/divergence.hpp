#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "symsen/systems.hpp"

namespace symsen {

/// Orbit-distance statistics of one sampled pair (x,y) up to the horizon.
/// first_exceed / exceed_count refer to the probe delta.
struct DivergenceRecord {
    double x{0.0};
    double y{0.0};
    double sup_distance{0.0};
    std::optional<std::size_t> first_exceed;
    std::size_t exceed_count{0};
};

struct TrapEstimate {
    double probability{0.0};
    double half_width{0.0};  // 3-sigma binomial
};

struct ExceedStats {
    std::size_t exceed_count{0};
    std::optional<std::size_t> first_exceed;
};

/// max over 0 <= n <= horizon of d(T^n x, T^n y).
double sup_divergence(const SystemSpec& system, const StatePoint& x, const StatePoint& y,
                      std::size_t horizon);

/// Counts n <= horizon with d(T^n x, T^n y) >= delta and the first such n.
ExceedStats exceed_statistics(const SystemSpec& system, const StatePoint& x, const StatePoint& y,
                              double delta, std::size_t horizon);

/// Monte-Carlo estimate of the measure of pairs whose orbit distance stays
/// below delta at every n <= horizon. Pair i draws its coordinates from the
/// counter-based stream (seed, i), so the result is identical for any worker
/// count. Non-increasing in horizon and non-decreasing in delta by
/// construction.
TrapEstimate trap_probability(const SystemSpec& system, double delta, std::size_t horizon,
                              std::size_t pairs, std::uint64_t seed, unsigned workers = 1);

/// Empirical quantile of the sup-distance values (quantile 0 = minimum),
/// a finite-sample lower-bound proxy for the largest sensitivity constant.
double delta_hat(std::span<const DivergenceRecord> records, double quantile);

/// Maximum distance observed across sampled pairs; approaches diam(supp mu).
double a_mu_estimate(std::span<const std::pair<double, double>> pairs, Metric metric);

/// One scan over a pair sample, retaining everything the section-2 estimators
/// need: per-pair probe statistics plus, for every grid delta, the first time
/// the orbit distance reached it (kNeverExceeded when it never did).
struct PairStudy {
    static constexpr std::uint32_t kNeverExceeded = std::numeric_limits<std::uint32_t>::max();

    std::vector<double> delta_grid;
    double probe_delta{0.0};
    std::size_t horizon{0};
    std::uint64_t seed{0};
    std::vector<DivergenceRecord> records;
    // first_exceed_by_delta[g][i]: first n with d >= delta_grid[g] for pair i.
    std::vector<std::vector<std::uint32_t>> first_exceed_by_delta;
    // exceed_count_by_delta[g][i]: number of n <= horizon with d >= delta_grid[g].
    std::vector<std::vector<std::uint32_t>> exceed_count_by_delta;

    /// Trapped fraction at sub-horizon h for grid point g, derived from the
    /// recorded first-exceed times; monotone in both arguments.
    TrapEstimate trap_at(std::size_t g, std::size_t h) const;
};

PairStudy run_pair_study(const SystemSpec& system, std::vector<double> delta_grid, double probe_delta,
                         std::size_t horizon, std::size_t pairs, std::uint64_t seed,
                         unsigned workers = 1);

/// Aggregate report of one sensitivity run.
struct SensitivityReport {
    std::vector<double> delta_grid;
    std::vector<TrapEstimate> trap;
    std::vector<bool> sensitive_at_level;  // trap + half-width below threshold
    std::vector<std::size_t> horizon_checkpoints;
    std::vector<std::vector<double>> trap_vs_horizon;  // [grid][checkpoint]
    double delta_hat_value{0.0};
    double delta_hat_quantile{0.0};
    double delta_min{0.0};
    double a_mu_hat{0.0};
    double diam_supp_hat{0.0};  // max over every pairwise distance observed
    double probe_delta{0.0};
    double trap_threshold{0.0};
    std::size_t horizon{0};
    std::size_t pair_count{0};
    std::uint64_t seed{0};
};

/// Builds the aggregate report from an existing study (the study keeps the
/// per-pair records for CSV export).
SensitivityReport summarize(const SystemSpec& system, const PairStudy& study, double quantile,
                            double trap_threshold);

SensitivityReport sensitivity_report(const SystemSpec& system, std::vector<double> delta_grid,
                                     double probe_delta, std::size_t horizon, std::size_t pairs,
                                     std::uint64_t seed, double quantile, double trap_threshold,
                                     unsigned workers = 1);

}  // namespace symsen
