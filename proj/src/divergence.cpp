#include "symsen/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "symsen/rng.hpp"
#include "symsen/stats.hpp"

namespace symsen {

namespace {

/// Runs fn(begin, end) over a static partition of [0, total).
void parallel_chunks(std::size_t total, unsigned workers, const auto& fn) {
    if (workers <= 1 || total < 2) {
        fn(std::size_t{0}, total);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(workers, total);
    const std::size_t chunk = (total + nw - 1) / nw;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t b = w * chunk, e = std::min(total, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

struct PairScan {
    DivergenceRecord record;
    std::vector<std::uint32_t> first_exceed;   // per grid delta
    std::vector<std::uint32_t> exceed_count;   // per grid delta
};

/// Walks both orbits once; grid must be ascending. Per-step work beyond the
/// map evaluations is a binary search over the grid.
PairScan scan_pair(const SystemSpec& system, const StatePoint& x, const StatePoint& y,
                   std::span<const double> grid, double probe, std::size_t horizon) {
    PairScan out;
    out.record.x = x.value;
    out.record.y = y.value;
    out.first_exceed.assign(grid.size(), PairStudy::kNeverExceeded);
    // hist[k]: steps whose distance reached exactly the first k grid deltas.
    std::vector<std::uint32_t> hist(grid.size() + 1, 0);

    OrbitCursor cx(system, x), cy(system, y);
    std::size_t grid_reached = 0;  // deltas [0, grid_reached) already exceeded
    for (std::size_t n = 0;; ++n) {
        const double d = distance(system.metric, cx.value(), cy.value());
        out.record.sup_distance = std::max(out.record.sup_distance, d);
        while (grid_reached < grid.size() && d >= grid[grid_reached]) {
            out.first_exceed[grid_reached] = static_cast<std::uint32_t>(n);
            ++grid_reached;
        }
        if (!grid.empty()) {
            const auto reached = std::upper_bound(grid.begin(), grid.end(), d) - grid.begin();
            ++hist[static_cast<std::size_t>(reached)];
        }
        if (d >= probe) {
            if (!out.record.first_exceed) out.record.first_exceed = n;
            ++out.record.exceed_count;
        }
        if (n == horizon) break;
        cx.advance();
        cy.advance();
    }
    // count for grid delta g = steps reaching at least g+1 deltas.
    out.exceed_count.assign(grid.size(), 0);
    std::uint32_t suffix = 0;
    for (std::size_t g = grid.size(); g-- > 0;) {
        suffix += hist[g + 1];
        out.exceed_count[g] = suffix;
    }
    return out;
}

}  // namespace

double sup_divergence(const SystemSpec& system, const StatePoint& x, const StatePoint& y,
                      std::size_t horizon) {
    OrbitCursor cx(system, x), cy(system, y);
    double sup = distance(system.metric, cx.value(), cy.value());
    for (std::size_t n = 0; n < horizon; ++n) {
        cx.advance();
        cy.advance();
        sup = std::max(sup, distance(system.metric, cx.value(), cy.value()));
    }
    return sup;
}

ExceedStats exceed_statistics(const SystemSpec& system, const StatePoint& x, const StatePoint& y,
                              double delta, std::size_t horizon) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta: must be positive");
    const PairScan scan = scan_pair(system, x, y, {}, delta, horizon);
    return {scan.record.exceed_count, scan.record.first_exceed};
}

PairStudy run_pair_study(const SystemSpec& system, std::vector<double> delta_grid, double probe_delta,
                         std::size_t horizon, std::size_t pairs, std::uint64_t seed,
                         unsigned workers) {
    if (pairs == 0) throw std::invalid_argument("pairs: must be >= 1");
    if (!(probe_delta > 0.0)) throw std::invalid_argument("delta: must be positive");
    if (!std::is_sorted(delta_grid.begin(), delta_grid.end()) ||
        std::adjacent_find(delta_grid.begin(), delta_grid.end()) != delta_grid.end())
        throw std::invalid_argument("delta-grid: must be strictly increasing");
    if (!delta_grid.empty() && !(delta_grid.front() > 0.0))
        throw std::invalid_argument("delta-grid: deltas must be positive");

    PairStudy study;
    study.delta_grid = std::move(delta_grid);
    study.probe_delta = probe_delta;
    study.horizon = horizon;
    study.seed = seed;
    study.records.resize(pairs);
    study.first_exceed_by_delta.assign(study.delta_grid.size(),
                                       std::vector<std::uint32_t>(pairs, PairStudy::kNeverExceeded));
    study.exceed_count_by_delta.assign(study.delta_grid.size(),
                                       std::vector<std::uint32_t>(pairs, 0));

    parallel_chunks(pairs, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const StatePoint x = sample_point(system, seed, i, 0);
            const StatePoint y = sample_point(system, seed, i, 1);
            PairScan scan = scan_pair(system, x, y, study.delta_grid, probe_delta, horizon);
            study.records[i] = scan.record;
            for (std::size_t g = 0; g < study.delta_grid.size(); ++g) {
                study.first_exceed_by_delta[g][i] = scan.first_exceed[g];
                study.exceed_count_by_delta[g][i] = scan.exceed_count[g];
            }
        }
    });
    return study;
}

TrapEstimate PairStudy::trap_at(std::size_t g, std::size_t h) const {
    const auto& first = first_exceed_by_delta.at(g);
    std::size_t trapped = 0;
    for (const std::uint32_t f : first)
        if (f == kNeverExceeded || f > h) ++trapped;
    const double p = static_cast<double>(trapped) / static_cast<double>(first.size());
    return {p, binomial_half_width(p, first.size())};
}

TrapEstimate trap_probability(const SystemSpec& system, double delta, std::size_t horizon,
                              std::size_t pairs, std::uint64_t seed, unsigned workers) {
    const PairStudy study = run_pair_study(system, {delta}, delta, horizon, pairs, seed, workers);
    return study.trap_at(0, horizon);
}

double delta_hat(std::span<const DivergenceRecord> records, double quantile) {
    if (records.empty()) throw std::invalid_argument("delta_hat: empty records");
    std::vector<double> sups;
    sups.reserve(records.size());
    for (const auto& r : records) sups.push_back(r.sup_distance);
    std::sort(sups.begin(), sups.end());
    return quantile_sorted(sups, quantile);
}

double a_mu_estimate(std::span<const std::pair<double, double>> pairs, Metric metric) {
    if (pairs.empty()) throw std::invalid_argument("a_mu_estimate: empty sample");
    double best = 0.0;
    for (const auto& [x, y] : pairs) best = std::max(best, distance(metric, x, y));
    return best;
}

SensitivityReport summarize(const SystemSpec& system, const PairStudy& study, double quantile,
                            double trap_threshold) {
    const std::size_t horizon = study.horizon;
    const std::size_t pairs = study.records.size();
    const std::uint64_t seed = study.seed;

    SensitivityReport rep;
    rep.delta_grid = study.delta_grid;
    rep.probe_delta = study.probe_delta;
    rep.trap_threshold = trap_threshold;
    rep.horizon = horizon;
    rep.pair_count = pairs;
    rep.seed = seed;

    // Decay curve checkpoints, log-spaced, always ending at the horizon.
    for (std::size_t h : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{5},
                          std::size_t{10}, std::size_t{20}, std::size_t{50}, std::size_t{100},
                          std::size_t{200}, std::size_t{500}, std::size_t{1000}, std::size_t{2000},
                          std::size_t{5000}, std::size_t{10000}})
        if (h < horizon) rep.horizon_checkpoints.push_back(h);
    rep.horizon_checkpoints.push_back(horizon);

    for (std::size_t g = 0; g < rep.delta_grid.size(); ++g) {
        const TrapEstimate est = study.trap_at(g, horizon);
        rep.trap.push_back(est);
        rep.sensitive_at_level.push_back(est.probability + est.half_width < trap_threshold);
        std::vector<double> curve;
        curve.reserve(rep.horizon_checkpoints.size());
        for (const std::size_t h : rep.horizon_checkpoints) curve.push_back(study.trap_at(g, h).probability);
        rep.trap_vs_horizon.push_back(std::move(curve));
    }

    rep.delta_hat_quantile = quantile;
    rep.delta_hat_value = delta_hat(study.records, quantile);
    rep.delta_min = delta_hat(study.records, 0.0);

    std::vector<std::pair<double, double>> coords;
    coords.reserve(pairs);
    for (const auto& r : study.records) coords.emplace_back(r.x, r.y);
    rep.a_mu_hat = a_mu_estimate(coords, system.metric);
    // Every sup is itself an observed pairwise distance, so the empirical
    // diameter over everything we looked at dominates all of them.
    rep.diam_supp_hat = rep.a_mu_hat;
    for (const auto& r : study.records) rep.diam_supp_hat = std::max(rep.diam_supp_hat, r.sup_distance);
    return rep;
}

SensitivityReport sensitivity_report(const SystemSpec& system, std::vector<double> delta_grid,
                                     double probe_delta, std::size_t horizon, std::size_t pairs,
                                     std::uint64_t seed, double quantile, double trap_threshold,
                                     unsigned workers) {
    const PairStudy study =
        run_pair_study(system, std::move(delta_grid), probe_delta, horizon, pairs, seed, workers);
    return summarize(system, study, quantile, trap_threshold);
}

}  // namespace symsen
