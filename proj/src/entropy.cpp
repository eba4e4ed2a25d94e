#include "symsen/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "symsen/rng.hpp"
#include "symsen/stats.hpp"

namespace symsen {

namespace {

double arcsine_cdf(double x) {
    return 2.0 / std::numbers::pi * std::asin(std::sqrt(std::clamp(x, 0.0, 1.0)));
}

}  // namespace

IntervalPartition::IntervalPartition(std::vector<double> interior_breakpoints) {
    for (const double b : interior_breakpoints)
        if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("partition: breakpoints must lie in (0,1)");
    if (!std::is_sorted(interior_breakpoints.begin(), interior_breakpoints.end()) ||
        std::adjacent_find(interior_breakpoints.begin(), interior_breakpoints.end()) !=
            interior_breakpoints.end())
        throw std::invalid_argument("partition: breakpoints must be strictly increasing");
    endpoints_.reserve(interior_breakpoints.size() + 2);
    endpoints_.push_back(0.0);
    endpoints_.insert(endpoints_.end(), interior_breakpoints.begin(), interior_breakpoints.end());
    endpoints_.push_back(1.0);
}

std::pair<double, double> IntervalPartition::cell(std::size_t label) const {
    if (label < 1 || label > cell_count()) throw std::out_of_range("partition: cell label out of range");
    return {endpoints_[label - 1], endpoints_[label]};
}

int IntervalPartition::locate(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("partition: point outside [0,1]");
    const auto it = std::upper_bound(endpoints_.begin() + 1, endpoints_.end() - 1, x);
    return static_cast<int>(it - endpoints_.begin());
}

InvariantDensity invariant_density(const SystemSpec& system) {
    return system.kind == SystemKind::Logistic ? InvariantDensity::Arcsine : InvariantDensity::Lebesgue;
}

double measure_of_interval(InvariantDensity density, double a, double b) {
    if (b <= a) return 0.0;
    switch (density) {
        case InvariantDensity::Lebesgue: return b - a;
        case InvariantDensity::Arcsine: return arcsine_cdf(b) - arcsine_cdf(a);
    }
    throw std::logic_error("unreachable");
}

std::vector<double> cell_measures(const IntervalPartition& partition, InvariantDensity density) {
    std::vector<double> out;
    out.reserve(partition.cell_count());
    for (std::size_t i = 1; i <= partition.cell_count(); ++i) {
        const auto [a, b] = partition.cell(i);
        out.push_back(measure_of_interval(density, a, b));
    }
    return out;
}

std::vector<int> encode_orbit(const SystemSpec& system, const IntervalPartition& partition,
                              const StatePoint& x, std::size_t n) {
    std::vector<int> labels;
    labels.reserve(n + 1);
    OrbitCursor cursor(system, x);
    labels.push_back(partition.locate(cursor.value()));
    for (std::size_t k = 0; k < n; ++k) {
        cursor.advance();
        labels.push_back(partition.locate(cursor.value()));
    }
    return labels;
}

std::string render_word(std::span<const int> labels) {
    bool wide = false;
    for (const int l : labels) wide |= l > 9;
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (wide && i > 0) out += '-';
        out += std::to_string(labels[i]);
    }
    return out;
}

double entropy_bits(std::span<const double> probabilities) {
    double h = 0.0;
    for (const double p : probabilities) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("entropy: probability outside [0,1]");
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

BlockEntropyCurve block_entropy(const SystemSpec& system, const IntervalPartition& partition,
                                std::size_t n_max, std::size_t orbits, std::uint64_t seed,
                                std::size_t windows, unsigned workers) {
    if (n_max < 1) throw std::invalid_argument("nmax: must be >= 1");
    if (orbits < 1) throw std::invalid_argument("orbits: must be >= 1");
    if (windows < 1) throw std::invalid_argument("windows: must be >= 1");

    const std::size_t symbols = n_max + windows - 1;
    using CountMap = std::map<std::string, std::uint64_t>;  // raw label bytes -> count

    const std::size_t nw = std::max<unsigned>(workers, 1);
    const std::size_t chunk = (orbits + nw - 1) / nw;
    std::vector<std::vector<CountMap>> partial(nw, std::vector<CountMap>(n_max + 1));
    std::vector<CountMap> full_words(nw);  // degenerate-sample detection

    auto run_chunk = [&](std::size_t w, std::size_t begin, std::size_t end) {
        std::string syms(symbols, '\0');
        for (std::size_t i = begin; i < end; ++i) {
            OrbitCursor cursor(system, sample_point(system, seed, i, 0));
            for (std::size_t t = 0; t < symbols; ++t) {
                syms[t] = static_cast<char>(partition.locate(cursor.value()));
                if (t + 1 < symbols) cursor.advance();
            }
            ++full_words[w][syms];
            for (std::size_t start = 0; start < windows; ++start)
                for (std::size_t n = 1; n <= n_max; ++n) ++partial[w][n][syms.substr(start, n)];
        }
    };
    if (nw <= 1) {
        run_chunk(0, 0, orbits);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < nw; ++w) {
            const std::size_t b = w * chunk, e = std::min(orbits, b + chunk);
            if (b >= e) break;
            pool.emplace_back(run_chunk, w, b, e);
        }
        for (auto& t : pool) t.join();
    }
    // Count merging is plain addition over sorted keys: order-independent.
    std::vector<CountMap> counts(n_max + 1);
    CountMap distinct_orbits;
    for (std::size_t w = 0; w < nw; ++w) {
        for (std::size_t n = 1; n <= n_max; ++n)
            for (const auto& [word, c] : partial[w][n]) counts[n][word] += c;
        for (const auto& [word, c] : full_words[w]) distinct_orbits[word] += c;
    }

    BlockEntropyCurve curve;
    curve.orbit_count = orbits;
    curve.windows = windows;
    curve.sample_size = orbits * windows;
    curve.degenerate = orbits > 1 && distinct_orbits.size() == 1;

    const double total = static_cast<double>(curve.sample_size);
    const double unreliable_below = 1.0 / (10.0 * static_cast<double>(orbits));
    for (std::size_t n = 1; n <= n_max; ++n) {
        double h = 0.0;
        std::size_t unreliable = 0;
        for (const auto& [word, c] : counts[n]) {
            const double p = static_cast<double>(c) / total;
            h -= p * std::log2(p);
            if (p < unreliable_below) ++unreliable;
        }
        curve.lengths.push_back(n);
        curve.block_entropy_bits.push_back(h);
        curve.distinct_words.push_back(counts[n].size());
        curve.unreliable_words.push_back(unreliable);
    }

    const double h_last = curve.block_entropy_bits.back();
    const double h_prev = n_max >= 2 ? curve.block_entropy_bits[n_max - 2] : 0.0;
    curve.rate_diff_bits = std::max(0.0, h_last - h_prev);
    curve.rate_per_symbol_bits = h_last / static_cast<double>(n_max);
    if (n_max >= 2) {
        std::vector<double> xs(curve.lengths.size());
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(curve.lengths[i]);
        curve.rate_slope_bits = ls_slope(xs, curve.block_entropy_bits);
    } else {
        curve.rate_slope_bits = h_last;
    }

    const double l = static_cast<double>(partition.cell_count());
    curve.coverage_reliable =
        static_cast<double>(n_max) * std::log2(l) <= std::log2(total / 10.0);

    for (const auto& [word, c] : counts[n_max]) {
        std::vector<int> labels(word.begin(), word.end());
        curve.word_counts.emplace(render_word(labels), c);
    }
    return curve;
}

double internal_boundary_measure(const IntervalPartition& partition, std::size_t cell_label,
                                 double epsilon, InvariantDensity density) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon: must be positive");
    const auto [a, b] = partition.cell(cell_label);
    const bool left = a > 0.0;   // complement exists to the left
    const bool right = b < 1.0;  // and to the right
    if (!left && !right) return 0.0;
    const double left_hi = left ? std::min(a + epsilon, b) : a;
    const double right_lo = right ? std::max(b - epsilon, a) : b;
    if (left && right && left_hi >= right_lo) return measure_of_interval(density, a, b);
    return measure_of_interval(density, a, left_hi) + measure_of_interval(density, right_lo, b);
}

McEstimate internal_boundary_measure_mc(const IntervalPartition& partition, std::size_t cell_label,
                                        double epsilon, InvariantDensity density,
                                        std::size_t samples, std::uint64_t seed) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon: must be positive");
    if (samples == 0) throw std::invalid_argument("samples: must be >= 1");
    const auto [a, b] = partition.cell(cell_label);
    const bool left = a > 0.0;
    const bool right = b < 1.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        double x = counter_unit(seed, i, 0);
        if (density == InvariantDensity::Arcsine) {
            const double s = std::sin(std::numbers::pi * x / 2.0);
            x = s * s;
        }
        if (x < a || x >= b) continue;
        double dist_to_complement = std::numeric_limits<double>::infinity();
        if (left) dist_to_complement = std::min(dist_to_complement, x - a);
        if (right) dist_to_complement = std::min(dist_to_complement, b - x);
        if (dist_to_complement < epsilon) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {p, binomial_half_width(p, samples)};
}

double k_epsilon(const IntervalPartition& partition, double epsilon, InvariantDensity density) {
    const double l = static_cast<double>(partition.cell_count());
    double boundary_total = 0.0;
    for (std::size_t i = 1; i <= partition.cell_count(); ++i)
        boundary_total += internal_boundary_measure(partition, i, epsilon, density);
    return std::exp(2.0 * l * boundary_total);
}

Certificate certificate_delta(const IntervalPartition& partition, double h_bits,
                              InvariantDensity density) {
    if (h_bits < 0.0) throw std::invalid_argument("entropy: must be nonnegative");
    Certificate cert;
    cert.entropy_used_bits = h_bits;
    if (h_bits == 0.0) return cert;  // K_delta >= 1 and 2^0 = 1: unsatisfiable

    const auto criterion = [&](double delta) {
        return k_epsilon(partition, delta, density) * std::exp2(-h_bits / 2.0);
    };
    double lo = 0.0, hi = 1.0;
    if (criterion(hi) < 1.0) {
        cert.delta_star = hi;
        cert.k_delta = k_epsilon(partition, hi, density);
        return cert;
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (criterion(mid) < 1.0 ? lo : hi) = mid;
    }
    if (lo > 0.0) {
        cert.delta_star = lo;
        cert.k_delta = k_epsilon(partition, lo, density);
    }
    return cert;
}

bool IntervalUnion::contains(double x) const {
    for (const auto& [lo, hi] : parts)
        if (x >= lo && x < hi) return true;
    return false;
}

double visit_frequency(const SystemSpec& system, const StatePoint& x, const IntervalUnion& target,
                       std::size_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon: must be >= 1");
    OrbitCursor cursor(system, x);
    std::size_t hits = target.contains(cursor.value()) ? 1 : 0;
    for (std::size_t k = 0; k < horizon; ++k) {
        cursor.advance();
        if (target.contains(cursor.value())) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(horizon + 1);
}

EquipartitionReport equipartition_classify(const std::map<std::string, double>& word_measures,
                                           std::size_t n, double h_bits, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon: must be positive");
    if (h_bits > 0.0 && epsilon >= h_bits)
        throw std::invalid_argument("epsilon: must lie in (0, h) for positive entropy");
    double mass = 0.0;
    for (const auto& [word, p] : word_measures) {
        if (p < 0.0) throw std::invalid_argument("word measure: negative probability");
        mass += p;
    }
    if (mass > 1.0 + 1e-9) throw std::invalid_argument("word measure: probabilities sum above 1");

    EquipartitionReport rep;
    rep.word_length = n;
    rep.epsilon = epsilon;
    const double threshold = std::exp2(-static_cast<double>(n) * (h_bits - epsilon));
    for (const auto& [word, p] : word_measures) {
        if (p <= threshold) {
            rep.good_words.push_back(word);
        } else {
            rep.bad_words.push_back(word);
            rep.bad_mass += p;
        }
    }
    return rep;
}

}  // namespace symsen
