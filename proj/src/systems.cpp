#include "symsen/systems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "symsen/rng.hpp"

namespace symsen {

namespace {

double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f -= 1.0;
    return f;
}

void check_state(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("state outside [0,1]");
}

double apply_map(const SystemSpec& system, double x) {
    switch (system.kind) {
        case SystemKind::Radic: return frac(static_cast<double>(system.radic_base) * x);
        case SystemKind::Tent: return 1.0 - std::abs(1.0 - 2.0 * x);
        // This parenthesization keeps the image inside [0,1]: x*(1-x) <= 1/4
        // rounds to at most 1/4 in double, so 4*(...) never exceeds 1.
        case SystemKind::Logistic: return 4.0 * (x * (1.0 - x));
        case SystemKind::Rotation: return frac(x + system.rotation_angle);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

SystemSpec radic_system(int r) {
    if (r < 2) throw std::invalid_argument("radic: base must be an integer >= 2");
    SystemSpec s;
    s.kind = SystemKind::Radic;
    s.radic_base = r;
    s.known_weak_mixing = true;
    s.known_entropy_bits = std::log2(static_cast<double>(r));
    s.id = "radic:" + std::to_string(r);
    return s;
}

SystemSpec tent_system() {
    SystemSpec s;
    s.kind = SystemKind::Tent;
    s.known_weak_mixing = true;
    s.known_entropy_bits = 1.0;
    s.id = "tent";
    return s;
}

SystemSpec logistic_system() {
    SystemSpec s;
    s.kind = SystemKind::Logistic;
    s.known_weak_mixing = true;
    s.known_entropy_bits = 1.0;
    s.id = "logistic";
    return s;
}

SystemSpec rotation_system(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("rotation: theta must lie in (0,1)");
    SystemSpec s;
    s.kind = SystemKind::Rotation;
    s.rotation_angle = theta;
    s.state_space = StateSpace::Circle;
    s.metric = Metric::CircleDistance;
    s.known_weak_mixing = false;
    s.known_entropy_bits = 0.0;
    s.id = "rotation:" + std::to_string(theta);
    return s;
}

SystemSpec parse_system(std::string_view id) {
    const auto colon = id.find(':');
    const std::string_view name = id.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);
    if (name == "tent") {
        if (!arg.empty()) throw std::invalid_argument("system: tent takes no parameter");
        return tent_system();
    }
    if (name == "logistic") {
        if (!arg.empty()) throw std::invalid_argument("system: logistic takes no parameter");
        return logistic_system();
    }
    if (name == "radic") {
        int r = 0;
        const auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), r);
        if (ec != std::errc{} || p != arg.data() + arg.size() || r < 2)
            throw std::invalid_argument("system: radic wants an integer base >= 2, e.g. radic:2");
        auto s = radic_system(r);
        s.id = std::string(id);
        return s;
    }
    if (name == "rotation") {
        double theta = 0.0;
        const auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), theta);
        if (ec != std::errc{} || p != arg.data() + arg.size() || !(theta > 0.0 && theta < 1.0))
            throw std::invalid_argument("system: rotation wants theta in (0,1), e.g. rotation:0.618");
        auto s = rotation_system(theta);
        s.id = std::string(id);
        return s;
    }
    throw std::invalid_argument("system: unknown id '" + std::string(id) + "'");
}

StatePoint evaluate(const SystemSpec& system, const StatePoint& x) {
    check_state(x.value);
    if (system.kind == SystemKind::Radic && x.exact_form) {
        const RationalState next = exact_step(system, *x.exact_form);
        return StatePoint::from_rational(next);
    }
    return StatePoint::from_value(apply_map(system, x.value));
}

std::vector<StatePoint> orbit(const SystemSpec& system, const StatePoint& x, std::size_t n) {
    check_state(x.value);
    std::vector<StatePoint> out;
    out.reserve(n + 1);
    out.push_back(x);
    if (system.kind == SystemKind::Rotation) {
        for (std::size_t k = 1; k <= n; ++k)
            out.push_back(StatePoint::from_value(frac(x.value + static_cast<double>(k) * system.rotation_angle)));
        return out;
    }
    for (std::size_t k = 0; k < n; ++k) out.push_back(evaluate(system, out.back()));
    return out;
}

double distance(Metric metric, double x, double y) {
    const double d = std::abs(x - y);
    return metric == Metric::CircleDistance ? std::min(d, 1.0 - d) : d;
}

StatePoint sample_point(const SystemSpec& system, std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t slot) {
    if (system.kind == SystemKind::Radic) {
        const auto k = static_cast<std::int64_t>(
            counter_below(seed, stream, slot, static_cast<std::uint64_t>(kLatticePrime)));
        return StatePoint::from_rational(RationalState::make(k, kLatticePrime));
    }
    const double u = counter_unit(seed, stream, slot * 64);
    if (system.kind == SystemKind::Logistic) {
        const double s = std::sin(std::numbers::pi * u / 2.0);
        return StatePoint::from_value(s * s);
    }
    return StatePoint::from_value(u);
}

std::vector<StatePoint> sample_measure(const SystemSpec& system, std::uint64_t seed, std::size_t m) {
    if (m == 0) throw std::invalid_argument("sample_measure: empty sample requested");
    std::vector<StatePoint> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(sample_point(system, seed, i, 0));
    return out;
}

double diam_supp_estimate(std::span<const double> samples, Metric metric) {
    if (samples.empty()) throw std::invalid_argument("diam_supp_estimate: empty sample");
    if (metric == Metric::AbsoluteDifference) {
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        return *hi - *lo;
    }
    // Circle metric: for each point the farthest sample sits next to its
    // antipode in circular order, so a sorted antipode search is exact.
    std::vector<double> pts(samples.begin(), samples.end());
    std::sort(pts.begin(), pts.end());
    const std::size_t n = pts.size();
    double best = 0.0;
    for (const double x : pts) {
        const double anti = frac(x + 0.5);
        const auto it = std::lower_bound(pts.begin(), pts.end(), anti);
        const std::size_t j = static_cast<std::size_t>(it - pts.begin());
        for (const std::size_t cand : {j % n, (j + n - 1) % n}) {
            best = std::max(best, distance(Metric::CircleDistance, x, pts[cand]));
        }
    }
    return best;
}

OrbitCursor::OrbitCursor(const SystemSpec& system, StatePoint start)
    : system_(&system), start_(start.value), value_(start.value), exact_(start.exact_form) {
    check_state(start.value);
    if (system.kind != SystemKind::Radic) exact_.reset();
}

void OrbitCursor::advance() {
    ++step_;
    switch (system_->kind) {
        case SystemKind::Rotation:
            value_ = frac(start_ + static_cast<double>(step_) * system_->rotation_angle);
            return;
        case SystemKind::Radic:
            if (exact_) {
                exact_ = exact_step(*system_, *exact_);
                value_ = exact_->value();
                return;
            }
            [[fallthrough]];
        default:
            value_ = apply_map(*system_, value_);
    }
}

}  // namespace symsen
