#include "symsen/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "symsen/divergence.hpp"
#include "symsen/entropy.hpp"
#include "symsen/oracle.hpp"
#include "symsen/stats.hpp"
#include "symsen/systems.hpp"

namespace symsen {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["system"] = cfg.system_id;
    j["command"] = to_string(cfg.command);
    j["pairs"] = cfg.pairs;
    j["orbits"] = cfg.orbits;
    j["horizon"] = cfg.horizon;
    j["nmax"] = cfg.n_max;
    j["windows"] = cfg.windows;
    j["workers"] = cfg.workers;
    j["delta_grid"] = cfg.delta_grid;
    j["probe_delta"] = cfg.probe_delta ? json(*cfg.probe_delta) : json(nullptr);
    j["partition"] = cfg.partition_breakpoints;
    j["quantile"] = cfg.quantile;
    j["trap_threshold"] = cfg.trap_threshold;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    j["format"] = to_string(cfg.format);
    return j;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.pairs < 1) throw std::invalid_argument("pairs: must be >= 1");
    if (cfg.orbits < 1) throw std::invalid_argument("orbits: must be >= 1");
    if (cfg.horizon < 1) throw std::invalid_argument("horizon: must be >= 1");
    if (cfg.n_max < 1) throw std::invalid_argument("nmax: must be >= 1");
    if (cfg.windows < 1) throw std::invalid_argument("windows: must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("workers: must be >= 1");
    if (!(cfg.quantile >= 0.0 && cfg.quantile <= 1.0))
        throw std::invalid_argument("quantile: must lie in [0,1]");
    if (!(cfg.trap_threshold > 0.0)) throw std::invalid_argument("trap-threshold: must be positive");
    if (cfg.probe_delta && !(*cfg.probe_delta > 0.0))
        throw std::invalid_argument("delta: must be positive");
    if (cfg.format == OutputFormat::Csv &&
        (cfg.command == Command::Certificate || cfg.command == Command::Selftest))
        throw std::invalid_argument("format: csv is not available for command " +
                                    to_string(cfg.command));
}

struct RunOutput {
    json results;
    std::string csv;  // empty when the command has no table projection
};

std::string records_csv(std::span<const DivergenceRecord> records) {
    std::ostringstream os;
    os << "x,y,sup_distance,first_exceed,exceed_count\n";
    for (const auto& r : records) {
        os << fmt17(r.x) << ',' << fmt17(r.y) << ',' << fmt17(r.sup_distance) << ',';
        if (r.first_exceed) os << *r.first_exceed;
        os << ',' << r.exceed_count << '\n';
    }
    return os.str();
}

json trap_estimate_json(const TrapEstimate& t) {
    return json{{"probability", t.probability}, {"half_width", t.half_width}};
}

RunOutput run_sensitivity(const SystemSpec& sys, const ExperimentConfig& cfg) {
    const std::vector<double> grid = parse_delta_grid(cfg.delta_grid);
    const double probe = cfg.probe_delta.value_or(grid.front());
    const PairStudy study =
        run_pair_study(sys, grid, probe, cfg.horizon, cfg.pairs, cfg.seed, cfg.workers);
    const SensitivityReport rep = summarize(sys, study, cfg.quantile, cfg.trap_threshold);

    json res;
    res["pair_count"] = rep.pair_count;
    res["horizon"] = rep.horizon;
    res["seed"] = rep.seed;
    res["probe_delta"] = rep.probe_delta;
    res["trap_threshold"] = rep.trap_threshold;
    res["delta_grid"] = rep.delta_grid;
    json curve = json::array();
    for (std::size_t g = 0; g < rep.delta_grid.size(); ++g) {
        json point = trap_estimate_json(rep.trap[g]);
        point["delta"] = rep.delta_grid[g];
        point["sensitive_at_level"] = static_cast<bool>(rep.sensitive_at_level[g]);
        curve.push_back(std::move(point));
    }
    res["trap_curve"] = std::move(curve);
    res["horizon_checkpoints"] = rep.horizon_checkpoints;
    res["trap_vs_horizon"] = rep.trap_vs_horizon;
    res["delta_hat"] = rep.delta_hat_value;
    res["delta_hat_quantile"] = rep.delta_hat_quantile;
    res["delta_min"] = rep.delta_min;
    res["a_mu_hat"] = rep.a_mu_hat;
    res["diam_supp_hat"] = rep.diam_supp_hat;
    return {std::move(res), records_csv(study.records)};
}

RunOutput run_recurrence(const SystemSpec& sys, const ExperimentConfig& cfg) {
    const std::vector<double> grid = parse_delta_grid(cfg.delta_grid);
    const double probe = cfg.probe_delta.value_or(grid.front());
    const PairStudy study =
        run_pair_study(sys, grid, probe, cfg.horizon, cfg.pairs, cfg.seed, cfg.workers);

    json res;
    res["pair_count"] = cfg.pairs;
    res["horizon"] = cfg.horizon;
    res["seed"] = cfg.seed;
    res["probe_delta"] = probe;
    res["delta_grid"] = grid;
    json per_delta = json::array();
    const double steps = static_cast<double>(cfg.horizon + 1);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double fraction_sum = 0.0;
        std::size_t with_exceed = 0;
        double first_sum = 0.0;
        for (std::size_t i = 0; i < cfg.pairs; ++i) {
            fraction_sum += static_cast<double>(study.exceed_count_by_delta[g][i]) / steps;
            const std::uint32_t f = study.first_exceed_by_delta[g][i];
            if (f != PairStudy::kNeverExceeded) {
                ++with_exceed;
                first_sum += static_cast<double>(f);
            }
        }
        json d;
        d["delta"] = grid[g];
        d["mean_exceed_fraction"] = fraction_sum / static_cast<double>(cfg.pairs);
        d["pairs_with_exceed"] = with_exceed;
        d["fraction_pairs_with_exceed"] =
            static_cast<double>(with_exceed) / static_cast<double>(cfg.pairs);
        d["mean_first_exceed"] =
            with_exceed > 0 ? json(first_sum / static_cast<double>(with_exceed)) : json(nullptr);
        per_delta.push_back(std::move(d));
    }
    res["per_delta"] = std::move(per_delta);
    return {std::move(res), records_csv(study.records)};
}

json curve_json(const BlockEntropyCurve& curve, const IntervalPartition& part,
                InvariantDensity density) {
    json res;
    res["partition"] = part.endpoints();
    res["cell_measures"] = cell_measures(part, density);
    res["density"] = density == InvariantDensity::Arcsine ? "arcsine" : "lebesgue";
    res["orbit_count"] = curve.orbit_count;
    res["windows"] = curve.windows;
    res["sample_size"] = curve.sample_size;
    res["lengths"] = curve.lengths;
    res["block_entropy_bits"] = curve.block_entropy_bits;
    res["distinct_words"] = curve.distinct_words;
    res["unreliable_words"] = curve.unreliable_words;
    res["rate_diff_bits"] = curve.rate_diff_bits;
    res["rate_slope_bits"] = curve.rate_slope_bits;
    res["rate_per_symbol_bits"] = curve.rate_per_symbol_bits;
    res["coverage_reliable"] = curve.coverage_reliable;
    res["degenerate"] = curve.degenerate;
    return res;
}

std::string word_csv(const BlockEntropyCurve& curve) {
    std::ostringstream os;
    os << "word,count,probability\n";
    for (const auto& [word, count] : curve.word_counts)
        os << word << ',' << count << ','
           << fmt17(static_cast<double>(count) / static_cast<double>(curve.sample_size)) << '\n';
    return os.str();
}

RunOutput run_entropy(const SystemSpec& sys, const ExperimentConfig& cfg) {
    const IntervalPartition part(cfg.partition_breakpoints);
    const BlockEntropyCurve curve =
        block_entropy(sys, part, cfg.n_max, cfg.orbits, cfg.seed, cfg.windows, cfg.workers);
    json res = curve_json(curve, part, invariant_density(sys));
    res["seed"] = cfg.seed;
    return {std::move(res), word_csv(curve)};
}

RunOutput run_certificate(const SystemSpec& sys, const ExperimentConfig& cfg) {
    const IntervalPartition part(cfg.partition_breakpoints);
    const InvariantDensity density = invariant_density(sys);
    const BlockEntropyCurve curve =
        block_entropy(sys, part, cfg.n_max, cfg.orbits, cfg.seed, cfg.windows, cfg.workers);
    const Certificate cert = certificate_delta(part, curve.rate_diff_bits, density);

    json res = curve_json(curve, part, density);
    res["seed"] = cfg.seed;
    json jc;
    jc["entropy_used_bits"] = cert.entropy_used_bits;
    jc["delta_star"] = cert.delta_star ? json(*cert.delta_star) : json(nullptr);
    jc["k_delta"] = cert.delta_star ? json(cert.k_delta) : json(nullptr);
    res["certificate"] = std::move(jc);
    return {std::move(res), ""};
}

RunOutput run_selftest_command() {
    json res;
    json checks = json::array();
    bool all = true;
    for (const auto& c : run_selftest()) {
        checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all &= c.pass;
    }
    res["checks"] = std::move(checks);
    res["all_pass"] = all;
    return {std::move(res), ""};
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Sensitivity: return "sensitivity";
        case Command::Entropy: return "entropy";
        case Command::Certificate: return "certificate";
        case Command::Recurrence: return "recurrence";
        case Command::Selftest: return "selftest";
    }
    throw std::logic_error("unreachable");
}

std::string to_string(OutputFormat f) {
    return f == OutputFormat::Json ? "json" : "csv";
}

std::vector<double> parse_delta_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0;
    long steps = 0;
    char tail = '\0';
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &start, &stop, &steps, &tail) != 3)
        throw std::invalid_argument("delta-grid: want start:stop:steps, got '" + spec + "'");
    if (!(start > 0.0)) throw std::invalid_argument("delta-grid: start must be positive");
    if (steps < 1) throw std::invalid_argument("delta-grid: steps must be >= 1");
    if (steps == 1) {
        if (stop != start) throw std::invalid_argument("delta-grid: single step wants stop == start");
        return {start};
    }
    if (!(stop > start)) throw std::invalid_argument("delta-grid: stop must exceed start");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps));
    for (long i = 0; i < steps; ++i)
        grid.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1));
    grid.back() = stop;
    return grid;
}

nlohmann::json run(const ExperimentConfig& config) {
    validate(config);
    const SystemSpec sys = parse_system(config.system_id);

    ExperimentConfig cfg = config;
    if (cfg.command == Command::Sensitivity || cfg.command == Command::Recurrence) {
        // resolve the probe default now so the echo below is complete
        cfg.probe_delta = cfg.probe_delta.value_or(parse_delta_grid(cfg.delta_grid).front());
    }

    RunOutput out;
    switch (cfg.command) {
        case Command::Sensitivity: out = run_sensitivity(sys, cfg); break;
        case Command::Recurrence: out = run_recurrence(sys, cfg); break;
        case Command::Entropy: out = run_entropy(sys, cfg); break;
        case Command::Certificate: out = run_certificate(sys, cfg); break;
        case Command::Selftest: out = run_selftest_command(); break;
    }

    json report;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["timestamp"] = iso_timestamp();
    report["config"] = config_json(cfg);
    report["results"] = std::move(out.results);

    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out);
        if (!file) throw std::runtime_error("out: cannot open '" + cfg.out + "' for writing");
        if (cfg.format == OutputFormat::Json) {
            file << report.dump(2) << '\n';
        } else {
            file << out.csv;
        }
        if (!file.good()) throw std::runtime_error("out: write to '" + cfg.out + "' failed");
    }
    return report;
}

bool replay_check(const nlohmann::json& report_a, const nlohmann::json& report_b) {
    if (!report_a.contains("config") || !report_a.contains("results") ||
        !report_b.contains("config") || !report_b.contains("results"))
        throw std::invalid_argument("replay: not a report (config/results missing)");
    json ca = report_a.at("config");
    json cb = report_b.at("config");
    // Output paths necessarily differ between two files, worker counts must
    // not affect results, and a seed difference is what the boolean result is
    // for; everything else has to match.
    for (const char* f : {"out", "workers", "seed"}) {
        ca.erase(f);
        cb.erase(f);
    }
    if (ca != cb) {
        for (const auto& [key, val] : ca.items())
            if (!cb.contains(key) || cb.at(key) != val)
                throw std::invalid_argument("replay: config mismatch on field '" + key + "'");
        throw std::invalid_argument("replay: config mismatch");
    }
    return report_a.at("results").dump() == report_b.at("results").dump();
}

std::string summarize_report(const nlohmann::json& report) {
    const auto& cfg = report.at("config");
    const auto& res = report.at("results");
    const std::string command = cfg.at("command");
    std::ostringstream os;
    os << kToolName << ' ' << command << " system=" << cfg.at("system").get<std::string>()
       << " seed=" << cfg.at("seed").get<std::uint64_t>() << '\n';
    if (command == "sensitivity") {
        os << "  pairs=" << res.at("pair_count").get<std::size_t>()
           << " horizon=" << res.at("horizon").get<std::size_t>()
           << " delta_hat(q=" << res.at("delta_hat_quantile").get<double>()
           << ")=" << res.at("delta_hat").get<double>()
           << " delta_min=" << res.at("delta_min").get<double>()
           << " a_mu_hat=" << res.at("a_mu_hat").get<double>() << '\n';
        for (const auto& p : res.at("trap_curve"))
            os << "  delta=" << p.at("delta").get<double>()
               << " trap=" << p.at("probability").get<double>() << " +-"
               << p.at("half_width").get<double>()
               << (p.at("sensitive_at_level").get<bool>() ? "  [sensitive at this level]" : "")
               << '\n';
    } else if (command == "recurrence") {
        for (const auto& d : res.at("per_delta"))
            os << "  delta=" << d.at("delta").get<double>()
               << " mean_exceed_fraction=" << d.at("mean_exceed_fraction").get<double>()
               << " pairs_with_exceed=" << d.at("pairs_with_exceed").get<std::size_t>() << '\n';
    } else if (command == "entropy" || command == "certificate") {
        const auto& h = res.at("block_entropy_bits");
        os << "  H_n (bits):";
        for (const auto& v : h) os << ' ' << v.get<double>();
        os << "\n  rate_diff=" << res.at("rate_diff_bits").get<double>()
           << " rate_slope=" << res.at("rate_slope_bits").get<double>()
           << " per_symbol=" << res.at("rate_per_symbol_bits").get<double>() << '\n';
        if (res.contains("certificate")) {
            const auto& c = res.at("certificate");
            if (c.at("delta_star").is_null())
                os << "  certificate: none (entropy estimate is zero)\n";
            else
                os << "  certificate: delta_star=" << c.at("delta_star").get<double>()
                   << " K_delta=" << c.at("k_delta").get<double>()
                   << " h=" << c.at("entropy_used_bits").get<double>() << " bits\n";
        }
    } else if (command == "selftest") {
        for (const auto& c : res.at("checks"))
            os << "  [" << (c.at("pass").get<bool>() ? "ok" : "FAIL") << "] "
               << c.at("name").get<std::string>() << ": " << c.at("detail").get<std::string>()
               << '\n';
        os << "  all_pass=" << (res.at("all_pass").get<bool>() ? "true" : "false") << '\n';
    }
    return os.str();
}

std::vector<SelftestResult> run_selftest() {
    std::vector<SelftestResult> out;
    auto record = [&](std::string name, bool pass, std::string detail) {
        out.push_back({std::move(name), pass, std::move(detail)});
    };

    {  // float tent orbit vs exact rational orbit: error-doubling envelope
        const SystemSpec tent = tent_system();
        const auto exact = exact_orbit(tent, RationalState::make(1, 3), 30);
        StatePoint x = StatePoint::from_value(1.0 / 3.0);
        double worst = 0.0;
        bool ok = true;
        for (std::size_t n = 0; n <= 30; ++n) {
            const double gap = std::abs(x.value - exact[n].value());
            const double bound = std::ldexp(1.0, static_cast<int>(n) - 50);
            worst = std::max(worst, gap / bound);
            ok &= gap <= bound;
            x = evaluate(tent, x);
        }
        record("oracle.tent_float_vs_exact", ok, "worst gap/bound ratio " + fmt17(worst));
    }
    {  // exact doubling of 1/3 has period 2
        const SystemSpec sys = radic_system(2);
        const auto orb = exact_orbit(sys, RationalState::make(1, 3), 4);
        const bool ok = orb[0] == RationalState::make(1, 3) && orb[1] == RationalState::make(2, 3) &&
                        orb[2] == orb[0] && orb[3] == orb[1] && orb[4] == orb[0];
        record("oracle.radic_exact_period", ok, "orbit of 1/3 under doubling alternates {1/3, 2/3}");
    }
    {  // word measures sum to 1 at each length
        const SystemSpec sys = radic_system(2);
        bool ok = true;
        for (std::size_t n = 1; n <= 10; ++n) {
            const auto m = exact_word_measure(sys, std::vector<int>(n, 0));
            ok &= m.num == 1 && m.den == (std::int64_t{1} << n);
        }
        record("oracle.word_measure_normalization", ok, "2^n words of measure 2^-n per length");
    }
    {  // rotation is an isometry along the direct-formula orbit
        const SystemSpec rot = rotation_system((std::sqrt(5.0) - 1.0) / 2.0);
        const auto ox = orbit(rot, StatePoint::from_value(0.123), 1000);
        const auto oy = orbit(rot, StatePoint::from_value(0.777), 1000);
        const double d0 = distance(rot.metric, ox[0].value, oy[0].value);
        double worst = 0.0;
        for (std::size_t n = 0; n < ox.size(); ++n)
            worst = std::max(worst, std::abs(distance(rot.metric, ox[n].value, oy[n].value) - d0));
        record("systems.rotation_isometry", worst <= 1e-9, "max distance drift " + fmt17(worst));
    }
    {  // logistic/tent conjugacy through sin^2(pi u / 2)
        const SystemSpec tent = tent_system();
        const SystemSpec logi = logistic_system();
        double worst = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) {
            const double u = counter_unit(0xC04A, i, 0);
            const double s = std::sin(std::numbers::pi * u / 2.0);
            const double via_logistic = evaluate(logi, StatePoint::from_value(s * s)).value;
            const double tu = evaluate(tent, StatePoint::from_value(u)).value;
            const double st = std::sin(std::numbers::pi * tu / 2.0);
            worst = std::max(worst, std::abs(via_logistic - st * st));
        }
        record("systems.logistic_tent_conjugacy", worst <= 1e-12, "max mismatch " + fmt17(worst));
    }
    {  // sampler invariance: empirical CDF of T(x_i) vs x_i
        bool ok = true;
        std::string detail;
        const std::size_t m = 4000;
        for (const SystemSpec& sys :
             {radic_system(2), tent_system(), logistic_system(), rotation_system(0.37)}) {
            std::vector<double> before, after;
            for (const auto& p : sample_measure(sys, 0x5EED, m)) {
                before.push_back(p.value);
                after.push_back(evaluate(sys, p).value);
            }
            const double ks = ks_statistic(before, after);
            ok &= ks <= 2.0 / std::sqrt(static_cast<double>(m));
            detail += sys.id + " ks=" + fmt17(ks) + " ";
        }
        record("systems.sampler_invariance", ok, detail);
    }
    {  // closed-form boundary measure vs Monte Carlo, both densities
        bool ok = true;
        std::string detail;
        const IntervalPartition part({0.3, 0.55, 0.8});
        for (const auto density : {InvariantDensity::Lebesgue, InvariantDensity::Arcsine}) {
            for (std::size_t cell = 1; cell <= part.cell_count(); ++cell) {
                const double closed = internal_boundary_measure(part, cell, 0.07, density);
                const auto mc =
                    internal_boundary_measure_mc(part, cell, 0.07, density, 20000, 0xB0DD + cell);
                const double sigma3 = binomial_half_width(closed, 20000);
                ok &= std::abs(mc.probability - closed) <= std::max(sigma3, 1e-12);
            }
        }
        detail = "12 cell strips within 3 sigma of closed form";
        record("entropy.boundary_closed_vs_mc", ok, detail);
    }
    {  // K_epsilon closed form
        const IntervalPartition binary({0.5});
        const double k = k_epsilon(binary, 0.05, InvariantDensity::Lebesgue);
        const double expected = std::exp(0.4);
        record("entropy.k_epsilon_formula", std::abs(k - expected) <= 1e-12,
               "K_0.05(binary) = " + fmt17(k));
    }
    return out;
}

}  // namespace symsen
