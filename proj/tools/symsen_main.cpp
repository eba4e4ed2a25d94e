// Command-line front end: reproducible sensitivity / entropy experiments on
// the built-in interval and circle maps, reported as JSON (canonical) or CSV
// (per-pair and per-word tables).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "symsen/harness.hpp"

namespace {

using symsen::Command;
using symsen::ExperimentConfig;
using symsen::OutputFormat;

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg, std::string& format) {
    cmd->add_option("--seed", cfg.seed, "RNG seed (fixed default, never time-based)")
        ->capture_default_str();
    cmd->add_option("--out", cfg.out, "report output path (omit to print the report to stdout)");
    cmd->add_option("--format", format, "report format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--workers", cfg.workers, "worker threads (results identical for any count)")
        ->capture_default_str();
}

void add_system_option(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--system", cfg.system_id,
                    "system id: radic:<r> | tent | logistic | rotation:<theta>")
        ->capture_default_str();
}

void add_pair_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--pairs", cfg.pairs, "number of sampled pairs")->capture_default_str();
    cmd->add_option("--horizon", cfg.horizon, "orbit horizon N")->capture_default_str();
    cmd->add_option("--delta-grid", cfg.delta_grid, "delta grid start:stop:steps")
        ->capture_default_str();
    cmd->add_option("--delta", cfg.probe_delta,
                    "probe delta for per-pair records (default: first grid point)");
}

void add_partition_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--partition", cfg.partition_breakpoints,
                    "partition breakpoints inside (0,1), e.g. --partition 0.5")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--orbits", cfg.orbits, "number of sampled orbits")->capture_default_str();
    cmd->add_option("--nmax", cfg.n_max, "maximum word length")->capture_default_str();
    cmd->add_option("--windows", cfg.windows, "sliding word windows per orbit")
        ->capture_default_str();
}

int run_and_report(ExperimentConfig cfg, const std::string& format) {
    cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    const nlohmann::json report = symsen::run(cfg);
    std::cout << symsen::summarize_report(report);
    if (cfg.out.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        std::cout << "report written to " << cfg.out << '\n';
    }
    if (cfg.command == Command::Selftest && !report.at("results").at("all_pass").get<bool>())
        return 1;
    return 0;
}

int run_replay_check(const std::string& path_a, const std::string& path_b) {
    auto load = [](const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open report '" + path + "'");
        return nlohmann::json::parse(f);
    };
    const bool same = symsen::replay_check(load(path_a), load(path_b));
    std::cout << (same ? "replay-check: results payloads identical\n"
                       : "replay-check: results payloads DIFFER\n");
    return same ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"estimators for orbit divergence, sensitivity levels and symbolic block entropy "
                 "of interval and circle maps"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string format = "json";
    std::string replay_a, replay_b;

    auto* sensitivity = app.add_subcommand(
        "sensitivity", "trap probabilities over a delta grid, delta_hat and a_mu estimates");
    add_system_option(sensitivity, cfg);
    add_pair_options(sensitivity, cfg);
    sensitivity->add_option("--quantile", cfg.quantile, "delta_hat quantile")->capture_default_str();
    sensitivity
        ->add_option("--trap-threshold", cfg.trap_threshold,
                     "declare 'sensitive at level delta' when trap + half-width is below this")
        ->capture_default_str();
    add_common_options(sensitivity, cfg, format);

    auto* recurrence = app.add_subcommand(
        "recurrence", "exceedance counts and first-exceed times per pair and delta");
    add_system_option(recurrence, cfg);
    add_pair_options(recurrence, cfg);
    add_common_options(recurrence, cfg, format);

    auto* entropy =
        app.add_subcommand("entropy", "block entropies H_n of the symbolic coding and the rate");
    add_system_option(entropy, cfg);
    add_partition_options(entropy, cfg);
    add_common_options(entropy, cfg, format);

    auto* certificate = app.add_subcommand(
        "certificate", "certified sensitivity level from the entropy criterion");
    add_system_option(certificate, cfg);
    add_partition_options(certificate, cfg);
    add_common_options(certificate, cfg, format);

    auto* selftest =
        app.add_subcommand("selftest", "oracle-vs-float and closed-form-vs-MC cross checks");
    add_common_options(selftest, cfg, format);

    auto* replay = app.add_subcommand("replay-check",
                                      "compare the results payloads of two report files");
    replay->add_option("report_a", replay_a, "first report")->required();
    replay->add_option("report_b", replay_b, "second report")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sensitivity->parsed()) cfg.command = Command::Sensitivity;
        if (recurrence->parsed()) cfg.command = Command::Recurrence;
        if (entropy->parsed()) cfg.command = Command::Entropy;
        if (certificate->parsed()) cfg.command = Command::Certificate;
        if (selftest->parsed()) cfg.command = Command::Selftest;
        if (replay->parsed()) return run_replay_check(replay_a, replay_b);
        return run_and_report(cfg, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
