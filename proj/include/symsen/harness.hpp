#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symsen/rng.hpp"

namespace symsen {

inline constexpr const char* kToolName = "symsen";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Sensitivity, Entropy, Certificate, Recurrence, Selftest };
enum class OutputFormat { Json, Csv };

std::string to_string(Command c);
std::string to_string(OutputFormat f);

/// Fully resolved run configuration; (config, seed) determine the results
/// payload byte for byte. Environment variables are never consulted.
struct ExperimentConfig {
    std::string system_id = "tent";
    Command command = Command::Sensitivity;
    std::size_t pairs = 10000;
    std::size_t orbits = 2000;
    std::size_t horizon = 200;
    std::size_t n_max = 12;
    std::size_t windows = 64;
    unsigned workers = 1;
    std::string delta_grid = "0.1:1.0:10";
    std::optional<double> probe_delta;  // defaults to the first grid point
    std::vector<double> partition_breakpoints = {0.5};
    double quantile = 0.01;
    double trap_threshold = 0.01;
    std::uint64_t seed = kDefaultSeed;
    std::string out;  // empty: no file written
    OutputFormat format = OutputFormat::Json;
};

/// "start:stop:steps" -> inclusive, strictly increasing grid.
std::vector<double> parse_delta_grid(const std::string& spec);

/// Dispatches to the estimator modules, writes the report (or CSV projection)
/// to config.out when set, and returns the full JSON report. Invalid configs
/// throw std::invalid_argument with a message naming the offending field.
nlohmann::json run(const ExperimentConfig& config);

/// True iff both reports carry byte-identical results payloads. Timestamps,
/// output paths and worker counts are excluded from the comparison; any other
/// config difference is an error, not `false`.
bool replay_check(const nlohmann::json& report_a, const nlohmann::json& report_b);

struct SelftestResult {
    std::string name;
    bool pass{false};
    std::string detail;
};

/// Oracle-vs-float and closed-form-vs-MC cross checks.
std::vector<SelftestResult> run_selftest();

/// One-line human summary per command, for stdout.
std::string summarize_report(const nlohmann::json& report);

}  // namespace symsen
