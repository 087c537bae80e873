#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "interq/model.hpp"
#include "interq/sim.hpp"

namespace interq::cli {

/// Exit codes of every command.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kUnschedulable = 2;

struct RunOptions {
    std::string platform;   ///< preset name or platform file
    std::string workload;   ///< workload file or random:N:WMIN:WMAX[:SEED]
    std::string policy = "interq";
    std::string arrivals = "burst";
    std::uint64_t seed = 0;
    std::vector<double> weights{1.0, 1.0, 1.0, 1.0};
    std::string out = ".";
    bool strict = false;
};

struct CompareOptions {
    /// Run ids "PLATFORM" or "PLATFORM:policy"; the policy defaults to interq.
    std::vector<std::string> runs;
    std::string workload;
    std::string baseline;
    std::string arrivals = "burst";
    std::uint64_t seed = 0;
    std::vector<double> weights{1.0, 1.0, 1.0, 1.0};
    std::string out = ".";
};

struct CharacterizeOptions {
    std::string platform;
    std::string workload;
    std::string out = ".";
};

Platform resolve_platform(const std::string& spec);
std::vector<JobSpec> resolve_workload(const std::string& spec);
CostWeights parse_weights(const std::vector<double>& values);

/// Writes schedule.json, trace.log, metrics.json and gantt.csv into out.
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);
/// Writes comparison.csv and comparison.json into out.
int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);
/// Writes characterize.csv into out.
int cmd_characterize(const CharacterizeOptions& opt, std::ostream& out, std::ostream& err);

/// Metric table, one "name value" row per MetricsReport field, 4 decimals.
std::string summary_table(const MetricsReport& m);

} // namespace interq::cli
