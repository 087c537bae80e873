#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "interq/model.hpp"

namespace interq {

// Workload documents:
//   {"jobs": [{"id": "3", "qubits": 20, "depth": 40, "shots": 1000,
//              "edges": [[0, 1], [1, 2, 3]], "modes": ["LO", "LOCC", "QCOMM"],
//              "arrival_ns": 0}]}
// "modes" and "arrival_ns" are optional. Arrivals must be nondecreasing.

/// Throws Error(ParseError) naming the line or field, Error(DuplicateJobId).
std::vector<JobSpec> parse_workload(std::string_view text);
std::vector<JobSpec> load_workload(const std::string& path);
std::string workload_to_json(const std::vector<JobSpec>& jobs);
void save_workload(const std::string& path, const std::vector<JobSpec>& jobs);

/// Platform documents mirror the Platform fields. A "preset" key starts from
/// that preset; any other key present replaces the preset's value.
/// The result is validated.
Platform parse_platform(std::string_view text);
Platform load_platform(const std::string& path);
std::string platform_to_json(const Platform& p);

std::string fragment_to_json(const Fragment& f);
Fragment fragment_from_json(std::string_view text);
std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(std::string_view text);

/// "fragment,module,start_ns,end_ns,stage" per executed fragment, in entry order.
std::string gantt_csv(const Schedule& s);

struct RandomWorkloadSpec {
    int jobs = 0;
    int min_width = 2;
    int max_width = 2;
    int min_depth = 1;
    int max_depth = 1;
    std::int64_t shots = 1000;
    /// Extra edges per qubit beyond the connecting path.
    double density = 1.0;
    /// Extra edges join qubits at most this far apart in index.
    int locality = 8;
    std::uint64_t seed = 0;
};

/// Jobs "1".."n" with uniform widths and depths. Each interaction graph is a
/// path over all qubits plus round(width * density) extra local edges, with
/// weights 1-3. Pure function of the spec.
std::vector<JobSpec> generate_random_workload(const RandomWorkloadSpec& spec);

std::vector<std::string> preset_names();

/// IBM_LOCC, IONQ_QCOMM or ATOMIC_QCOMM. Throws Error(UnknownPreset).
Platform platform_preset(std::string_view name);

} // namespace interq
