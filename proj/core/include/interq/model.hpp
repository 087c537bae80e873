#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace interq {

/// Simulated time and durations, in integer nanoseconds.
using Nanos = std::int64_t;

inline constexpr double kNanosPerSecond = 1.0e9;

inline double to_seconds(Nanos ns) { return static_cast<double>(ns) / kNanosPerSecond; }

enum class CommMode { LO, LOCC, QCOMM };
enum class Stage { FLAT, UPSTREAM, DOWNSTREAM, REMOTE };
enum class LinkKind { CLASSICAL, QUANTUM };

std::string_view to_string(CommMode mode);
std::string_view to_string(Stage stage);
std::string_view to_string(LinkKind kind);
CommMode comm_mode_from_string(std::string_view text);
Stage stage_from_string(std::string_view text);
LinkKind link_kind_from_string(std::string_view text);

/// Undirected interaction edge; weight is the two-qubit gate count between the pair.
struct InteractionEdge {
    int a = 0;
    int b = 0;
    int weight = 1;

    friend bool operator==(const InteractionEdge&, const InteractionEdge&) = default;
};

struct JobSpec {
    std::string id;
    int qubits = 1;
    int depth = 1;
    std::int64_t shots = 1;
    std::vector<InteractionEdge> edges;
    std::vector<CommMode> modes{CommMode::LO, CommMode::LOCC, CommMode::QCOMM};
    Nanos arrival_ns = 0;

    bool admits(CommMode mode) const;
    /// Total two-qubit gate count (sum of edge weights).
    std::int64_t two_qubit_gates() const;

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

/// Throws Error(InvalidJob) when a job violates its invariants.
void validate_job(const JobSpec& job);

struct ModuleProfile {
    std::string id;
    int capacity = 1;
    Nanos layer_time = 0;
    Nanos shot_overhead = 0;
    double gate_fidelity_1q = 1.0;
    double gate_fidelity_2q = 1.0;
    double meas_fidelity = 1.0;

    friend bool operator==(const ModuleProfile&, const ModuleProfile&) = default;
};

struct LinkProfile {
    std::string id;
    std::string a;
    std::string b;
    LinkKind kind = LinkKind::CLASSICAL;
    Nanos classical_latency = 0;
    Nanos meas_latency = 0;
    Nanos ctrl_latency = 0;
    Nanos pair_time = 0;
    double succ_prob = 0.0;
    Nanos bell_op_time = 0;
    Nanos corr_time = 0;
    double pair_fidelity = 0.0;
    Nanos ttl = 0;
    int parallelism = 1;
    /// Maximum Bell pairs reservable per scheduling group. Unset means
    /// parallelism * ttl / pair_time, resolved by validate_platform.
    std::optional<std::int64_t> budget;

    bool connects(std::string_view module) const { return a == module || b == module; }
    bool joins(std::string_view x, std::string_view y) const {
        return (a == x && b == y) || (a == y && b == x);
    }
    std::string_view other_end(std::string_view module) const { return a == module ? b : a; }
    /// Classical feed-forward delay across this link (measurement + transmission + control).
    Nanos feed_forward_delay() const { return meas_latency + classical_latency + ctrl_latency; }

    friend bool operator==(const LinkProfile&, const LinkProfile&) = default;
};

/// Period of a pair source running at `rate_hz`, rounded to the nearest nanosecond.
Nanos pair_time_from_rate(double rate_hz);

struct Platform {
    std::vector<ModuleProfile> modules;
    std::vector<LinkProfile> links;
    CommMode comm_mode = CommMode::LO;
    double cut_budget = 16.0;
    double comm_budget = 1.0e12;
    double sampling_factor = 1.0;

    /// Incident link ids per module; filled by validate_platform.
    std::map<std::string, std::vector<std::string>> incidence;

    const ModuleProfile& module(std::string_view id) const;
    const LinkProfile& link(std::string_view id) const;
    const ModuleProfile* find_module(std::string_view id) const;
    const LinkProfile* find_link(std::string_view id) const;
    int max_capacity() const;
    bool has_link_kind(LinkKind kind) const;
    /// Communication modes this platform can execute: LO always, LOCC with a
    /// classical link, QCOMM with a quantum link.
    bool supports(CommMode mode) const;

    friend bool operator==(const Platform&, const Platform&) = default;
};

struct PrecedenceIn {
    std::string from;
    Nanos delay_ns = 0;

    friend bool operator==(const PrecedenceIn&, const PrecedenceIn&) = default;
};

struct Fragment {
    std::string id;
    std::optional<std::string> parent;
    Stage stage = Stage::FLAT;
    /// Qubit demand including communication ancillas.
    int qubits = 1;
    int ancilla_qubits = 0;
    int depth = 1;
    std::int64_t shots_effective = 1;
    double cut_overhead = 1.0;
    double comm_cost = 0.0;
    int remote_ops = 0;
    std::map<std::string, std::int64_t> bell_demand;
    std::vector<PrecedenceIn> precedence_in;

    /// REMOTE only: sibling fragment id -> remote operations shared with it.
    std::map<std::string, int> partners;
    /// REMOTE only: module the part was sized for.
    std::optional<std::string> pinned_module;
    /// Two-qubit gates executed locally by this fragment.
    std::int64_t local_gates = 0;
    /// LO/LOCC cuts whose fidelity penalty is charged to this fragment.
    int cut_count = 0;

    /// Owning job id: the parent, or the fragment's own id when uncut.
    const std::string& job_id() const { return parent ? *parent : id; }
    int data_qubits() const { return qubits - ancilla_qubits; }

    friend bool operator==(const Fragment&, const Fragment&) = default;
};

using FragmentIndex = std::map<std::string, Fragment>;

/// The uncut footprint of a job as a single FLAT fragment named after the job.
Fragment whole_job_fragment(const JobSpec& job);

struct Group {
    std::vector<std::string> fragments;
    std::string module;
    double score = 0.0;

    friend bool operator==(const Group&, const Group&) = default;
};

struct ScheduleEntry {
    Group group;
    Nanos start_ns = 0;
    std::vector<Nanos> fragment_end_ns;
    /// Per fragment: time from readiness (arrival, or predecessor end) to the group start.
    std::vector<Nanos> sync_delay_ns;

    Nanos end_ns() const;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct LinkReservation {
    std::string link;
    Nanos begin_ns = 0;
    Nanos end_ns = 0;
    int pairs = 1;

    friend bool operator==(const LinkReservation&, const LinkReservation&) = default;
};

struct PrecedenceEdge {
    std::string from;
    std::string to;
    Nanos delay_ns = 0;

    friend bool operator==(const PrecedenceEdge&, const PrecedenceEdge&) = default;
};

struct Schedule {
    std::vector<ScheduleEntry> entries;
    std::vector<LinkReservation> link_reservations;
    std::vector<PrecedenceEdge> precedence_edges;
    /// Definitions of every fragment referenced by an entry.
    std::vector<Fragment> fragments;
    /// Jobs left out of the schedule (too wide for Serial RR, or unschedulable).
    std::vector<std::string> omitted;

    FragmentIndex fragment_index() const;
    Nanos makespan_end() const;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct CostWeights {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double eta = 1.0;

    friend bool operator==(const CostWeights&, const CostWeights&) = default;
};

void validate_weights(const CostWeights& w);

} // namespace interq
