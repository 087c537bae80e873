#include "interq/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "interq/error.hpp"
#include "interq/fragment_id.hpp"

namespace interq {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyPlatform: return "EmptyPlatform";
    case ErrorCode::DanglingLinkEndpoint: return "DanglingLinkEndpoint";
    case ErrorCode::InvalidFidelity: return "InvalidFidelity";
    case ErrorCode::ClassicalLinkWithQuantumFields: return "ClassicalLinkWithQuantumFields";
    case ErrorCode::InvalidPlatform: return "InvalidPlatform";
    case ErrorCode::UnknownModule: return "UnknownModule";
    case ErrorCode::InvalidJob: return "InvalidJob";
    case ErrorCode::InvalidFragmentId: return "InvalidFragmentId";
    case ErrorCode::OverheadOverflow: return "OverheadOverflow";
    case ErrorCode::NoClassicalLink: return "NoClassicalLink";
    case ErrorCode::NoQuantumLink: return "NoQuantumLink";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::NotQuantumLink: return "NotQuantumLink";
    case ErrorCode::InfeasibleGroup: return "InfeasibleGroup";
    case ErrorCode::UnplaceableUnit: return "UnplaceableUnit";
    case ErrorCode::UnresolvedPredecessor: return "UnresolvedPredecessor";
    case ErrorCode::UnschedulableJob: return "UnschedulableJob";
    case ErrorCode::DeadlockDetected: return "DeadlockDetected";
    case ErrorCode::IncompleteJob: return "IncompleteJob";
    case ErrorCode::ZeroFidelity: return "ZeroFidelity";
    case ErrorCode::ZeroMakespan: return "ZeroMakespan";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateJobId: return "DuplicateJobId";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    }
    return "Unknown";
}

std::string_view to_string(CommMode mode) {
    switch (mode) {
    case CommMode::LO: return "LO";
    case CommMode::LOCC: return "LOCC";
    case CommMode::QCOMM: return "QCOMM";
    }
    return "?";
}

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::FLAT: return "FLAT";
    case Stage::UPSTREAM: return "UPSTREAM";
    case Stage::DOWNSTREAM: return "DOWNSTREAM";
    case Stage::REMOTE: return "REMOTE";
    }
    return "?";
}

std::string_view to_string(LinkKind kind) {
    return kind == LinkKind::CLASSICAL ? "CLASSICAL" : "QUANTUM";
}

CommMode comm_mode_from_string(std::string_view text) {
    if (text == "LO") return CommMode::LO;
    if (text == "LOCC") return CommMode::LOCC;
    if (text == "QCOMM") return CommMode::QCOMM;
    throw Error(ErrorCode::ParseError, "unknown communication mode '" + std::string(text) + "'");
}

Stage stage_from_string(std::string_view text) {
    if (text == "FLAT") return Stage::FLAT;
    if (text == "UPSTREAM") return Stage::UPSTREAM;
    if (text == "DOWNSTREAM") return Stage::DOWNSTREAM;
    if (text == "REMOTE") return Stage::REMOTE;
    throw Error(ErrorCode::ParseError, "unknown stage '" + std::string(text) + "'");
}

LinkKind link_kind_from_string(std::string_view text) {
    if (text == "CLASSICAL") return LinkKind::CLASSICAL;
    if (text == "QUANTUM") return LinkKind::QUANTUM;
    throw Error(ErrorCode::ParseError, "unknown link kind '" + std::string(text) + "'");
}

bool JobSpec::admits(CommMode mode) const {
    return std::find(modes.begin(), modes.end(), mode) != modes.end();
}

std::int64_t JobSpec::two_qubit_gates() const {
    return std::accumulate(edges.begin(), edges.end(), std::int64_t{0},
                           [](std::int64_t acc, const InteractionEdge& e) { return acc + e.weight; });
}

void validate_job(const JobSpec& job) {
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::InvalidJob, "job '" + job.id + "': " + why);
    };
    if (!is_valid_job_id(job.id)) fail("id must be non-empty and use only [A-Za-z0-9.]");
    if (job.qubits < 1) fail("qubits must be >= 1");
    if (job.depth < 1) fail("depth must be >= 1");
    if (job.shots < 1) fail("shots must be >= 1");
    if (job.modes.empty()) fail("modes must be non-empty");
    if (job.arrival_ns < 0) fail("arrival_ns must be >= 0");
    for (const auto& e : job.edges) {
        if (e.a < 0 || e.b < 0 || e.a >= job.qubits || e.b >= job.qubits)
            fail("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ") references a qubit >= " +
                 std::to_string(job.qubits));
        if (e.a == e.b) fail("self-loop on qubit " + std::to_string(e.a));
        if (e.weight < 1) fail("edge weights must be positive");
    }
}

Nanos pair_time_from_rate(double rate_hz) {
    return static_cast<Nanos>(std::llround(kNanosPerSecond / rate_hz));
}

const ModuleProfile* Platform::find_module(std::string_view id) const {
    auto it = std::find_if(modules.begin(), modules.end(), [&](const auto& m) { return m.id == id; });
    return it == modules.end() ? nullptr : &*it;
}

const LinkProfile* Platform::find_link(std::string_view id) const {
    auto it = std::find_if(links.begin(), links.end(), [&](const auto& l) { return l.id == id; });
    return it == links.end() ? nullptr : &*it;
}

const ModuleProfile& Platform::module(std::string_view id) const {
    if (const auto* m = find_module(id)) return *m;
    throw Error(ErrorCode::UnknownModule, std::string(id));
}

const LinkProfile& Platform::link(std::string_view id) const {
    if (const auto* l = find_link(id)) return *l;
    throw Error(ErrorCode::InvalidPlatform, "unknown link '" + std::string(id) + "'");
}

int Platform::max_capacity() const {
    int best = 0;
    for (const auto& m : modules) best = std::max(best, m.capacity);
    return best;
}

bool Platform::has_link_kind(LinkKind kind) const {
    return std::any_of(links.begin(), links.end(), [&](const auto& l) { return l.kind == kind; });
}

bool Platform::supports(CommMode mode) const {
    switch (mode) {
    case CommMode::LO: return true;
    case CommMode::LOCC: return has_link_kind(LinkKind::CLASSICAL);
    case CommMode::QCOMM: return has_link_kind(LinkKind::QUANTUM);
    }
    return false;
}

Fragment whole_job_fragment(const JobSpec& job) {
    Fragment f;
    f.id = job.id;
    f.stage = Stage::FLAT;
    f.qubits = job.qubits;
    f.depth = job.depth;
    f.shots_effective = job.shots;
    f.local_gates = job.two_qubit_gates();
    return f;
}

Nanos ScheduleEntry::end_ns() const {
    Nanos end = start_ns;
    for (Nanos e : fragment_end_ns) end = std::max(end, e);
    return end;
}

FragmentIndex Schedule::fragment_index() const {
    FragmentIndex index;
    for (const auto& f : fragments) index.emplace(f.id, f);
    return index;
}

Nanos Schedule::makespan_end() const {
    Nanos end = 0;
    for (const auto& e : entries) end = std::max(end, e.end_ns());
    return end;
}

void validate_weights(const CostWeights& w) {
    const double all[] = {w.alpha, w.beta, w.gamma, w.eta};
    bool any_positive = false;
    for (double x : all) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw Error(ErrorCode::ParseError, "cost weights must be finite and non-negative");
        any_positive = any_positive || x > 0.0;
    }
    if (!any_positive) throw Error(ErrorCode::ParseError, "at least one cost weight must be positive");
}

} // namespace interq
