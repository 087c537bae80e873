#include "interq/platform.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "interq/error.hpp"

namespace interq {

namespace {

bool is_probability(double p) { return p > 0.0 && p <= 1.0; }

void check_module(const ModuleProfile& m) {
    if (m.id.empty()) throw Error(ErrorCode::InvalidPlatform, "module with empty id");
    if (m.capacity < 1) throw Error(ErrorCode::InvalidPlatform, "module '" + m.id + "': capacity must be >= 1");
    if (m.layer_time < 0 || m.shot_overhead < 0)
        throw Error(ErrorCode::InvalidPlatform, "module '" + m.id + "': timing fields must be >= 0");
    if (!is_probability(m.gate_fidelity_1q) || !is_probability(m.gate_fidelity_2q) ||
        !is_probability(m.meas_fidelity))
        throw Error(ErrorCode::InvalidFidelity, "module '" + m.id + "': fidelities must lie in (0,1]");
}

void check_link(LinkProfile& l, const std::set<std::string>& modules) {
    if (l.id.empty()) l.id = std::min(l.a, l.b) + "--" + std::max(l.a, l.b);
    const std::string tag = "link '" + l.id + "': ";
    if (!modules.contains(l.a) || !modules.contains(l.b))
        throw Error(ErrorCode::DanglingLinkEndpoint, tag + "endpoint is not a module");
    if (l.a == l.b) throw Error(ErrorCode::InvalidPlatform, tag + "endpoints must differ");
    if (l.parallelism < 1) throw Error(ErrorCode::InvalidPlatform, tag + "parallelism must be >= 1");
    if (l.classical_latency < 0 || l.meas_latency < 0 || l.ctrl_latency < 0 || l.pair_time < 0 ||
        l.bell_op_time < 0 || l.corr_time < 0 || l.ttl < 0)
        throw Error(ErrorCode::InvalidPlatform, tag + "latencies must be >= 0");

    if (l.kind == LinkKind::CLASSICAL) {
        const bool quantum_fields = l.pair_time != 0 || l.succ_prob != 0.0 || l.bell_op_time != 0 ||
                                    l.corr_time != 0 || l.pair_fidelity != 0.0 || l.ttl != 0 ||
                                    (l.budget && *l.budget != 0);
        if (quantum_fields)
            throw Error(ErrorCode::ClassicalLinkWithQuantumFields, tag + "pair/Bell fields must be 0");
        l.budget = 0;
        return;
    }

    if (!is_probability(l.succ_prob) || !is_probability(l.pair_fidelity))
        throw Error(ErrorCode::InvalidFidelity, tag + "succ_prob and pair_fidelity must lie in (0,1]");
    if (l.ttl <= 0) throw Error(ErrorCode::InvalidPlatform, tag + "ttl must be > 0 on quantum links");
    if (l.pair_time <= 0) throw Error(ErrorCode::InvalidPlatform, tag + "pair_time must be > 0 on quantum links");
    if (!l.budget) l.budget = static_cast<std::int64_t>(l.parallelism) * l.ttl / l.pair_time;
    if (*l.budget < 0) throw Error(ErrorCode::InvalidPlatform, tag + "budget must be >= 0");
}

} // namespace

Platform validate_platform(Platform p) {
    if (p.modules.empty()) {
        if (!p.links.empty())
            throw Error(ErrorCode::DanglingLinkEndpoint, "link '" + p.links.front().id + "' on a platform with no modules");
        throw Error(ErrorCode::EmptyPlatform, "platform has no modules");
    }

    std::set<std::string> module_ids;
    for (const auto& m : p.modules) {
        check_module(m);
        if (!module_ids.insert(m.id).second) throw Error(ErrorCode::InvalidPlatform, "duplicate module id '" + m.id + "'");
    }

    std::set<std::string> link_ids;
    for (auto& l : p.links) {
        check_link(l, module_ids);
        if (!link_ids.insert(l.id).second) throw Error(ErrorCode::InvalidPlatform, "duplicate link id '" + l.id + "'");
    }

    if (!(p.cut_budget >= 1.0)) throw Error(ErrorCode::InvalidPlatform, "cut_budget must be >= 1");
    if (!(p.comm_budget >= 0.0)) throw Error(ErrorCode::InvalidPlatform, "comm_budget must be >= 0");
    if (!(p.sampling_factor >= 1.0) || !std::isfinite(p.sampling_factor))
        throw Error(ErrorCode::InvalidPlatform, "sampling_factor must be a finite real >= 1");
    if (!p.supports(p.comm_mode))
        throw Error(ErrorCode::InvalidPlatform,
                    "comm_mode " + std::string(to_string(p.comm_mode)) + " needs a matching link kind");

    p.incidence.clear();
    for (const auto& m : p.modules) p.incidence[m.id];
    for (const auto& l : p.links) {
        p.incidence[l.a].push_back(l.id);
        p.incidence[l.b].push_back(l.id);
    }
    for (auto& [_, ids] : p.incidence) std::sort(ids.begin(), ids.end());
    return p;
}

std::vector<std::string> incident_links(const Platform& p, std::string_view module) {
    if (!p.find_module(module)) throw Error(ErrorCode::UnknownModule, std::string(module));
    if (auto it = p.incidence.find(std::string(module)); it != p.incidence.end()) return it->second;

    std::vector<std::string> ids;
    for (const auto& l : p.links)
        if (l.connects(module)) ids.push_back(l.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

const LinkProfile* fastest_classical_link(const Platform& p) {
    const LinkProfile* best = nullptr;
    for (const auto& l : p.links) {
        if (l.kind != LinkKind::CLASSICAL) continue;
        if (!best || l.feed_forward_delay() < best->feed_forward_delay() ||
            (l.feed_forward_delay() == best->feed_forward_delay() && l.id < best->id))
            best = &l;
    }
    return best;
}

} // namespace interq
