#pragma once

#include <string>
#include <vector>

#include "interq/model.hpp"
#include "interq/platform.hpp"

namespace interq::testing {

inline ModuleProfile module(const std::string& id, int capacity, Nanos layer = 1'000, Nanos shot = 0) {
    return {id, capacity, layer, shot, 1.0, 1.0, 1.0};
}

inline LinkProfile classical(const std::string& a, const std::string& b, Nanos latency = 0, Nanos ctrl = 0) {
    LinkProfile l;
    l.a = a;
    l.b = b;
    l.kind = LinkKind::CLASSICAL;
    l.classical_latency = latency;
    l.ctrl_latency = ctrl;
    return l;
}

inline LinkProfile quantum(const std::string& a, const std::string& b, Nanos pair_time = 200'000,
                           double succ = 1.0, Nanos bell = 0, Nanos corr = 0) {
    LinkProfile l;
    l.a = a;
    l.b = b;
    l.kind = LinkKind::QUANTUM;
    l.pair_time = pair_time;
    l.succ_prob = succ;
    l.bell_op_time = bell;
    l.corr_time = corr;
    l.pair_fidelity = 1.0;
    l.ttl = 1'000'000'000;
    return l;
}

inline Platform platform_of(std::vector<ModuleProfile> modules, std::vector<LinkProfile> links = {},
                            CommMode mode = CommMode::LO) {
    Platform p;
    p.modules = std::move(modules);
    p.links = std::move(links);
    p.comm_mode = mode;
    return validate_platform(std::move(p));
}

inline JobSpec job_of(const std::string& id, int qubits, int depth = 10, std::int64_t shots = 1,
                      std::vector<InteractionEdge> edges = {}) {
    JobSpec j;
    j.id = id;
    j.qubits = qubits;
    j.depth = depth;
    j.shots = shots;
    j.edges = std::move(edges);
    return j;
}

inline Fragment unit(const std::string& id, int qubits, int depth, std::int64_t shots = 0) {
    Fragment f;
    f.id = id;
    f.qubits = qubits;
    f.depth = depth;
    f.shots_effective = shots;
    return f;
}

} // namespace interq::testing
