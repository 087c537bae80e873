#include "interq/cost_model.hpp"

#include <algorithm>
#include <map>

#include "interq/error.hpp"
#include "interq/platform.hpp"

namespace interq {

Nanos fragment_runtime(const Fragment& f, const ModuleProfile& m) {
    if (f.qubits > m.capacity)
        throw Error(ErrorCode::CapacityExceeded, "fragment '" + f.id + "' needs " + std::to_string(f.qubits) +
                                                     " qubits, module '" + m.id + "' has " +
                                                     std::to_string(m.capacity));
    return static_cast<Nanos>(f.depth) * m.layer_time + f.shots_effective * m.shot_overhead;
}

double remote_op_cost(const LinkProfile& link) {
    if (link.kind != LinkKind::QUANTUM) throw Error(ErrorCode::NotQuantumLink, link.id);
    return static_cast<double>(link.pair_time) / link.succ_prob + static_cast<double>(link.bell_op_time) +
           static_cast<double>(link.corr_time);
}

double remote_op_fidelity(const LinkProfile& link, const ModuleProfile& m) {
    if (link.kind != LinkKind::QUANTUM) throw Error(ErrorCode::NotQuantumLink, link.id);
    return link.pair_fidelity * m.gate_fidelity_2q * m.meas_fidelity;
}

namespace {

bool cheaper(const LinkProfile& l, const LinkProfile* best) {
    if (!best) return true;
    const double cl = remote_op_cost(l), cb = remote_op_cost(*best);
    return cl < cb || (cl == cb && l.id < best->id);
}

} // namespace

const LinkProfile* cheapest_quantum_link(const Platform& p, std::string_view a, std::string_view b) {
    const LinkProfile* best = nullptr;
    for (const auto& l : p.links)
        if (l.kind == LinkKind::QUANTUM && l.joins(a, b) && cheaper(l, best)) best = &l;
    return best;
}

const LinkProfile* cheapest_quantum_link(const Platform& p) {
    const LinkProfile* best = nullptr;
    for (const auto& l : p.links)
        if (l.kind == LinkKind::QUANTUM && cheaper(l, best)) best = &l;
    return best;
}

std::string_view to_string(Feasibility verdict) {
    switch (verdict) {
    case Feasibility::Feasible: return "Feasible";
    case Feasibility::CapacityExceeded: return "CapacityExceeded";
    case Feasibility::StageConflict: return "StageConflict";
    case Feasibility::LinkBudget: return "LinkBudget";
    }
    return "?";
}

namespace {

const Fragment& resolve(const FragmentIndex& fragments, const std::string& id) {
    auto it = fragments.find(id);
    if (it == fragments.end()) throw Error(ErrorCode::InfeasibleGroup, "unknown fragment '" + id + "'");
    return it->second;
}

} // namespace

Feasibility check_group_feasible(const Group& g, const ModuleProfile& m, const Platform& platform,
                                 const FragmentIndex& fragments) {
    std::vector<const Fragment*> members;
    members.reserve(g.fragments.size());
    for (const auto& id : g.fragments) members.push_back(&resolve(fragments, id));

    long long demand = 0;
    for (const auto* f : members) demand += f->qubits;
    if (demand > m.capacity) return Feasibility::CapacityExceeded;

    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (members[i]->parent && members[i]->parent == members[j]->parent &&
                members[i]->stage != members[j]->stage)
                return Feasibility::StageConflict;

    for (const auto& link_id : incident_links(platform, m.id)) {
        const auto& link = platform.link(link_id);
        if (link.kind != LinkKind::QUANTUM) continue;
        long long pairs = 0;
        for (const auto* f : members)
            if (auto it = f->bell_demand.find(link_id); it != f->bell_demand.end()) pairs += it->second;
        if (pairs > link.budget.value_or(0)) return Feasibility::LinkBudget;
    }
    return Feasibility::Feasible;
}

double normalization_time(const Platform& p) {
    Nanos longest = 0;
    for (const auto& m : p.modules) longest = std::max(longest, m.layer_time);
    return longest > 0 ? static_cast<double>(longest) * 1000.0 : 1.0;
}

double placed_comm_cost(const Fragment& f, std::string_view module, const Platform& platform,
                        const FragmentIndex& fragments) {
    if (f.partners.empty()) return f.comm_cost;
    const LinkProfile* fallback = cheapest_quantum_link(platform);
    double total = 0.0;
    for (const auto& [partner_id, ops] : f.partners) {
        const LinkProfile* link = nullptr;
        if (auto it = fragments.find(partner_id); it != fragments.end() && it->second.pinned_module)
            link = cheapest_quantum_link(platform, module, *it->second.pinned_module);
        if (!link) link = fallback;
        if (!link) throw Error(ErrorCode::NoQuantumLink, "no quantum link to price '" + f.id + "'");
        total += ops * remote_op_cost(*link);
    }
    return total;
}

GroupCostBreakdown group_cost(const Group& g, const ModuleProfile& m, const Platform& platform,
                              const CostWeights& w, const FragmentIndex& fragments, const GroupTiming* timing) {
    if (g.fragments.empty()) throw Error(ErrorCode::InfeasibleGroup, "empty group");
    if (auto verdict = check_group_feasible(g, m, platform, fragments); verdict != Feasibility::Feasible)
        throw Error(ErrorCode::InfeasibleGroup,
                    "group on '" + m.id + "' violates " + std::string(to_string(verdict)));

    GroupCostBreakdown out;
    Nanos t_max = 0, t_min = 0;
    for (std::size_t i = 0; i < g.fragments.size(); ++i) {
        const auto& f = resolve(fragments, g.fragments[i]);
        const Nanos t = fragment_runtime(f, m);
        t_max = i == 0 ? t : std::max(t_max, t);
        t_min = i == 0 ? t : std::min(t_min, t);

        if (timing) {
            out.b += static_cast<double>(timing->sync_delay_ns.at(i));
        } else {
            for (const auto& p : f.precedence_in) out.b += static_cast<double>(p.delay_ns);
        }
        if (f.stage == Stage::REMOTE) out.c += placed_comm_cost(f, m.id, platform, fragments);
        out.h += f.cut_overhead - 1.0;
        out.h_raw += f.cut_overhead;
    }
    out.a = t_min > 0 ? static_cast<double>(t_max) / static_cast<double>(t_min) - 1.0 : 0.0;

    const double ref = normalization_time(platform);
    out.total = w.alpha * out.a + w.beta * (out.b / ref) + w.gamma * (out.c / ref) + w.eta * out.h;
    return out;
}

double schedule_objective(const Schedule& s, const Platform& platform, const CostWeights& w) {
    const auto fragments = s.fragment_index();
    double z = 0.0;
    for (const auto& entry : s.entries) {
        GroupTiming timing{entry.sync_delay_ns};
        const GroupTiming* t = timing.sync_delay_ns.size() == entry.group.fragments.size() ? &timing : nullptr;
        z += group_cost(entry.group, platform.module(entry.group.module), platform, w, fragments, t).total;
    }
    return z;
}

} // namespace interq
