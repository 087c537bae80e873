#include "interq/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include <spdlog/spdlog.h>

#include "interq/cost_model.hpp"
#include "interq/error.hpp"
#include "interq/link_timeline.hpp"

namespace interq {

std::string_view to_string(Policy policy) {
    return policy == Policy::INTERQ ? "INTERQ" : "SERIAL_RR";
}

Policy policy_from_string(std::string_view text) {
    if (text == "interq" || text == "INTERQ") return Policy::INTERQ;
    if (text == "serial-rr" || text == "serial_rr" || text == "SERIAL_RR") return Policy::SERIAL_RR;
    throw Error(ErrorCode::ParseError, "unknown policy '" + std::string(text) + "'");
}

void validate_config(const SchedulerConfig& config) {
    validate_weights(config.weights);
    if (config.max_improvement_rounds < 1)
        throw std::invalid_argument("max_improvement_rounds must be at least 1");
}

std::vector<const ModuleProfile*> eligible_modules(const Fragment& unit, const Platform& platform) {
    std::vector<const ModuleProfile*> out;
    for (const auto& m : platform.modules) {
        if (unit.pinned_module && *unit.pinned_module != m.id) continue;
        if (unit.qubits <= m.capacity) out.push_back(&m);
    }
    return out;
}

namespace {

Nanos best_runtime(const Fragment& u, const Platform& platform) {
    std::optional<Nanos> best;
    for (const auto* m : eligible_modules(u, platform)) {
        const Nanos t = fragment_runtime(u, *m);
        if (!best || t < *best) best = t;
    }
    if (best) return *best;
    // nothing fits: rank by the raw time on the fastest module
    for (const auto& m : platform.modules) {
        const Nanos t = static_cast<Nanos>(u.depth) * m.layer_time + u.shots_effective * m.shot_overhead;
        if (!best || t < *best) best = t;
    }
    return best.value_or(0);
}

std::vector<const ModuleProfile*> modules_by_id(const Platform& platform) {
    std::vector<const ModuleProfile*> out;
    for (const auto& m : platform.modules) out.push_back(&m);
    std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
    return out;
}

bool is_locc_stage(Stage s) { return s == Stage::UPSTREAM || s == Stage::DOWNSTREAM; }

// QComm parts of two jobs, or QComm parts next to LOCC stages, would tie
// group start times together across jobs; keep them apart.
bool mixes_badly(const Fragment& u, const std::vector<const Fragment*>& members) {
    for (const auto* f : members) {
        if (u.stage == Stage::REMOTE && f->stage == Stage::REMOTE && u.parent != f->parent) return true;
        if (u.stage == Stage::REMOTE && is_locc_stage(f->stage)) return true;
        if (is_locc_stage(u.stage) && f->stage == Stage::REMOTE) return true;
    }
    return false;
}

} // namespace

std::vector<Fragment> sort_by_runtime(std::vector<Fragment> units, const Platform& platform) {
    std::vector<std::pair<Nanos, Fragment>> keyed;
    keyed.reserve(units.size());
    for (auto& u : units) {
        const Nanos t = best_runtime(u, platform);
        keyed.emplace_back(t, std::move(u));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second.id < y.second.id;
    });
    std::vector<Fragment> out;
    out.reserve(keyed.size());
    for (auto& [t, u] : keyed) out.push_back(std::move(u));
    return out;
}

std::vector<Group> partition_interq(const std::vector<Fragment>& units, const Platform& platform,
                                    const CostWeights& weights, const PlanningState* context) {
    const auto pool = sort_by_runtime(units, platform);
    FragmentIndex index;
    for (const auto& u : pool) index.emplace(u.id, u);
    const auto modules = modules_by_id(platform);

    const PlanningState empty;
    const PlanningState& ctx = context ? *context : empty;
    std::map<std::string, Nanos> est_free = ctx.module_free;
    std::map<std::string, Nanos> est_end = ctx.fragment_end;

    auto release_of = [&](const Fragment& u) {
        auto it = ctx.release.find(u.job_id());
        return std::max(ctx.now, it == ctx.release.end() ? Nanos{0} : it->second);
    };
    // readiness without and with the feed-forward delay
    auto ready = [&](const Fragment& u, bool with_delay) {
        Nanos t = release_of(u);
        for (const auto& p : u.precedence_in)
            if (auto it = est_end.find(p.from); it != est_end.end())
                t = std::max(t, it->second + (with_delay ? p.delay_ns : 0));
        return t;
    };

    std::vector<char> taken(pool.size(), 0);
    std::set<std::string> grouped;
    std::size_t remaining = pool.size();
    std::vector<Group> out;

    auto predecessors_grouped = [&](const Fragment& u) {
        for (const auto& p : u.precedence_in)
            if (index.count(p.from) && !grouped.count(p.from)) return false;
        return true;
    };

    while (remaining > 0) {
        Group best;
        std::vector<std::size_t> best_picked;
        Nanos best_start = 0;
        double best_score = std::numeric_limits<double>::infinity();

        for (const auto* m : modules) {
            Group g;
            g.module = m->id;
            std::vector<std::size_t> picked;
            std::vector<const Fragment*> members;
            int used = 0;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (taken[i]) continue;
                const auto& u = pool[i];
                if (used + u.qubits > m->capacity) continue;
                if (u.pinned_module && *u.pinned_module != m->id) continue;
                if (!predecessors_grouped(u)) continue;
                if (mixes_badly(u, members)) continue;
                g.fragments.push_back(u.id);
                if (check_group_feasible(g, *m, platform, index) != Feasibility::Feasible) {
                    g.fragments.pop_back();
                    continue;
                }
                picked.push_back(i);
                members.push_back(&u);
                used += u.qubits;
            }
            if (picked.empty()) continue;

            Nanos start = ctx.now;
            if (auto it = est_free.find(m->id); it != est_free.end()) start = std::max(start, it->second);
            for (const auto* u : members) start = std::max(start, ready(*u, true));
            GroupTiming timing;
            for (const auto* u : members) timing.sync_delay_ns.push_back(start - ready(*u, false));

            const double score = group_cost(g, *m, platform, weights, index, &timing).total;
            if (score < best_score) {
                best_score = score;
                best_start = start;
                best = std::move(g);
                best_picked = std::move(picked);
            }
        }

        if (best_picked.empty()) {
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (!taken[i])
                    throw Error(ErrorCode::UnplaceableUnit, "unit '" + pool[i].id + "' fits no module");
        }
        best.score = best_score;
        const auto& module = platform.module(best.module);
        Nanos group_end = best_start;
        for (auto i : best_picked) {
            taken[i] = 1;
            grouped.insert(pool[i].id);
            const Nanos end = best_start + fragment_runtime(pool[i], module);
            est_end[pool[i].id] = end;
            group_end = std::max(group_end, end);
        }
        est_free[best.module] = group_end;
        remaining -= best_picked.size();
        out.push_back(std::move(best));
    }
    return out;
}

namespace {

const Fragment& lookup(const FragmentIndex& fragments, const std::string& id) {
    auto it = fragments.find(id);
    if (it == fragments.end()) throw Error(ErrorCode::InfeasibleGroup, "unknown fragment '" + id + "'");
    return it->second;
}

std::optional<std::string> remote_parent(const Group& g, const FragmentIndex& fragments) {
    for (const auto& id : g.fragments) {
        const auto& f = lookup(fragments, id);
        if (f.stage == Stage::REMOTE) return f.job_id();
    }
    return std::nullopt;
}

} // namespace

Schedule map_groups(const std::vector<Group>& groups, const Platform& platform, const FragmentIndex& fragments,
                    PlanningState* state) {
    PlanningState local;
    PlanningState& st = state ? *state : local;
    LinkTimeline timeline(st.link_reservations);

    std::map<std::string, std::vector<std::size_t>> gangs;
    for (std::size_t i = 0; i < groups.size(); ++i)
        if (auto parent = remote_parent(groups[i], fragments)) gangs[*parent].push_back(i);

    Schedule out;
    std::vector<char> placed(groups.size(), 0);
    std::set<std::string> recorded;

    for (std::size_t idx = 0; idx < groups.size(); ++idx) {
        if (placed[idx]) continue;
        std::vector<std::size_t> members{idx};
        if (auto parent = remote_parent(groups[idx], fragments)) members = gangs[*parent];

        Nanos t = st.now;
        for (auto gi : members) {
            const auto& g = groups[gi];
            if (!platform.find_module(g.module))
                throw Error(ErrorCode::UnknownModule, "group placed on unknown module '" + g.module + "'");
            if (auto it = st.module_free.find(g.module); it != st.module_free.end()) t = std::max(t, it->second);
            for (const auto& id : g.fragments) {
                const auto& f = lookup(fragments, id);
                if (auto it = st.release.find(f.job_id()); it != st.release.end()) t = std::max(t, it->second);
            }
        }
        for (auto gi : members)
            for (const auto& id : groups[gi].fragments)
                for (const auto& p : lookup(fragments, id).precedence_in) {
                    auto it = st.fragment_end.find(p.from);
                    if (it == st.fragment_end.end())
                        throw Error(ErrorCode::UnresolvedPredecessor,
                                    "'" + id + "' depends on unplaced fragment '" + p.from + "'");
                    t = std::max(t, it->second + p.delay_ns);
                }

        // remote phases, one per communicating pair of parts
        std::map<std::string, Nanos> phase_end;
        for (auto gi : members)
            for (const auto& id : groups[gi].fragments) {
                const auto& f = lookup(fragments, id);
                for (const auto& [partner, ops] : f.partners) {
                    if (!(f.id < partner)) continue;
                    const auto& other = lookup(fragments, partner);
                    const LinkProfile* link =
                        cheapest_quantum_link(platform, f.pinned_module.value_or(groups[gi].module),
                                              other.pinned_module.value_or(""));
                    if (!link) link = cheapest_quantum_link(platform);
                    if (!link) throw Error(ErrorCode::NoQuantumLink, "no link for '" + f.id + "'");
                    const Nanos end = plan_remote_phase(timeline, *link, t, ops);
                    phase_end[f.id] = std::max(phase_end[f.id], end);
                    phase_end[partner] = std::max(phase_end[partner], end);
                }
            }

        for (auto gi : members) {
            const auto& g = groups[gi];
            const auto& module = platform.module(g.module);
            ScheduleEntry entry;
            entry.group = g;
            entry.start_ns = t;
            Nanos group_end = t;
            for (const auto& id : g.fragments) {
                const auto& f = lookup(fragments, id);
                Nanos ready = st.now;
                if (auto it = st.release.find(f.job_id()); it != st.release.end()) ready = std::max(ready, it->second);
                for (const auto& p : f.precedence_in) {
                    ready = std::max(ready, st.fragment_end.at(p.from));
                    out.precedence_edges.push_back({p.from, f.id, p.delay_ns});
                }
                Nanos begin = t;
                if (auto it = phase_end.find(id); it != phase_end.end()) begin = std::max(begin, it->second);
                const Nanos end = begin + fragment_runtime(f, module);
                entry.fragment_end_ns.push_back(end);
                entry.sync_delay_ns.push_back(t - ready);
                st.fragment_end[id] = end;
                group_end = std::max(group_end, end);
                if (recorded.insert(id).second) out.fragments.push_back(f);
            }
            st.module_free[g.module] = group_end;
            placed[gi] = 1;
            out.entries.push_back(std::move(entry));
        }
    }

    out.link_reservations = timeline.added();
    st.link_reservations = timeline.all();
    return out;
}

namespace {

struct Evaluation {
    Schedule schedule;
    double z = 0.0;
    PlanningState state;
};

using Assignment = std::map<std::string, std::vector<Fragment>>;

Evaluation evaluate(const std::vector<std::string>& order, const Assignment& current, const Platform& platform,
                    const CostWeights& weights, const PlanningState& base) {
    std::vector<Fragment> units;
    FragmentIndex index;
    for (const auto& job : order) {
        auto it = current.find(job);
        if (it == current.end()) continue;
        for (const auto& f : it->second) {
            units.push_back(f);
            index.emplace(f.id, f);
        }
    }
    Evaluation ev;
    ev.state = base;
    const auto groups = partition_interq(units, platform, weights, &base);
    ev.schedule = map_groups(groups, platform, index, &ev.state);
    ev.z = schedule_objective(ev.schedule, platform, weights);
    return ev;
}

bool candidate_fits(const Candidate& c, const Platform& platform) {
    for (const auto& f : c.fragments) {
        if (eligible_modules(f, platform).empty()) return false;
        for (const auto& [link_id, pairs] : f.bell_demand) {
            const auto* link = platform.find_link(link_id);
            if (!link || pairs > link->budget.value_or(0)) return false;
        }
    }
    return true;
}

} // namespace

Schedule schedule_interq(const std::vector<JobSpec>& queue, const Platform& platform, const SchedulerConfig& config,
                         PlanningState* state, ImprovementLog* log) {
    validate_config(config);
    PlanningState base = state ? *state : PlanningState{};
    for (const auto& job : queue) {
        validate_job(job);
        base.release[job.id] = job.arrival_ns;
    }

    // widest first, so oversized jobs are seeded and revisited first
    std::vector<const JobSpec*> by_width;
    for (const auto& job : queue) by_width.push_back(&job);
    std::stable_sort(by_width.begin(), by_width.end(), [](const auto* a, const auto* b) {
        return a->qubits != b->qubits ? a->qubits > b->qubits : a->id < b->id;
    });
    std::vector<std::string> order;
    for (const auto& job : queue) order.push_back(job.id);

    std::map<std::string, std::vector<Candidate>> candidates;
    Assignment current;
    std::vector<std::string> omitted;
    const int widest = platform.max_capacity();
    for (const auto* job : by_width) {
        auto& cands = candidates[job->id];
        for (auto& c : intercomm_modes(*job, platform))
            if (candidate_fits(c, platform)) cands.push_back(std::move(c));
        if (job->qubits <= widest) current[job->id] = {whole_job_fragment(*job)};
    }

    for (const auto* job : by_width) {
        if (job->qubits <= widest) continue;
        std::optional<Evaluation> best;
        const Candidate* chosen = nullptr;
        for (const auto& c : candidates[job->id]) {
            Assignment trial = current;
            trial[job->id] = c.fragments;
            try {
                auto ev = evaluate(order, trial, platform, config.weights, base);
                if (!best || ev.z < best->z) {
                    best = std::move(ev);
                    chosen = &c;
                }
            } catch (const Error&) {
            }
        }
        if (!chosen) {
            spdlog::warn("job {} ({} qubits) has no schedulable fragment set; skipped", job->id, job->qubits);
            omitted.push_back(job->id);
            continue;
        }
        spdlog::debug("job {} seeded as {}", job->id, to_string(chosen->mode));
        current[job->id] = chosen->fragments;
    }

    ImprovementLog local_log;
    ImprovementLog& lg = log ? *log : local_log;
    lg = ImprovementLog{};

    Evaluation now = evaluate(order, current, platform, config.weights, base);
    lg.z_initial = now.z;
    spdlog::debug("initial objective {:.6f}", now.z);

    for (;;) {
        if (lg.rounds >= config.max_improvement_rounds) {
            lg.hit_round_limit = true;
            break;
        }
        ++lg.rounds;
        bool improved = false;
        for (const auto* job : by_width) {
            auto cur = current.find(job->id);
            if (cur == current.end()) continue;
            for (const auto& c : candidates[job->id]) {
                if (c.fragments == cur->second) continue;
                Assignment trial = current;
                trial[job->id] = c.fragments;
                Evaluation ev;
                try {
                    ev = evaluate(order, trial, platform, config.weights, base);
                } catch (const Error&) {
                    continue;
                }
                if (ev.z < now.z) {
                    lg.accepted.push_back({lg.rounds, job->id, c.mode, now.z, ev.z});
                    spdlog::debug("round {}: job {} -> {}, objective {:.6f} -> {:.6f}", lg.rounds, job->id,
                                  to_string(c.mode), now.z, ev.z);
                    current = std::move(trial);
                    now = std::move(ev);
                    improved = true;
                    break;
                }
            }
            if (improved) break;
        }
        if (!improved) break;
    }
    lg.z_final = now.z;

    now.schedule.omitted = std::move(omitted);
    if (state) *state = std::move(now.state);
    return now.schedule;
}

Schedule schedule_serial_rr(const std::vector<JobSpec>& queue, const Platform& platform, PlanningState* state) {
    PlanningState local;
    PlanningState& st = state ? *state : local;

    std::vector<const JobSpec*> arrivals;
    for (const auto& job : queue) {
        validate_job(job);
        arrivals.push_back(&job);
        st.release[job.id] = job.arrival_ns;
    }
    std::stable_sort(arrivals.begin(), arrivals.end(),
                     [](const auto* a, const auto* b) { return a->arrival_ns < b->arrival_ns; });

    const auto modules = modules_by_id(platform);
    std::vector<Group> groups;
    FragmentIndex index;
    std::vector<std::string> omitted;
    for (const auto* job : arrivals) {
        const ModuleProfile* target = nullptr;
        for (std::size_t k = 0; k < modules.size() && !target; ++k) {
            const std::size_t at = (st.rr_cursor + k) % modules.size();
            if (modules[at]->capacity >= job->qubits) {
                target = modules[at];
                st.rr_cursor = (at + 1) % modules.size();
            }
        }
        if (!target) {
            spdlog::info("serial-rr: job {} ({} qubits) exceeds every module; omitted", job->id, job->qubits);
            omitted.push_back(job->id);
            continue;
        }
        auto f = whole_job_fragment(*job);
        Group g{{f.id}, target->id, 0.0};
        index.emplace(f.id, std::move(f));
        g.score = group_cost(g, *target, platform, CostWeights{}, index).total;
        groups.push_back(std::move(g));
    }

    Schedule out = map_groups(groups, platform, index, &st);
    out.omitted = std::move(omitted);
    return out;
}

Schedule schedule_queue(const std::vector<JobSpec>& queue, const Platform& platform, const SchedulerConfig& config,
                        PlanningState* state, ImprovementLog* log) {
    if (config.policy == Policy::SERIAL_RR) return schedule_serial_rr(queue, platform, state);
    return schedule_interq(queue, platform, config, state, log);
}

} // namespace interq
