#include "interq/sim.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>

#include <spdlog/spdlog.h>

#include "interq/cost_model.hpp"
#include "interq/error.hpp"
#include "interq/platform.hpp"

namespace interq {

std::string_view to_string(ArrivalMode mode) {
    return mode == ArrivalMode::BURST ? "BURST" : "EVENT_DRIVEN";
}

ArrivalMode arrival_mode_from_string(std::string_view text) {
    if (text == "burst" || text == "BURST") return ArrivalMode::BURST;
    if (text == "event-driven" || text == "event_driven" || text == "EVENT_DRIVEN") return ArrivalMode::EVENT_DRIVEN;
    throw Error(ErrorCode::ParseError, "unknown arrival mode '" + std::string(text) + "'");
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

std::mt19937_64& RngStream::substream(std::string_view name) {
    auto it = streams_.find(name);
    if (it == streams_.end()) {
        const std::uint64_t h = fnv1a(name);
        std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                          static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
        it = streams_.emplace(std::string(name), std::mt19937_64(seq)).first;
    }
    return it->second;
}

Nanos generate_pair(const LinkProfile& link, RngStream& rng) {
    if (link.kind != LinkKind::QUANTUM) throw Error(ErrorCode::NotQuantumLink, link.id);
    std::geometric_distribution<std::int64_t> failures(link.succ_prob);
    const std::int64_t attempts = failures(rng.substream("pair_success")) + 1;
    return attempts * link.pair_time;
}

bool EventQueue::Later::operator()(const Event& x, const Event& y) const {
    if (x.time != y.time) return x.time > y.time;
    if (x.kind != y.kind) return static_cast<int>(x.kind) > static_cast<int>(y.kind);
    return x.seq > y.seq;
}

void EventQueue::push(Nanos time, EventKind kind, EventPayload payload) {
    heap_.push(Event{time, kind, next_seq_++, payload});
}

Event EventQueue::pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
}

namespace {

enum class GroupStatus { WAITING, RUNNING, DONE, REMOVED };

struct PlannedGroup {
    ScheduleEntry planned;
    GroupStatus status = GroupStatus::WAITING;
    Nanos start = -1;
    std::vector<Nanos> ends;
    std::size_t left = 0;
    std::optional<std::string> gang;
};

struct FeedForward {
    std::string from;
    std::string to;
    Nanos delay = 0;
};

struct Phase {
    std::string from;
    std::string to;
    const LinkProfile* link = nullptr;
    std::size_t link_index = 0;
    int ops = 0;
    int done = 0;
    bool op_running = false;
    std::optional<std::size_t> ready_pair;
    double op_fidelity = 1.0;
    Nanos op_start = 0;
};

enum class PairStatus { PENDING, READY, CONSUMED, EXPIRED };

struct Pair {
    std::size_t phase = 0;
    PairStatus status = PairStatus::PENDING;
    Nanos expires = 0;
};

struct LinkState {
    const LinkProfile* link = nullptr;
    int busy = 0;
    std::deque<std::size_t> waiting; // phases
};

class Simulator {
public:
    Simulator(const std::vector<JobSpec>& workload, const Platform& platform, const SimConfig& config,
              std::uint64_t seed)
        : jobs_(workload), platform_(platform), config_(config), rng_(seed) {
        for (const auto& m : platform_.modules) {
            module_queue_[m.id];
            module_busy_[m.id] = false;
        }
        for (std::size_t i = 0; i < platform_.links.size(); ++i) {
            link_index_[platform_.links[i].id] = i;
            links_.push_back(LinkState{&platform_.links[i], 0, {}});
        }
    }

    SimOutput run() {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < jobs_.size(); ++i) {
            validate_job(jobs_[i]);
            if (!seen.insert(jobs_[i].id).second)
                throw Error(ErrorCode::DuplicateJobId, "job '" + jobs_[i].id + "' appears twice");
            exec_.arrivals[jobs_[i].id] = jobs_[i].arrival_ns;
            queue_.push(jobs_[i].arrival_ns, EventKind::JOB_ARRIVAL, {i});
        }

        while (!queue_.empty()) {
            const Event ev = queue_.pop();
            now_ = ev.time;
            handle(ev);
            const bool more_now = !queue_.empty() && queue_.top().time == now_;
            if (!arrived_.empty() && !(more_now && queue_.top().kind == EventKind::JOB_ARRIVAL)) replan();
            if (replan_pending_ && !more_now) {
                replan_pending_ = false;
                if (config_.arrivals == ArrivalMode::EVENT_DRIVEN) replan();
            }
            try_start();
        }

        for (const auto& g : groups_)
            if (g.status == GroupStatus::WAITING || g.status == GroupStatus::RUNNING)
                throw Error(ErrorCode::DeadlockDetected,
                            "no runnable event left with group on '" + g.planned.group.module + "' unfinished");
        return finish();
    }

private:
    // ---- planning -------------------------------------------------------

    void replan() {
        std::vector<std::string> ids(arrived_.begin(), arrived_.end());
        arrived_.clear();
        if (config_.arrivals == ArrivalMode::EVENT_DRIVEN) {
            const auto pool = withdraw_unstarted(std::set<std::string>(ids.begin(), ids.end()));
            ids.clear();
            for (const auto& job : jobs_)
                if (pool.count(job.id)) ids.push_back(job.id);
        }
        if (ids.empty()) return;

        std::vector<JobSpec> batch;
        for (const auto& job : jobs_)
            if (std::find(ids.begin(), ids.end(), job.id) != ids.end()) batch.push_back(job);

        PlanningState state = projected_state();
        ImprovementLog log;
        Schedule plan = schedule_queue(batch, platform_, config_.scheduler, &state, &log);
        rr_cursor_ = state.rr_cursor;
        if (config_.scheduler.policy == Policy::INTERQ) improvement_.push_back(log);
        for (const auto& r : plan.link_reservations) planned_reservations_.push_back(r);
        for (const auto& id : plan.omitted)
            if (std::find(omitted_.begin(), omitted_.end(), id) == omitted_.end()) omitted_.push_back(id);
        for (const auto& f : plan.fragments) fragments_[f.id] = f;
        for (const auto& e : plan.precedence_edges) {
            successors_[e.from].push_back(feed_.size());
            feed_.push_back({e.from, e.to, e.delay_ns});
            exec_.executed.precedence_edges.push_back(e);
        }
        for (auto& entry : plan.entries) {
            PlannedGroup g;
            g.planned = std::move(entry);
            g.ends.assign(g.planned.group.fragments.size(), -1);
            g.left = g.planned.group.fragments.size();
            for (const auto& id : g.planned.group.fragments) {
                const auto& f = fragments_.at(id);
                if (f.stage == Stage::REMOTE) g.gang = f.job_id();
            }
            const std::size_t gi = groups_.size();
            module_queue_[g.planned.group.module].push_back(gi);
            if (g.gang) gang_members_[*g.gang].push_back(gi);
            groups_.push_back(std::move(g));
        }
        for (auto& [parent, members] : gang_members_)
            members.erase(std::remove_if(members.begin(), members.end(),
                                         [&](std::size_t gi) { return groups_[gi].status == GroupStatus::REMOVED; }),
                          members.end());
    }

    // Takes every job that has not started and shares no waiting group with a
    // started job out of the plan, and returns those jobs plus `arrivals`.
    std::set<std::string> withdraw_unstarted(std::set<std::string> pool) {
        std::set<std::string> started, planned;
        for (const auto& g : groups_) {
            if (g.status == GroupStatus::REMOVED) continue;
            for (const auto& f : g.planned.group.fragments) {
                const auto& job = fragments_.at(f).job_id();
                planned.insert(job);
                if (g.status != GroupStatus::WAITING) started.insert(job);
            }
        }
        std::set<std::string> movable;
        for (const auto& job : planned)
            if (!started.count(job)) movable.insert(job);
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& g : groups_) {
                if (g.status != GroupStatus::WAITING) continue;
                bool all = true;
                for (const auto& f : g.planned.group.fragments) all = all && movable.count(fragments_.at(f).job_id());
                if (all) continue;
                for (const auto& f : g.planned.group.fragments) changed |= movable.erase(fragments_.at(f).job_id()) > 0;
            }
        }
        if (movable.empty()) return pool;

        for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
            auto& g = groups_[gi];
            if (g.status != GroupStatus::WAITING) continue;
            if (!movable.count(fragments_.at(g.planned.group.fragments.front()).job_id())) continue;
            g.status = GroupStatus::REMOVED;
            auto& q = module_queue_[g.planned.group.module];
            q.erase(std::remove(q.begin(), q.end(), gi), q.end());
        }
        auto moved = [&](const std::string& fragment) {
            auto it = fragments_.find(fragment);
            return it != fragments_.end() && movable.count(it->second.job_id()) > 0;
        };
        for (auto& [from, edges] : successors_)
            edges.erase(std::remove_if(edges.begin(), edges.end(), [&](std::size_t e) { return moved(feed_[e].to); }),
                        edges.end());
        auto& prec = exec_.executed.precedence_edges;
        prec.erase(std::remove_if(prec.begin(), prec.end(), [&](const PrecedenceEdge& e) { return moved(e.to); }),
                   prec.end());
        pool.insert(movable.begin(), movable.end());
        return pool;
    }

    PlanningState projected_state() const {
        PlanningState s;
        s.now = now_;
        s.rr_cursor = rr_cursor_;
        for (const auto& [module, q] : module_queue_) {
            Nanos free = now_;
            for (auto gi : q) {
                const auto& g = groups_[gi];
                const Nanos planned_end = g.planned.end_ns();
                Nanos end = planned_end;
                if (g.status == GroupStatus::RUNNING) end = std::max(end, g.start + (planned_end - g.planned.start_ns));
                free = std::max(free, end);
            }
            s.module_free[module] = free;
        }
        for (const auto& r : planned_reservations_)
            if (r.end_ns > now_) s.link_reservations.push_back(r);
        return s;
    }

    // ---- starting groups -------------------------------------------------

    bool ready_alone(std::size_t gi) const {
        const auto& g = groups_[gi];
        if (g.status != GroupStatus::WAITING) return false;
        const auto& module = g.planned.group.module;
        if (module_busy_.at(module)) return false;
        const auto& q = module_queue_.at(module);
        if (q.empty() || q.front() != gi) return false;
        for (const auto& id : g.planned.group.fragments) {
            const auto& f = fragments_.at(id);
            if (exec_.arrivals.at(f.job_id()) > now_) return false;
            for (const auto& p : f.precedence_in)
                if (!delivered_.count({p.from, id})) return false;
        }
        return true;
    }

    void try_start() {
        for (auto& [module, q] : module_queue_) {
            if (q.empty() || module_busy_[module]) continue;
            const std::size_t head = q.front();
            std::vector<std::size_t> members{head};
            if (groups_[head].gang) members = gang_members_.at(*groups_[head].gang);
            bool ok = true;
            for (auto gi : members) ok = ok && ready_alone(gi);
            if (!ok) continue;
            for (auto gi : members) {
                groups_[gi].status = GroupStatus::RUNNING;
                module_busy_[groups_[gi].planned.group.module] = true;
                queue_.push(now_, EventKind::GROUP_START, {gi});
            }
        }
    }

    // ---- event handlers -----------------------------------------------------

    void handle(const Event& ev) {
        switch (ev.kind) {
        case EventKind::JOB_ARRIVAL: {
            const auto& job = jobs_[ev.payload.a];
            trace(EventKind::JOB_ARRIVAL, {job.id});
            arrived_.push_back(job.id);
            break;
        }
        case EventKind::GROUP_START: on_group_start(ev.payload.a); break;
        case EventKind::FRAGMENT_END: on_fragment_end(ev.payload.a, ev.payload.b); break;
        case EventKind::CLASSICAL_MSG_DELIVERED:
            if (ev.payload.remote) {
                on_remote_op_done(ev.payload.a);
            } else {
                const auto& ff = feed_[ev.payload.a];
                delivered_.insert({ff.from, ff.to});
                trace(EventKind::CLASSICAL_MSG_DELIVERED, {ff.from, ff.to});
            }
            break;
        case EventKind::PAIR_READY: on_pair_ready(ev.payload.a); break;
        case EventKind::PAIR_EXPIRED: on_pair_expired(ev.payload.a); break;
        case EventKind::LINK_FREED: on_link_freed(ev.payload.a); break;
        }
    }

    void on_group_start(std::size_t gi) {
        auto& g = groups_[gi];
        g.start = now_;
        std::vector<std::string> ids{g.planned.group.module};
        ids.insert(ids.end(), g.planned.group.fragments.begin(), g.planned.group.fragments.end());
        trace(EventKind::GROUP_START, std::move(ids));

        const auto& module = platform_.module(g.planned.group.module);
        for (std::size_t i = 0; i < g.planned.group.fragments.size(); ++i) {
            const auto& f = fragments_.at(g.planned.group.fragments[i]);
            if (f.partners.empty()) queue_.push(now_ + fragment_runtime(f, module), EventKind::FRAGMENT_END, {gi, i});
        }
        if (!g.gang) return;
        if (++gang_started_[*g.gang] < gang_members_.at(*g.gang).size()) return;

        // whole gang resident: open one remote phase per communicating pair
        std::vector<std::string> parts;
        for (auto member : gang_members_.at(*g.gang))
            for (const auto& id : groups_[member].planned.group.fragments)
                if (fragments_.at(id).stage == Stage::REMOTE) parts.push_back(id);
        std::sort(parts.begin(), parts.end());
        for (const auto& id : parts) {
            const auto& f = fragments_.at(id);
            for (const auto& [partner, ops] : f.partners) {
                if (!(id < partner)) continue;
                const auto& other = fragments_.at(partner);
                const LinkProfile* link = cheapest_quantum_link(platform_, f.pinned_module.value_or(module_of(id)),
                                                                other.pinned_module.value_or(module_of(partner)));
                if (!link) link = cheapest_quantum_link(platform_);
                if (!link) throw Error(ErrorCode::NoQuantumLink, "no link for '" + id + "'");
                Phase ph;
                ph.from = id;
                ph.to = partner;
                ph.link = link;
                ph.link_index = link_index_.at(link->id);
                ph.ops = ops;
                ph.op_fidelity = remote_op_fidelity(*link, platform_.module(module_of(id)));
                pending_phases_[id]++;
                pending_phases_[partner]++;
                phases_.push_back(ph);
                request_pair(phases_.size() - 1);
            }
        }
    }

    std::string module_of(const std::string& fragment) const {
        for (const auto& g : groups_)
            if (g.status != GroupStatus::REMOVED)
                for (const auto& id : g.planned.group.fragments)
                    if (id == fragment) return g.planned.group.module;
        throw Error(ErrorCode::InfeasibleGroup, "fragment '" + fragment + "' is not planned");
    }

    void on_fragment_end(std::size_t gi, std::size_t pos) {
        auto& g = groups_[gi];
        const auto& id = g.planned.group.fragments[pos];
        g.ends[pos] = now_;
        trace(EventKind::FRAGMENT_END, {id, g.planned.group.module});
        if (auto it = successors_.find(id); it != successors_.end())
            for (auto e : it->second) queue_.push(now_ + feed_[e].delay, EventKind::CLASSICAL_MSG_DELIVERED, {e});
        if (--g.left > 0) return;
        g.status = GroupStatus::DONE;
        module_busy_[g.planned.group.module] = false;
        auto& q = module_queue_[g.planned.group.module];
        if (!q.empty() && q.front() == gi) q.pop_front();
        replan_pending_ = true;
    }

    void request_pair(std::size_t phase) {
        auto& ls = links_[phases_[phase].link_index];
        if (ls.busy < ls.link->parallelism) {
            start_generation(phase);
        } else {
            ls.waiting.push_back(phase);
        }
    }

    void start_generation(std::size_t phase) {
        auto& ph = phases_[phase];
        auto& ls = links_[ph.link_index];
        const Nanos delay = generate_pair(*ph.link, rng_);
        ++ls.busy;
        pairs_.push_back(Pair{phase, PairStatus::PENDING, 0});
        ++exec_.pairs.generated;
        exec_.executed.link_reservations.push_back({ph.link->id, now_, now_ + delay, 1});
        queue_.push(now_ + delay, EventKind::LINK_FREED, {ph.link_index});
        queue_.push(now_ + delay, EventKind::PAIR_READY, {pairs_.size() - 1});
    }

    void on_link_freed(std::size_t li) {
        auto& ls = links_[li];
        --ls.busy;
        trace(EventKind::LINK_FREED, {ls.link->id});
        if (!ls.waiting.empty()) {
            const auto phase = ls.waiting.front();
            ls.waiting.pop_front();
            start_generation(phase);
        }
    }

    std::string pair_name(std::size_t pair) const { return "pair" + std::to_string(pair); }

    void on_pair_ready(std::size_t pi) {
        auto& pair = pairs_[pi];
        auto& ph = phases_[pair.phase];
        pair.status = PairStatus::READY;
        pair.expires = now_ + ph.link->ttl;
        ph.ready_pair = pi;
        trace(EventKind::PAIR_READY, {ph.link->id, pair_name(pi)});
        if (!ph.op_running) {
            start_op(pair.phase);
        } else {
            queue_.push(pair.expires, EventKind::PAIR_EXPIRED, {pi});
        }
    }

    void on_pair_expired(std::size_t pi) {
        auto& pair = pairs_[pi];
        if (pair.status != PairStatus::READY) return; // consumed in time
        auto& ph = phases_[pair.phase];
        pair.status = PairStatus::EXPIRED;
        ++exec_.pairs.expired;
        ph.ready_pair.reset();
        trace(EventKind::PAIR_EXPIRED, {ph.link->id, pair_name(pi)});
        request_pair(pair.phase);
    }

    void start_op(std::size_t phase) {
        auto& ph = phases_[phase];
        auto& pair = pairs_[*ph.ready_pair];
        pair.status = PairStatus::CONSUMED;
        ++exec_.pairs.consumed;
        ph.ready_pair.reset();
        ph.op_running = true;
        ph.op_start = now_;
        queue_.push(now_ + ph.link->bell_op_time + ph.link->corr_time, EventKind::CLASSICAL_MSG_DELIVERED,
                    {phase, 0, true});
        if (ph.done + 1 < ph.ops) request_pair(phase);
    }

    void on_remote_op_done(std::size_t phase) {
        auto& ph = phases_[phase];
        ph.op_running = false;
        ++ph.done;
        exec_.remote_ops.push_back({ph.from, ph.to, ph.link->id, ph.op_start, now_, ph.op_fidelity});
        trace(EventKind::CLASSICAL_MSG_DELIVERED, {ph.from, ph.to, ph.link->id});
        if (ph.done < ph.ops) {
            if (ph.ready_pair) start_op(phase);
            return;
        }
        for (const auto& id : {ph.from, ph.to})
            if (--pending_phases_[id] == 0) finish_remote_fragment(id);
    }

    void finish_remote_fragment(const std::string& id) {
        for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
            const auto& g = groups_[gi];
            if (g.status != GroupStatus::RUNNING) continue;
            const auto& ids = g.planned.group.fragments;
            auto it = std::find(ids.begin(), ids.end(), id);
            if (it == ids.end()) continue;
            const auto& module = platform_.module(g.planned.group.module);
            queue_.push(std::max(now_, g.start) + fragment_runtime(fragments_.at(id), module), EventKind::FRAGMENT_END,
                        {gi, static_cast<std::size_t>(it - ids.begin())});
            return;
        }
    }

    void trace(EventKind kind, std::vector<std::string> ids) { exec_.trace.push_back({now_, kind, std::move(ids)}); }

    SimOutput finish() {
        std::vector<std::size_t> done;
        for (std::size_t gi = 0; gi < groups_.size(); ++gi)
            if (groups_[gi].status == GroupStatus::DONE) done.push_back(gi);
        std::sort(done.begin(), done.end(), [&](std::size_t x, std::size_t y) {
            const auto& a = groups_[x];
            const auto& b = groups_[y];
            return a.start != b.start ? a.start < b.start : a.planned.group.module < b.planned.group.module;
        });
        std::set<std::string> listed;
        for (auto gi : done) {
            const auto& g = groups_[gi];
            ScheduleEntry e = g.planned;
            e.start_ns = g.start;
            e.fragment_end_ns = g.ends;
            exec_.executed.entries.push_back(e);
            for (const auto& id : g.planned.group.fragments)
                if (listed.insert(id).second) exec_.executed.fragments.push_back(fragments_.at(id));
        }
        exec_.executed.omitted = omitted_;
        for (const auto& p : pairs_)
            if (p.status == PairStatus::PENDING || p.status == PairStatus::READY) ++exec_.pairs.live;

        SimOutput out;
        out.metrics = compute_metrics(jobs_, exec_, platform_);
        out.exec = std::move(exec_);
        out.improvement = std::move(improvement_);
        return out;
    }

    const std::vector<JobSpec>& jobs_;
    Platform platform_;
    SimConfig config_;
    RngStream rng_;
    EventQueue queue_;
    Nanos now_ = 0;

    ExecutionRecord exec_;
    std::vector<ImprovementLog> improvement_;
    std::vector<std::string> omitted_;
    std::vector<std::string> arrived_;
    bool replan_pending_ = false;
    std::size_t rr_cursor_ = 0;
    std::vector<LinkReservation> planned_reservations_;

    std::map<std::string, Fragment> fragments_;
    std::vector<PlannedGroup> groups_;
    std::map<std::string, std::deque<std::size_t>> module_queue_;
    std::map<std::string, bool> module_busy_;
    std::map<std::string, std::vector<std::size_t>> gang_members_;
    std::map<std::string, std::size_t> gang_started_;

    std::vector<FeedForward> feed_;
    std::map<std::string, std::vector<std::size_t>> successors_;
    std::set<std::pair<std::string, std::string>> delivered_;

    std::vector<Phase> phases_;
    std::map<std::string, int> pending_phases_;
    std::vector<Pair> pairs_;
    std::vector<LinkState> links_;
    std::map<std::string, std::size_t> link_index_;
};

} // namespace

SimOutput run_simulation(const std::vector<JobSpec>& workload, const Platform& platform, const SimConfig& config,
                         std::uint64_t seed) {
    validate_config(config.scheduler);
    Simulator sim(workload, validate_platform(platform), config, seed);
    return sim.run();
}

} // namespace interq
