#include "interq/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "interq/cost_model.hpp"
#include "interq/error.hpp"
#include "interq/fragment_id.hpp"
#include "interq/graph_cut.hpp"
#include "interq/platform.hpp"

namespace interq {

namespace {

constexpr double kMaxExactOverhead = 9007199254740992.0; // 2^53

double checked_power(double base, int exponent) {
    if (exponent < 0) throw std::invalid_argument("cut counts must be non-negative");
    const double value = std::pow(base, exponent);
    if (!(value <= kMaxExactOverhead))
        throw Error(ErrorCode::OverheadOverflow,
                    std::to_string(static_cast<int>(base)) + "^" + std::to_string(exponent) + " is out of range");
    return value;
}

std::vector<int> all_qubits(const JobSpec& job) {
    std::vector<int> v(static_cast<std::size_t>(job.qubits));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<CutEdge> cut_edges_of(const JobSpec& job, const std::vector<std::vector<int>>& parts) {
    const auto owner = part_of(job.qubits, parts);
    std::vector<CutEdge> cuts;
    for (const auto& e : job.edges) {
        const int pa = owner[static_cast<std::size_t>(e.a)], pb = owner[static_cast<std::size_t>(e.b)];
        if (pa != pb) cuts.push_back({e, CutKind::WIRE, std::min(pa, pb), std::max(pa, pb)});
    }
    return cuts;
}

std::int64_t inflated_shots(const JobSpec& job, double sampling_factor, double overhead) {
    const long double shots = static_cast<long double>(job.shots) * sampling_factor * overhead;
    if (!(shots <= 4.0e18L)) throw Error(ErrorCode::OverheadOverflow, "effective shots of job '" + job.id + "'");
    return static_cast<std::int64_t>(std::llround(static_cast<double>(shots)));
}

PartitionPlan single_part(const JobSpec& job, CommMode mode) {
    PartitionPlan plan;
    plan.mode = mode;
    plan.parts.push_back(all_qubits(job));
    if (mode == CommMode::QCOMM) plan.meta.ancillas = {0};
    return plan;
}

std::optional<PartitionPlan> partition_lo(const JobSpec& job, const Platform& platform) {
    const int cap = platform.max_capacity();
    const int k = (job.qubits + cap - 1) / cap;
    InteractionGraph g(job.qubits, job.edges);

    PartitionPlan plan;
    plan.mode = CommMode::LO;
    plan.parts = split_by_capacity(g, all_qubits(job), std::vector<int>(static_cast<std::size_t>(k), cap));
    plan.cut_edges = cut_edges_of(job, plan.parts);
    for (auto& c : plan.cut_edges) {
        // a single gate is cheaper to cut (9) than the wire carrying it (16)
        c.kind = c.edge.weight == 1 ? CutKind::GATE : CutKind::WIRE;
        (c.kind == CutKind::GATE ? plan.k_gate : plan.k_wire)++;
    }
    try {
        plan.meta.kappa = lo_cut_overhead(plan.k_wire, plan.k_gate);
    } catch (const Error&) {
        plan.meta.kappa = std::numeric_limits<double>::infinity();
    }
    return plan;
}

std::optional<PartitionPlan> partition_locc(const JobSpec& job, const Platform& platform) {
    const int cap = platform.max_capacity();
    const int pieces = (job.qubits + cap - 1) / cap;
    const int per_side = (pieces + 1) / 2;
    if (2 * per_side > job.qubits) return std::nullopt;
    InteractionGraph g(job.qubits, job.edges);

    PartitionPlan plan;
    plan.mode = CommMode::LOCC;
    plan.parts = split_by_capacity(g, all_qubits(job), std::vector<int>(static_cast<std::size_t>(2 * per_side), cap));
    plan.cut_edges = cut_edges_of(job, plan.parts);
    plan.k_wire = static_cast<int>(plan.cut_edges.size());
    plan.meta.upstream_parts = per_side;

    std::set<std::pair<int, int>> pairs;
    for (int n = 0; n < per_side; ++n) pairs.emplace(n, per_side + n);
    for (const auto& c : plan.cut_edges)
        if (c.part_a < per_side && c.part_b >= per_side) pairs.emplace(c.part_a, c.part_b);
    plan.meta.precedence.assign(pairs.begin(), pairs.end());
    return plan;
}

std::optional<PartitionPlan> partition_qcomm(const JobSpec& job, const Platform& platform) {
    std::vector<const ModuleProfile*> by_size;
    for (const auto& m : platform.modules) by_size.push_back(&m);
    std::sort(by_size.begin(), by_size.end(), [](const auto* x, const auto* y) {
        return x->capacity != y->capacity ? x->capacity > y->capacity : x->id < y->id;
    });

    for (std::size_t k = 2; k <= by_size.size(); ++k) {
        if (static_cast<std::size_t>(job.qubits) < k) break;
        const int allowance = static_cast<int>(k) - 1;
        std::vector<int> caps;
        long long total = 0;
        bool usable = true;
        for (std::size_t i = 0; i < k; ++i) {
            const int c = by_size[i]->capacity - allowance;
            usable = usable && c >= 1;
            caps.push_back(c);
            total += c;
        }
        if (!usable || total < job.qubits) continue;

        InteractionGraph g(job.qubits, job.edges);
        auto parts = split_by_capacity(g, all_qubits(job), caps);

        PartitionPlan plan;
        plan.mode = CommMode::QCOMM;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].empty()) continue;
            plan.parts.push_back(std::move(parts[i]));
            plan.meta.part_modules.push_back(by_size[i]->id);
        }
        plan.cut_edges = cut_edges_of(job, plan.parts);
        for (auto& c : plan.cut_edges) c.kind = CutKind::GATE;

        std::vector<std::set<int>> neighbours(plan.parts.size());
        for (const auto& c : plan.cut_edges) {
            neighbours[static_cast<std::size_t>(c.part_a)].insert(c.part_b);
            neighbours[static_cast<std::size_t>(c.part_b)].insert(c.part_a);
        }
        for (const auto& n : neighbours) plan.meta.ancillas.push_back(static_cast<int>(n.size()));
        return plan;
    }
    return std::nullopt;
}

void require_mode(const PartitionPlan& plan, CommMode mode) {
    if (plan.mode != mode)
        throw std::invalid_argument("plan mode " + std::string(to_string(plan.mode)) + " passed to " +
                                    std::string(to_string(mode)) + " expansion");
}

} // namespace

std::int64_t PartitionPlan::crossing_weight() const {
    std::int64_t total = 0;
    for (const auto& c : cut_edges) total += c.edge.weight;
    return total;
}

double lo_cut_overhead(int k_wire, int k_gate) {
    const double value = checked_power(16.0, k_wire) * checked_power(9.0, k_gate);
    if (!(value <= kMaxExactOverhead))
        throw Error(ErrorCode::OverheadOverflow,
                    "16^" + std::to_string(k_wire) + " * 9^" + std::to_string(k_gate) + " is out of range");
    return value;
}

double locc_cut_overhead(int k_wire) { return checked_power(4.0, k_wire); }

std::optional<PartitionPlan> find_partition(const JobSpec& job, CommMode mode, const Platform& platform) {
    if (!job.admits(mode) || platform.modules.empty()) return std::nullopt;
    if (job.qubits <= platform.max_capacity()) return single_part(job, mode);
    switch (mode) {
    case CommMode::LO: return partition_lo(job, platform);
    case CommMode::LOCC: return partition_locc(job, platform);
    case CommMode::QCOMM: return partition_qcomm(job, platform);
    }
    return std::nullopt;
}

std::vector<Fragment> expand_lo(const JobSpec& job, const PartitionPlan& plan, const Platform& platform) {
    require_mode(plan, CommMode::LO);
    if (plan.degenerate()) return {whole_job_fragment(job)};

    const double overhead = lo_cut_overhead(plan.k_wire, plan.k_gate);
    const auto shots = inflated_shots(job, platform.sampling_factor, overhead);
    const auto owner = part_of(job.qubits, plan.parts);

    std::vector<Fragment> out;
    for (std::size_t p = 0; p < plan.parts.size(); ++p) {
        Fragment f;
        f.id = lo_fragment_id(job.id, static_cast<int>(p) + 1);
        f.parent = job.id;
        f.stage = Stage::FLAT;
        f.qubits = static_cast<int>(plan.parts[p].size());
        f.depth = job.depth;
        f.shots_effective = shots;
        f.cut_overhead = overhead;
        out.push_back(std::move(f));
    }
    for (const auto& e : job.edges) {
        const int pa = owner[static_cast<std::size_t>(e.a)], pb = owner[static_cast<std::size_t>(e.b)];
        auto& f = out[static_cast<std::size_t>(std::min(pa, pb))];
        f.local_gates += e.weight;
        if (pa != pb) ++f.cut_count;
    }
    return out;
}

std::vector<Fragment> expand_locc(const JobSpec& job, const PartitionPlan& plan, const Platform& platform) {
    require_mode(plan, CommMode::LOCC);
    if (plan.degenerate()) return {whole_job_fragment(job)};

    const LinkProfile* link = fastest_classical_link(platform);
    if (!link) throw Error(ErrorCode::NoClassicalLink, "job '" + job.id + "' needs feed-forward");
    const Nanos delay = link->feed_forward_delay();

    const double overhead = locc_cut_overhead(plan.k_wire);
    const auto shots = inflated_shots(job, platform.sampling_factor, overhead);
    const auto owner = part_of(job.qubits, plan.parts);
    const int up = plan.meta.upstream_parts;

    std::vector<Fragment> out;
    for (std::size_t p = 0; p < plan.parts.size(); ++p) {
        const int idx = static_cast<int>(p);
        Fragment f;
        f.parent = job.id;
        if (idx < up) {
            f.id = upstream_fragment_id(job.id, idx + 1);
            f.stage = Stage::UPSTREAM;
        } else {
            f.id = downstream_fragment_id(job.id, idx - up + 1);
            f.stage = Stage::DOWNSTREAM;
        }
        f.qubits = static_cast<int>(plan.parts[p].size());
        f.depth = job.depth;
        f.shots_effective = shots;
        f.cut_overhead = overhead;
        out.push_back(std::move(f));
    }
    for (const auto& [u, v] : plan.meta.precedence)
        out[static_cast<std::size_t>(v)].precedence_in.push_back({out[static_cast<std::size_t>(u)].id, delay});
    for (const auto& e : job.edges) {
        const int pa = owner[static_cast<std::size_t>(e.a)], pb = owner[static_cast<std::size_t>(e.b)];
        auto& f = out[static_cast<std::size_t>(std::min(pa, pb))];
        f.local_gates += e.weight;
        if (pa != pb) ++f.cut_count;
    }
    return out;
}

std::vector<Fragment> expand_qcomm(const JobSpec& job, const PartitionPlan& plan, const Platform& platform) {
    require_mode(plan, CommMode::QCOMM);
    if (plan.degenerate()) return {whole_job_fragment(job)};
    if (!platform.has_link_kind(LinkKind::QUANTUM))
        throw Error(ErrorCode::NoQuantumLink, "job '" + job.id + "' needs remote operations");

    const auto n = plan.parts.size();
    const auto shots = inflated_shots(job, platform.sampling_factor, 1.0);
    const auto owner = part_of(job.qubits, plan.parts);

    std::vector<Fragment> out;
    for (std::size_t p = 0; p < n; ++p) {
        Fragment f;
        f.id = remote_fragment_id(job.id, static_cast<int>(p));
        f.parent = job.id;
        f.stage = Stage::REMOTE;
        f.ancilla_qubits = plan.meta.ancillas.at(p);
        f.qubits = static_cast<int>(plan.parts[p].size()) + f.ancilla_qubits;
        f.depth = job.depth;
        f.shots_effective = shots;
        f.pinned_module = plan.meta.part_modules.at(p);
        out.push_back(std::move(f));
    }

    std::vector<std::vector<int>> shared(n, std::vector<int>(n, 0));
    for (const auto& e : job.edges) {
        const auto pa = static_cast<std::size_t>(owner[static_cast<std::size_t>(e.a)]);
        const auto pb = static_cast<std::size_t>(owner[static_cast<std::size_t>(e.b)]);
        if (pa == pb) {
            out[pa].local_gates += e.weight;
        } else {
            shared[pa][pb] += e.weight;
            shared[pb][pa] += e.weight;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const int ops = shared[i][j];
            if (ops == 0) continue;
            const LinkProfile* link = cheapest_quantum_link(platform, *out[i].pinned_module, *out[j].pinned_module);
            if (!link)
                throw Error(ErrorCode::NoQuantumLink, "no quantum link between '" + *out[i].pinned_module +
                                                          "' and '" + *out[j].pinned_module + "'");
            out[i].partners[out[j].id] = ops;
            out[i].remote_ops += ops;
            out[i].bell_demand[link->id] += ops;
            out[i].comm_cost += ops * remote_op_cost(*link);
        }
    }
    return out;
}

double Candidate::total_cut_overhead() const {
    double total = 0.0;
    for (const auto& f : fragments) total += f.cut_overhead;
    return total;
}

double Candidate::total_comm_cost() const {
    double total = 0.0;
    for (const auto& f : fragments) total += f.comm_cost;
    return total;
}

std::vector<Candidate> intercomm_modes(const JobSpec& job, const Platform& platform) {
    std::vector<Candidate> out;
    for (CommMode mode : {CommMode::LO, CommMode::LOCC, CommMode::QCOMM}) {
        if (!job.admits(mode) || !platform.supports(mode)) continue;
        auto plan = find_partition(job, mode, platform);
        if (!plan) continue;

        Candidate c;
        c.mode = mode;
        try {
            switch (mode) {
            case CommMode::LO: c.fragments = expand_lo(job, *plan, platform); break;
            case CommMode::LOCC: c.fragments = expand_locc(job, *plan, platform); break;
            case CommMode::QCOMM: c.fragments = expand_qcomm(job, *plan, platform); break;
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::OverheadOverflow || e.code() == ErrorCode::NoClassicalLink ||
                e.code() == ErrorCode::NoQuantumLink)
                continue;
            throw;
        }
        if (c.total_cut_overhead() > platform.cut_budget) continue;
        if (c.total_comm_cost() > platform.comm_budget) continue;
        c.plan = std::move(*plan);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace interq
