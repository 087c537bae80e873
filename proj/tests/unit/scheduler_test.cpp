#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "interq/cost_model.hpp"
#include "interq/error.hpp"
#include "interq/scheduler.hpp"
#include "interq/workload_io.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "workloads.hpp"

using namespace interq;
using namespace interq::testing;

namespace {

FragmentIndex index_of(const std::vector<Fragment>& fs) {
    FragmentIndex idx;
    for (const auto& f : fs) idx.emplace(f.id, f);
    return idx;
}

std::vector<std::string> ids(const std::vector<Fragment>& fs) {
    std::vector<std::string> out;
    for (const auto& f : fs) out.push_back(f.id);
    return out;
}

std::pair<Fragment, Fragment> locc_pair(const std::string& job, int qubits, int depth, Nanos delay) {
    Fragment u = unit(job + "-U-1", qubits, depth);
    Fragment d = unit(job + "-D-1", qubits, depth);
    u.parent = d.parent = job;
    u.stage = Stage::UPSTREAM;
    d.stage = Stage::DOWNSTREAM;
    d.precedence_in.push_back({u.id, delay});
    return {u, d};
}

const ScheduleEntry& entry_with(const Schedule& s, const std::string& id) {
    for (const auto& e : s.entries)
        if (std::find(e.group.fragments.begin(), e.group.fragments.end(), id) != e.group.fragments.end()) return e;
    throw std::runtime_error("no entry holds " + id);
}

Nanos end_of(const Schedule& s, const std::string& id) {
    const auto& e = entry_with(s, id);
    const auto at = std::find(e.group.fragments.begin(), e.group.fragments.end(), id) - e.group.fragments.begin();
    return e.fragment_end_ns[static_cast<std::size_t>(at)];
}

std::vector<JobSpec> uniform_jobs(int n, int qubits, int depth) {
    std::vector<JobSpec> jobs;
    for (int i = 1; i <= n; ++i) jobs.push_back(job_of(std::to_string(i), qubits, depth));
    return jobs;
}

} // namespace

TEST(Policy, Names) {
    EXPECT_EQ(policy_from_string("interq"), Policy::INTERQ);
    EXPECT_EQ(policy_from_string("serial-rr"), Policy::SERIAL_RR);
    EXPECT_EQ(policy_from_string(to_string(Policy::SERIAL_RR)), Policy::SERIAL_RR);
    EXPECT_THROW(policy_from_string("fifo"), Error);
}

TEST(Config, RoundBoundMustBePositive) {
    SchedulerConfig c;
    c.max_improvement_rounds = 0;
    EXPECT_THROW(validate_config(c), std::invalid_argument);
    c.max_improvement_rounds = 1;
    EXPECT_NO_THROW(validate_config(c));
}

TEST(SortByRuntime, DescendingWithIdTies) {
    const auto platform = platform_of({module("m", 10, 1)});
    EXPECT_EQ(ids(sort_by_runtime({unit("A", 1, 5), unit("B", 1, 9), unit("C", 1, 9)}, platform)),
              (std::vector<std::string>{"B", "C", "A"}));
    EXPECT_EQ(ids(sort_by_runtime({unit("A", 1, 5)}, platform)), (std::vector<std::string>{"A"}));
}

TEST(SortByRuntime, UsesFastestFittingModule) {
    // "big" only fits the slow module, so it ranks by the slow runtime
    const auto platform = platform_of({module("fast", 4, 1), module("slow", 20, 10)});
    EXPECT_EQ(ids(sort_by_runtime({unit("small", 2, 50), unit("big", 10, 6)}, platform)),
              (std::vector<std::string>{"big", "small"}));
}

TEST(SortByRuntime, OrderIndependent) {
    const auto platform = platform_preset("IONQ_QCOMM");
    std::mt19937_64 rng(4);
    std::vector<Fragment> units;
    for (int i = 0; i < 30; ++i)
        units.push_back(unit("j" + std::to_string(i), std::uniform_int_distribution<int>(1, 36)(rng),
                             std::uniform_int_distribution<int>(1, 6)(rng), 10));
    const auto expected = ids(sort_by_runtime(units, platform));
    for (int k = 0; k < 50; ++k) {
        std::shuffle(units.begin(), units.end(), rng);
        EXPECT_EQ(ids(sort_by_runtime(units, platform)), expected);
    }
}

TEST(PartitionInterq, PacksToCapacity) {
    const auto platform = platform_of({module("m", 127)});
    const auto groups = partition_interq({unit("1", 40, 5), unit("2", 40, 6), unit("3", 40, 7)}, platform, {});
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].fragments.size(), 3u);
}

TEST(PartitionInterq, StagesOfOneJobNeverShareAGroup) {
    const auto platform = platform_preset("IBM_LOCC");
    auto [u, d] = locc_pair("5", 10, 10, 2'000'000);
    const auto groups = partition_interq({u, d, unit("1", 20, 10)}, platform, {});
    for (const auto& g : groups) {
        const bool has_u = std::count(g.fragments.begin(), g.fragments.end(), "5-U-1") > 0;
        const bool has_d = std::count(g.fragments.begin(), g.fragments.end(), "5-D-1") > 0;
        EXPECT_FALSE(has_u && has_d);
    }
}

TEST(PartitionInterq, LowestModuleIdWinsTies) {
    const auto platform = platform_of({module("b", 10), module("a", 10)});
    const std::vector<Fragment> units{unit("1", 4, 10), unit("2", 4, 10)};
    const auto first = partition_interq(units, platform, {});
    ASSERT_EQ(first.size(), 1u);
    EXPECT_EQ(first[0].module, "a");
    EXPECT_EQ(partition_interq(units, platform, {}), first);
}

TEST(PartitionInterq, EveryUnitOnceInAFeasibleGroup) {
    const auto presets = preset_names();
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const auto platform = platform_preset(presets[static_cast<std::size_t>(trial) % 3]);
        std::vector<Fragment> units;
        const int n = std::uniform_int_distribution<int>(1, 25)(rng);
        for (int i = 0; i < n; ++i)
            units.push_back(unit("j" + std::to_string(i), std::uniform_int_distribution<int>(1, 25)(rng),
                                 std::uniform_int_distribution<int>(1, 50)(rng), 100));
        if (trial % 2) {
            auto [u, d] = locc_pair("c", 12, 20, 1000);
            units.push_back(u);
            units.push_back(d);
        }
        const auto idx = index_of(units);
        std::multiset<std::string> seen;
        std::set<std::string> grouped;
        for (const auto& g : partition_interq(units, platform, {})) {
            EXPECT_EQ(check_group_feasible(g, platform.module(g.module), platform, idx), Feasibility::Feasible);
            for (const auto& id : g.fragments) {
                seen.insert(id);
                // predecessors always come from an earlier group
                for (const auto& p : idx.at(id).precedence_in) EXPECT_TRUE(grouped.count(p.from));
            }
            grouped.insert(g.fragments.begin(), g.fragments.end());
        }
        EXPECT_EQ(seen.size(), units.size());
        for (const auto& u : units) EXPECT_EQ(seen.count(u.id), 1u);
    }
}

TEST(PartitionInterq, QcommPartsOfTwoJobsStayApart) {
    const auto platform = platform_of({module("a", 40), module("b", 40)}, {quantum("a", "b")}, CommMode::QCOMM);
    std::vector<Fragment> units;
    for (std::string job : {"1", "2"}) {
        Fragment p = unit(job + "_P", 5, 10), x = unit(job + "_X1", 5, 10);
        p.parent = x.parent = job;
        p.stage = x.stage = Stage::REMOTE;
        p.pinned_module = "a";
        x.pinned_module = "b";
        p.partners[x.id] = x.partners[p.id] = 2;
        p.remote_ops = x.remote_ops = 2;
        units.push_back(p);
        units.push_back(x);
    }
    const auto idx = index_of(units);
    for (const auto& g : partition_interq(units, platform, {})) {
        std::set<std::string> parents;
        for (const auto& id : g.fragments) parents.insert(idx.at(id).job_id());
        EXPECT_EQ(parents.size(), 1u);
    }
}

TEST(PartitionInterq, UnplaceableUnit) {
    try {
        partition_interq({unit("1", 11, 1)}, platform_of({module("m", 10)}), {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnplaceableUnit);
    }
}

TEST(PartitionInterq, NeverBelowExhaustiveOptimum) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 80; ++trial) {
        const auto platform = platform_of({module("m0", std::uniform_int_distribution<int>(8, 20)(rng), 1000, 100),
                                           module("m1", std::uniform_int_distribution<int>(8, 20)(rng), 1000, 100)},
                                          {classical("m0", "m1", 50'000)});
        std::vector<Fragment> units;
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int i = 0; i < n; ++i)
            units.push_back(unit("j" + std::to_string(i), std::uniform_int_distribution<int>(2, 8)(rng),
                                 std::uniform_int_distribution<int>(10, 300)(rng), 100));
        PlanningState base;
        for (const auto& u : units) base.release[u.job_id()] = 0;
        const auto opt = exhaustive_optimum(units, platform, {}, base);
        ASSERT_TRUE(opt);
        PlanningState st = base;
        const auto s = map_groups(partition_interq(units, platform, {}, &base), platform, index_of(units), &st);
        EXPECT_GE(schedule_objective(s, platform, {}), opt->objective - 1e-9);
    }
}

TEST(MapGroups, IndependentGroupsStartTogether) {
    const auto platform = platform_of({module("a", 10), module("b", 10)});
    const auto idx = index_of({unit("1", 5, 10), unit("2", 5, 20)});
    const auto s = map_groups({{{"1"}, "a", 0}, {{"2"}, "b", 0}}, platform, idx);
    ASSERT_EQ(s.entries.size(), 2u);
    EXPECT_EQ(s.entries[0].start_ns, 0);
    EXPECT_EQ(s.entries[1].start_ns, 0);
    EXPECT_EQ(s.entries[1].fragment_end_ns[0], 20'000);
}

TEST(MapGroups, FeedForwardDelayGatesTheSuccessor) {
    const auto platform = platform_of({module("a", 10, 1000), module("b", 10, 1000)}, {classical("a", "b")},
                                      CommMode::LOCC);
    auto [u, d] = locc_pair("1", 5, 10'000, 2'000'000);
    const auto s = map_groups({{{u.id}, "a", 0}, {{d.id}, "b", 0}}, platform, index_of({u, d}));
    EXPECT_EQ(end_of(s, u.id), 10'000'000);
    EXPECT_GE(entry_with(s, d.id).start_ns, 12'000'000);
    EXPECT_EQ(entry_with(s, d.id).start_ns, 12'000'000);
    // the wait counted for the successor is the feed-forward delay
    EXPECT_EQ(entry_with(s, d.id).sync_delay_ns[0], 2'000'000);
    ASSERT_EQ(s.precedence_edges.size(), 1u);
    EXPECT_EQ(s.precedence_edges[0], (PrecedenceEdge{u.id, d.id, 2'000'000}));
}

TEST(MapGroups, UnresolvedPredecessor) {
    const auto platform = platform_of({module("a", 10)});
    auto [u, d] = locc_pair("1", 5, 10, 0);
    try {
        map_groups({{{d.id}, "a", 0}, {{u.id}, "a", 0}}, platform, index_of({u, d}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnresolvedPredecessor);
    }
}

TEST(MapGroups, ModuleQueueing) {
    const auto platform = platform_of({module("a", 10)});
    const auto s = map_groups({{{"1"}, "a", 0}, {{"2"}, "a", 0}}, platform,
                              index_of({unit("1", 5, 10), unit("2", 5, 10)}));
    EXPECT_EQ(s.entries[1].start_ns, 10'000);
    EXPECT_EQ(s.entries[1].sync_delay_ns[0], 10'000);
}

namespace {

std::vector<Fragment> qcomm_job(const std::string& job, int ops) {
    Fragment p = unit(job + "_P", 4, 10), x = unit(job + "_X1", 4, 10);
    p.parent = x.parent = job;
    p.stage = x.stage = Stage::REMOTE;
    p.pinned_module = "a";
    x.pinned_module = "b";
    p.partners[x.id] = x.partners[p.id] = ops;
    p.remote_ops = x.remote_ops = ops;
    p.bell_demand["a--b"] = x.bell_demand["a--b"] = ops;
    return {p, x};
}

} // namespace

TEST(MapGroups, QcommPartsStartTogetherAfterTheRemotePhase) {
    const auto platform = platform_of({module("a", 10, 1000), module("b", 10, 1000)},
                                      {quantum("a", "b", 1000, 1.0, 100, 50)}, CommMode::QCOMM);
    auto units = qcomm_job("1", 3);
    units.push_back(unit("busy", 4, 7));
    // "busy" holds module b until 7000 ns, so both parts start then
    const auto s = map_groups({{{"busy"}, "b", 0}, {{"1_P"}, "a", 0}, {{"1_X1"}, "b", 0}}, platform, index_of(units));
    EXPECT_EQ(entry_with(s, "1_P").start_ns, 7'000);
    EXPECT_EQ(entry_with(s, "1_X1").start_ns, 7'000);
    // three serial ops: pair at +1000, ops end at 1150, 2150 (next pair booked at 1150) ... hand timeline
    // generation k starts when op k-1 starts; ready = gen_start + 1000; op = max(ready, prev_end) + 150
    Nanos prev = 7'000, request = 7'000;
    for (int k = 0; k < 3; ++k) {
        const Nanos ready = request + 1'000;
        const Nanos op = std::max(ready, prev);
        prev = op + 150;
        request = op;
    }
    EXPECT_EQ(end_of(s, "1_P"), prev + 10'000);
    EXPECT_EQ(end_of(s, "1_X1"), prev + 10'000);
    EXPECT_EQ(s.link_reservations.size(), 3u);
}

TEST(MapGroups, SharedLinkDelaysTheSecondRemotePhase) {
    const auto platform = platform_of({module("a", 10, 1000), module("b", 10, 1000)},
                                      {quantum("a", "b", 1000, 1.0, 100, 50)}, CommMode::QCOMM);
    const auto units = qcomm_job("1", 2);
    const auto idx = index_of(units);
    const std::vector<Group> groups{{{"1_P"}, "a", 0}, {{"1_X1"}, "b", 0}};
    const auto alone = map_groups(groups, platform, idx);

    PlanningState st;
    st.link_reservations.push_back({"a--b", 0, 5'000, 1});
    const auto shared = map_groups(groups, platform, idx, &st);
    EXPECT_EQ(shared.entries[0].start_ns, 0);
    // the first generation can only begin once the earlier booking ends
    EXPECT_EQ(shared.link_reservations.front().begin_ns, 5'000);
    EXPECT_EQ(end_of(shared, "1_P") - end_of(alone, "1_P"), 5'000);
    EXPECT_TRUE(schedule_violations(shared, platform).empty());
}

TEST(SerialRR, OneJobPerModule) {
    const auto platform = platform_of({module("m1", 10), module("m2", 10), module("m3", 10), module("m4", 10)});
    const auto s = schedule_serial_rr(uniform_jobs(4, 5, 10), platform);
    ASSERT_EQ(s.entries.size(), 4u);
    std::set<std::string> used;
    for (const auto& e : s.entries) {
        EXPECT_EQ(e.start_ns, 0);
        EXPECT_EQ(e.group.fragments.size(), 1u);
        used.insert(e.group.module);
    }
    EXPECT_EQ(used.size(), 4u);
}

TEST(SerialRR, SecondRoundWaitsForTheFirst) {
    const auto platform = platform_of({module("m1", 10), module("m2", 10), module("m3", 10), module("m4", 10)});
    const auto s = schedule_serial_rr(uniform_jobs(8, 5, 10), platform);
    ASSERT_EQ(s.entries.size(), 8u);
    for (int i = 4; i < 8; ++i) {
        const auto& later = s.entries[static_cast<std::size_t>(i)];
        const auto& earlier = s.entries[static_cast<std::size_t>(i - 4)];
        EXPECT_EQ(later.group.module, earlier.group.module);
        EXPECT_EQ(later.start_ns, earlier.end_ns());
    }
}

TEST(SerialRR, OversizedJobOmitted) {
    const auto s = schedule_serial_rr(ibm_fifteen(), platform_preset("IBM_LOCC"));
    EXPECT_EQ(s.entries.size(), 14u);
    EXPECT_EQ(s.omitted, (std::vector<std::string>{"10"}));
}

TEST(SerialRR, SkipsModulesTooSmall) {
    const auto platform = platform_of({module("a", 4), module("b", 10)});
    const auto s = schedule_serial_rr({job_of("1", 8), job_of("2", 8)}, platform);
    for (const auto& e : s.entries) EXPECT_EQ(e.group.module, "b");
}

TEST(ScheduleInterq, FixedPointWhenNothingNeedsCutting) {
    ImprovementLog log;
    const auto platform = platform_preset("IBM_LOCC");
    const auto jobs = uniform_jobs(6, 30, 20);
    const auto s = schedule_interq(jobs, platform, {}, nullptr, &log);
    EXPECT_TRUE(log.accepted.empty());
    EXPECT_EQ(log.z_initial, log.z_final);
    EXPECT_EQ(log.rounds, 1);

    // same as grouping and placing the whole jobs directly
    std::vector<Fragment> units;
    for (const auto& j : jobs) units.push_back(whole_job_fragment(j));
    PlanningState base;
    for (const auto& j : jobs) base.release[j.id] = 0;
    PlanningState st = base;
    const auto direct = map_groups(partition_interq(units, platform, {}, &base), platform, index_of(units), &st);
    EXPECT_EQ(s.entries, direct.entries);
}

TEST(ScheduleInterq, OversizedJobRunsAsLoccFragments) {
    const auto platform = platform_preset("IBM_LOCC");
    const auto s = schedule_interq(ibm_fifteen(), platform, {});
    EXPECT_TRUE(s.omitted.empty());
    std::set<std::string> jobs;
    bool upstream = false, downstream = false;
    for (const auto& e : s.entries)
        for (const auto& id : e.group.fragments) {
            jobs.insert(s.fragment_index().at(id).job_id());
            upstream = upstream || id.rfind("10-U-", 0) == 0;
            downstream = downstream || id.rfind("10-D-", 0) == 0;
        }
    EXPECT_EQ(jobs.size(), 15u);
    EXPECT_TRUE(upstream);
    EXPECT_TRUE(downstream);
    EXPECT_TRUE(schedule_violations(s, platform).empty());
}

TEST(ScheduleInterq, JobsAreWholeFullyFragmentedOrOmitted) {
    const auto presets = preset_names();
    for (int seed = 0; seed < 45; ++seed) {
        const auto platform = platform_preset(presets[static_cast<std::size_t>(seed) % 3]);
        RandomWorkloadSpec r{.jobs = 6, .min_width = 2, .max_width = 160, .min_depth = 5, .max_depth = 50,
                             .seed = static_cast<std::uint64_t>(seed)};
        const auto jobs = generate_random_workload(r);
        const auto s = schedule_interq(jobs, platform, {});
        std::map<std::string, std::vector<std::string>> by_job;
        for (const auto& e : s.entries)
            for (const auto& id : e.group.fragments) by_job[s.fragment_index().at(id).job_id()].push_back(id);
        for (const auto& job : jobs) {
            const bool omitted = std::count(s.omitted.begin(), s.omitted.end(), job.id) > 0;
            const auto it = by_job.find(job.id);
            EXPECT_NE(omitted, it != by_job.end()) << job.id;
            if (it == by_job.end()) continue;
            // every fragment the schedule defines for this job is placed
            std::size_t defined = 0, qubits = 0;
            for (const auto& f : s.fragments)
                if (f.job_id() == job.id) {
                    ++defined;
                    qubits += static_cast<std::size_t>(f.data_qubits());
                }
            EXPECT_EQ(defined, it->second.size());
            EXPECT_GE(qubits, static_cast<std::size_t>(job.qubits));
        }
        EXPECT_TRUE(schedule_violations(s, platform).empty());
    }
}

TEST(ScheduleInterq, Deterministic) {
    const auto platform = platform_preset("IONQ_QCOMM");
    const auto jobs = mixed_eleven();
    EXPECT_EQ(schedule_interq(jobs, platform, {}), schedule_interq(jobs, platform, {}));
}

TEST(ScheduleInterq, RoundBoundIsReported) {
    SchedulerConfig c;
    c.max_improvement_rounds = 1;
    ImprovementLog log;
    schedule_interq(uniform_jobs(3, 10, 10), platform_preset("IBM_LOCC"), c, nullptr, &log);
    // the single round found nothing to improve, so the bound was not what stopped it
    EXPECT_FALSE(log.hit_round_limit);
    EXPECT_EQ(log.rounds, 1);
}

TEST(ScheduleQueue, Dispatches) {
    const auto platform = platform_preset("IBM_LOCC");
    SchedulerConfig c;
    c.policy = Policy::SERIAL_RR;
    EXPECT_EQ(schedule_queue(ibm_fifteen(), platform, c), schedule_serial_rr(ibm_fifteen(), platform));
    c.policy = Policy::INTERQ;
    EXPECT_EQ(schedule_queue(ibm_fifteen(), platform, c), schedule_interq(ibm_fifteen(), platform, c));
}
