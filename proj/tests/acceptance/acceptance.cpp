// Acceptance suite. One PASS/FAIL line per criterion; exit status is nonzero
// when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "interq/cost_model.hpp"
#include "interq/error.hpp"
#include "interq/metrics.hpp"
#include "interq/partitioner.hpp"
#include "interq/platform.hpp"
#include "interq/scheduler.hpp"
#include "interq/sim.hpp"
#include "interq/workload_io.hpp"

#include "oracles.hpp"
#include "workloads.hpp"

using namespace interq;
using namespace interq::testing;

namespace {

// Pinned tolerances and sizes.
constexpr int kFeasibilityWorkloads = 1000;
constexpr int kFeasibilityJobs = 6;
constexpr double kFeasibilitySeconds = 300.0;
constexpr int kOverheadMaxK = 8;
constexpr int kMonotonicityWorkloads = 200;
constexpr int kOracleInstances = 500;
constexpr double kOracleRatio = 2.0;
constexpr double kOracleShare = 0.95;
constexpr double kOracleSlack = 1e-9; // relative, for greedy >= optimum
constexpr int kDeterminismPairs = 20;
constexpr int kPairSamples = 100'000;
constexpr double kPairMeanTolerance = 0.02;
constexpr double kOversizedSeconds = 10.0;
constexpr double kCrossArchSeconds = 30.0;
constexpr int kMinIonqModules = 5;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<JobSpec> random_workload(std::uint64_t seed, int jobs, int wmin, int wmax) {
    RandomWorkloadSpec r;
    r.jobs = jobs;
    r.min_width = wmin;
    r.max_width = wmax;
    r.min_depth = 5;
    r.max_depth = 100;
    r.seed = seed;
    return generate_random_workload(r);
}

SimConfig config_for(Policy policy, ArrivalMode arrivals = ArrivalMode::BURST) {
    SimConfig c;
    c.scheduler.policy = policy;
    c.arrivals = arrivals;
    return c;
}

// 1 ------------------------------------------------------------------------
Outcome feasibility_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    long schedules = 0, violations = 0;
    std::string first;
    auto note = [&](const std::vector<std::string>& v, const std::string& where) {
        violations += static_cast<long>(v.size());
        if (!v.empty() && first.empty()) first = where + ": " + v.front();
    };
    for (const auto& name : preset_names()) {
        const auto platform = platform_preset(name);
        for (int seed = 0; seed < kFeasibilityWorkloads; ++seed) {
            const auto workload = random_workload(static_cast<std::uint64_t>(seed), kFeasibilityJobs, 2, 160);
            const std::string where = fmt::format("{} seed {}", name, seed);
            for (auto policy : {Policy::INTERQ, Policy::SERIAL_RR}) {
                SchedulerConfig sc;
                sc.policy = policy;
                note(schedule_violations(schedule_queue(workload, platform, sc), platform), where + " plan");
                const auto run = run_simulation(workload, platform, config_for(policy), static_cast<std::uint64_t>(seed));
                note(schedule_violations(run.exec.executed, platform), where + " executed");
                note(trace_violations(run.exec), where + " trace");
                schedules += 2;
            }
        }
    }
    const double secs = seconds_since(t0);
    std::string detail = fmt::format("{} schedules, {} violations, {:.1f} s", schedules, violations, secs);
    if (!first.empty()) detail += "; first: " + first;
    return {violations == 0 && secs < kFeasibilitySeconds, detail};
}

// 2 ------------------------------------------------------------------------
Outcome overhead_laws() {
    int bad = 0;
    for (int k = 0; k <= kOverheadMaxK; ++k) {
        double p16 = 1, p9 = 1, p4 = 1;
        for (int i = 0; i < k; ++i) {
            p16 *= 16;
            p9 *= 9;
            p4 *= 4;
        }
        bad += lo_cut_overhead(k, 0) != p16;
        bad += lo_cut_overhead(0, k) != p9;
        bad += locc_cut_overhead(k) != p4;
    }
    return {bad == 0, fmt::format("k in [0,{}], {} mismatches", kOverheadMaxK, bad)};
}

// 3 ------------------------------------------------------------------------
Outcome objective_monotonicity() {
    const auto presets = preset_names();
    int accepted = 0, broken = 0, unterminated = 0;
    for (int seed = 0; seed < kMonotonicityWorkloads; ++seed) {
        const auto platform = platform_preset(presets[static_cast<std::size_t>(seed) % presets.size()]);
        const auto workload = random_workload(static_cast<std::uint64_t>(seed), 6, 2, 160);
        SchedulerConfig sc;
        ImprovementLog log;
        schedule_interq(workload, platform, sc, nullptr, &log);
        double z = log.z_initial;
        for (const auto& step : log.accepted) {
            ++accepted;
            if (!(step.z_after < step.z_before) || step.z_before != z) ++broken;
            z = step.z_after;
        }
        if (z != log.z_final) ++broken;
        if (log.hit_round_limit || log.rounds > sc.max_improvement_rounds) ++unterminated;
    }
    return {broken == 0 && unterminated == 0,
            fmt::format("{} workloads, {} accepted steps, {} non-decreasing, {} hit the round bound",
                        kMonotonicityWorkloads, accepted, broken, unterminated)};
}

// 4 ------------------------------------------------------------------------
Platform two_module_platform(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> cap(12, 40);
    Platform p;
    for (const char* id : {"m0", "m1"}) p.modules.push_back({id, cap(rng), 1'000, 1'000, 1.0, 0.995, 0.99});
    LinkProfile l;
    l.id = "m0--m1";
    l.a = "m0";
    l.b = "m1";
    l.classical_latency = 50'000;
    p.links.push_back(l);
    return validate_platform(p);
}

std::vector<Fragment> random_units(std::mt19937_64& rng, const Platform& p) {
    const int smallest = std::min(p.modules[0].capacity, p.modules[1].capacity);
    std::uniform_int_distribution<int> count(1, 4), width(2, smallest), depth(10, 400), shots(50, 400);
    std::bernoulli_distribution with_pair(0.25);
    const int n = count(rng);
    std::vector<Fragment> units;
    for (int i = 0; i < n; ++i) {
        Fragment f;
        f.id = "j" + std::to_string(i);
        f.qubits = width(rng);
        f.depth = depth(rng);
        f.shots_effective = shots(rng);
        units.push_back(f);
    }
    // sometimes turn the last two units into the two halves of one LOCC cut
    if (n >= 2 && with_pair(rng)) {
        auto& u = units[static_cast<std::size_t>(n - 2)];
        auto& d = units[static_cast<std::size_t>(n - 1)];
        u.parent = d.parent = "c";
        u.id = "c-U-1";
        d.id = "c-D-1";
        u.stage = Stage::UPSTREAM;
        d.stage = Stage::DOWNSTREAM;
        u.cut_overhead = d.cut_overhead = 4.0;
        d.precedence_in.push_back({u.id, p.links[0].feed_forward_delay()});
    }
    return units;
}

Outcome small_instance_oracle() {
    std::mt19937_64 rng(20240601);
    const CostWeights w;
    int within = 0, greedy_beats_optimum = 0, infeasible = 0;
    double worst = 0.0;
    for (int i = 0; i < kOracleInstances; ++i) {
        const auto platform = two_module_platform(rng);
        const auto units = random_units(rng, platform);
        PlanningState base;
        FragmentIndex index;
        for (const auto& u : units) {
            base.release[u.job_id()] = 0;
            index.emplace(u.id, u);
        }
        const auto optimum = exhaustive_optimum(units, platform, w, base);
        if (!optimum) {
            ++infeasible;
            continue;
        }
        PlanningState st = base;
        const auto groups = partition_interq(units, platform, w, &base);
        const double greedy = schedule_objective(map_groups(groups, platform, index, &st), platform, w);
        const double opt = optimum->objective;
        if (greedy < opt - kOracleSlack * std::max(1.0, std::abs(opt))) ++greedy_beats_optimum;
        const double ratio = opt > 0 ? greedy / opt : (greedy <= kOracleSlack ? 1.0 : INFINITY);
        worst = std::max(worst, ratio);
        within += ratio <= kOracleRatio;
    }
    const int scored = kOracleInstances - infeasible;
    const double share = scored > 0 ? static_cast<double>(within) / scored : 0.0;
    return {greedy_beats_optimum == 0 && infeasible == 0 && share >= kOracleShare,
            fmt::format("{} instances, ratio <= {:.1f} on {:.1f}% (need {:.0f}%), worst ratio {}, "
                        "greedy below optimum {}, infeasible {}",
                        kOracleInstances, kOracleRatio, 100 * share, 100 * kOracleShare,
                        std::isinf(worst) ? std::string("inf") : fmt::format("{:.3f}", worst), greedy_beats_optimum,
                        infeasible)};
}

// 5 ------------------------------------------------------------------------
Outcome determinism() {
    const auto presets = preset_names();
    int diffs = 0;
    for (int i = 0; i < kDeterminismPairs; ++i) {
        auto platform = platform_preset(presets[static_cast<std::size_t>(i) % presets.size()]);
        // lossy links on half the QComm runs so the pair stream is exercised
        if (i % 2 == 1)
            for (auto& l : platform.links)
                if (l.kind == LinkKind::QUANTUM) l.succ_prob = 0.5;
        const auto workload = random_workload(static_cast<std::uint64_t>(i), 6, 2, 160);
        const auto cfg = config_for(i % 4 < 2 ? Policy::INTERQ : Policy::SERIAL_RR,
                                    i % 3 == 0 ? ArrivalMode::EVENT_DRIVEN : ArrivalMode::BURST);
        const auto a = run_simulation(workload, platform, cfg, 7 + static_cast<std::uint64_t>(i));
        const auto b = run_simulation(workload, platform, cfg, 7 + static_cast<std::uint64_t>(i));
        diffs += format_trace(a.exec.trace) != format_trace(b.exec.trace);
        diffs += metrics_to_json(a.metrics) != metrics_to_json(b.metrics);
    }
    return {diffs == 0, fmt::format("{} paired runs, {} diffs", kDeterminismPairs, diffs)};
}

// 6 ------------------------------------------------------------------------
Outcome geometric_retry() {
    LinkProfile link;
    link.kind = LinkKind::QUANTUM;
    link.pair_time = 200'000;
    link.succ_prob = 0.5;
    RngStream rng(42);
    long double sum = 0;
    for (int i = 0; i < kPairSamples; ++i) sum += generate_pair(link, rng);
    const double mean = static_cast<double>(sum / kPairSamples);
    const double expected = 2.0 * static_cast<double>(link.pair_time);
    const double rel = std::abs(mean - expected) / expected;
    return {rel <= kPairMeanTolerance,
            fmt::format("mean {:.1f} ns vs {:.1f} ns, relative error {:.4f} (limit {:.2f})", mean, expected, rel,
                        kPairMeanTolerance)};
}

// 7 ------------------------------------------------------------------------
Outcome oversized_job() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto platform = platform_preset("IBM_LOCC");
    const auto workload = ibm_fifteen();
    const auto serial = run_simulation(workload, platform, config_for(Policy::SERIAL_RR), 0);
    const auto interq = run_simulation(workload, platform, config_for(Policy::INTERQ), 0);
    const auto f = comparative_factors(interq.metrics, serial.metrics);

    bool upstream = false, downstream = false;
    for (const auto& e : interq.exec.executed.entries)
        for (const auto& id : e.group.fragments) {
            upstream = upstream || id.rfind("10-U-", 0) == 0;
            downstream = downstream || id.rfind("10-D-", 0) == 0;
        }
    const double secs = seconds_since(t0);
    const bool pass = serial.metrics.jobs_completed == 14 && serial.metrics.jobs_omitted == 1 &&
                      interq.metrics.jobs_completed == 15 && interq.metrics.jobs_omitted == 0 && upstream &&
                      downstream && f.trf > 1.0 && f.tirf > 1.0 && serial.metrics.avg_tiif == 1.0 &&
                      interq.metrics.avg_tiif < 1.0 && secs < kOversizedSeconds;
    return {pass, fmt::format("serial {}/{} done/omitted, interq {}/{}, U/D fragments {}, TRF {:.3f}, TiRF {:.3f}, "
                              "TiIF serial {:.3f} interq {:.3f}, {:.2f} s",
                              serial.metrics.jobs_completed, serial.metrics.jobs_omitted,
                              interq.metrics.jobs_completed, interq.metrics.jobs_omitted,
                              upstream && downstream ? "yes" : "no", f.trf, f.tirf, serial.metrics.avg_tiif,
                              interq.metrics.avg_tiif, secs)};
}

// 8 ------------------------------------------------------------------------
Outcome cross_architecture() {
    const auto t0 = std::chrono::steady_clock::now();
    std::map<std::string, SimOutput> mixed, mqt;
    for (const auto& name : preset_names()) {
        const auto platform = platform_preset(name);
        mixed.emplace(name, run_simulation(mixed_eleven(), platform, config_for(Policy::INTERQ), 0));
        mqt.emplace(name, run_simulation(mqt_like(), platform, config_for(Policy::INTERQ), 0));
    }
    const double ibm_run = mixed.at("IBM_LOCC").metrics.avg_run_time;
    const bool ibm_fastest = ibm_run < mixed.at("IONQ_QCOMM").metrics.avg_run_time &&
                             ibm_run < mixed.at("ATOMIC_QCOMM").metrics.avg_run_time;

    std::set<std::string> ionq_modules;
    for (const auto& e : mixed.at("IONQ_QCOMM").exec.executed.entries)
        for (const auto& id : e.group.fragments)
            if (id.rfind("10_", 0) == 0) ionq_modules.insert(e.group.module);

    const double lp_ibm = mqt.at("IBM_LOCC").metrics.avg_lpst;
    const double lp_ionq = mqt.at("IONQ_QCOMM").metrics.avg_lpst;
    const double lp_atom = mqt.at("ATOMIC_QCOMM").metrics.avg_lpst;
    const bool all_done = mixed.at("IBM_LOCC").metrics.jobs_completed == 11 &&
                          mixed.at("IONQ_QCOMM").metrics.jobs_completed == 11 &&
                          mixed.at("ATOMIC_QCOMM").metrics.jobs_completed == 11;
    const double secs = seconds_since(t0);
    const bool pass = ibm_fastest && all_done && static_cast<int>(ionq_modules.size()) >= kMinIonqModules &&
                      lp_ionq > lp_ibm && lp_atom > lp_ibm && secs < kCrossArchSeconds;
    return {pass, fmt::format("avg run IBM {:.4f} IonQ {:.4f} Atom {:.4f} s; 11/11 done everywhere {}; "
                              "IonQ job 10 on {} modules; MQT-like LPST IBM {:.3f} IonQ {:.3f} Atom {:.3f}; {:.2f} s",
                              ibm_run, mixed.at("IONQ_QCOMM").metrics.avg_run_time,
                              mixed.at("ATOMIC_QCOMM").metrics.avg_run_time, all_done ? "yes" : "no",
                              ionq_modules.size(), lp_ibm, lp_ionq, lp_atom, secs)};
}

// 9 ------------------------------------------------------------------------
Outcome metric_identities() {
    int bad = 0, runs = 0;
    long jobs = 0;
    for (const auto& name : preset_names()) {
        const auto platform = platform_preset(name);
        for (auto policy : {Policy::INTERQ, Policy::SERIAL_RR}) {
            const auto out = run_simulation(ibm_fifteen(), platform, config_for(policy), 3);
            ++runs;
            if (out.metrics.jobs_completed == 0) continue;
            const auto f = comparative_factors(out.metrics, out.metrics);
            bad += !(f.trf == 1.0 && f.tirf == 1.0 && f.tiif == 1.0);
            for (const auto& j : queue_stats(out.exec.trace).jobs) {
                ++jobs;
                bad += j.total_ns() != j.wait_ns() + j.run_ns();
            }
        }
    }
    bad += lpst(1.0) != 0.0;
    return {bad == 0, fmt::format("{} runs, {} job decompositions, {} identity failures", runs, jobs, bad)};
}

// 10 -----------------------------------------------------------------------
Outcome preset_fidelity() {
    int bad = 0;
    auto expect = [&](bool ok) { bad += !ok; };
    const auto ibm = platform_preset("IBM_LOCC");
    const auto ionq = platform_preset("IONQ_QCOMM");
    const auto atom = platform_preset("ATOMIC_QCOMM");

    expect(ibm.modules.size() == 4 && ionq.modules.size() == 6 && atom.modules.size() == 4);
    for (const auto& m : ibm.modules) expect(m.capacity == 127);
    for (const auto& m : atom.modules) expect(m.capacity == 112);
    int aria = 0, forte = 0;
    for (const auto& m : ionq.modules) {
        aria += m.capacity == 25;
        forte += m.capacity == 36;
    }
    expect(aria + forte == 6 && aria > 0 && forte > 0);
    expect(ibm.cut_budget == 16.0);

    for (const auto& l : ibm.links)
        expect(l.kind == LinkKind::CLASSICAL && l.classical_latency == 500'000 && l.ctrl_latency == 1'500'000);
    auto quantum = [&](const Platform& p, Nanos latency, Nanos feed_forward, Nanos remote_gate, double rate_hz,
                       double fidelity, Nanos ttl) {
        expect(!p.links.empty());
        for (const auto& l : p.links) {
            expect(l.kind == LinkKind::QUANTUM);
            expect(l.classical_latency == latency);
            expect(l.corr_time == feed_forward && l.bell_op_time == remote_gate);
            expect(l.pair_time == pair_time_from_rate(rate_hz));
            expect(l.pair_fidelity == fidelity);
            expect(l.ttl == ttl);
            expect(l.parallelism == 1);
        }
        expect(p.sampling_factor == 2.0);
    };
    quantum(ionq, 2'000'000, 200'000, 200'000, 5.0e3, 0.99, 500'000'000);
    quantum(atom, 3'000'000, 300'000, 100'000, 3.0e3, 0.988, 300'000'000);
    expect(pair_time_from_rate(5.0e3) == 200'000 && pair_time_from_rate(3.0e3) == 333'333);
    return {bad == 0, fmt::format("{} mismatched cells", bad)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::off);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"feasibility suite", feasibility_suite},
        {"overhead laws", overhead_laws},
        {"objective monotonicity", objective_monotonicity},
        {"small-instance oracle", small_instance_oracle},
        {"determinism", determinism},
        {"geometric retry", geometric_retry},
        {"oversized-job handling", oversized_job},
        {"cross-architecture trade-off", cross_architecture},
        {"metric identities", metric_identities},
        {"preset fidelity", preset_fidelity},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << fmt::format("criterion {:>2} {:<30} {}  {}", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                                 o.detail)
                  << std::endl;
    }
    return all ? 0 : 1;
}
