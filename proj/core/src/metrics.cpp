#include "interq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "interq/error.hpp"
#include "interq/fragment_id.hpp"

namespace interq {

namespace {

std::string job_of(const std::string& fragment) {
    auto parsed = parse_fragment_id(fragment);
    return parsed.parent ? *parsed.parent : fragment;
}

double mean_seconds(const std::vector<JobTiming>& jobs, Nanos (JobTiming::*field)() const) {
    if (jobs.empty()) return 0.0;
    long double sum = 0;
    for (const auto& j : jobs) sum += static_cast<long double>((j.*field)());
    return static_cast<double>(sum / static_cast<long double>(jobs.size())) / kNanosPerSecond;
}

} // namespace

QueueStats queue_stats(const std::vector<TraceRecord>& trace) {
    std::map<std::string, Nanos> arrival, start, end;
    QueueStats out;
    for (const auto& r : trace) {
        switch (r.kind) {
        case EventKind::JOB_ARRIVAL:
            if (!r.ids.empty()) arrival.emplace(r.ids[0], r.time_ns);
            break;
        case EventKind::GROUP_START:
            ++out.workload_changes;
            for (std::size_t i = 1; i < r.ids.size(); ++i) {
                const auto job = job_of(r.ids[i]);
                auto [it, fresh] = start.emplace(job, r.time_ns);
                if (!fresh) it->second = std::min(it->second, r.time_ns);
            }
            break;
        case EventKind::FRAGMENT_END:
            if (!r.ids.empty()) {
                const auto job = job_of(r.ids[0]);
                end[job] = std::max(end[job], r.time_ns);
            }
            break;
        default: break;
        }
    }

    for (const auto& [job, s] : start) {
        JobTiming t;
        t.job = job;
        t.start_ns = s;
        t.arrival_ns = arrival.count(job) ? arrival.at(job) : s;
        t.end_ns = end.count(job) ? end.at(job) : s;
        out.jobs.push_back(t);
    }
    if (out.jobs.empty()) return out;

    Nanos first = out.jobs.front().arrival_ns, last = out.jobs.front().end_ns;
    for (const auto& j : out.jobs) {
        first = std::min(first, j.arrival_ns);
        last = std::max(last, j.end_ns);
    }
    const Nanos makespan = last - first;
    out.makespan = to_seconds(makespan);
    out.avg_queue_time = mean_seconds(out.jobs, &JobTiming::wait_ns);
    out.avg_run_time = mean_seconds(out.jobs, &JobTiming::run_ns);
    out.avg_total_time = mean_seconds(out.jobs, &JobTiming::total_ns);

    // sweep the waiting-job count over time
    std::vector<std::pair<Nanos, int>> steps;
    for (const auto& j : out.jobs) {
        steps.emplace_back(j.arrival_ns, +1);
        steps.emplace_back(j.start_ns, -1);
    }
    std::sort(steps.begin(), steps.end());
    long double area = 0;
    int waiting = 0;
    Nanos prev = first;
    for (const auto& [t, delta] : steps) {
        area += static_cast<long double>(waiting) * static_cast<long double>(t - prev);
        waiting += delta;
        prev = t;
    }
    out.avg_queue_length = makespan > 0 ? static_cast<double>(area / static_cast<long double>(makespan)) : 0.0;
    return out;
}

double queue_length_from_waits(const QueueStats& stats) {
    if (stats.jobs.empty()) return 0.0;
    Nanos first = stats.jobs.front().arrival_ns, last = stats.jobs.front().end_ns;
    long double waits = 0;
    for (const auto& j : stats.jobs) {
        first = std::min(first, j.arrival_ns);
        last = std::max(last, j.end_ns);
        waits += static_cast<long double>(j.wait_ns());
    }
    return last > first ? static_cast<double>(waits / static_cast<long double>(last - first)) : 0.0;
}

double job_fidelity(const JobSpec& job, const ExecutionRecord& exec, const Platform& platform) {
    std::map<std::string, std::string> placed;
    for (const auto& e : exec.executed.entries)
        for (std::size_t i = 0; i < e.group.fragments.size() && i < e.fragment_end_ns.size(); ++i)
            placed[e.group.fragments[i]] = e.group.module;

    double log_f = 0.0;
    int fragments = 0;
    std::int64_t remote_required = 0;
    std::set<std::string> own;
    for (const auto& f : exec.executed.fragments) {
        if (f.job_id() != job.id) continue;
        auto it = placed.find(f.id);
        if (it == placed.end())
            throw Error(ErrorCode::IncompleteJob, "fragment '" + f.id + "' of job '" + job.id + "' never ran");
        const auto& m = platform.module(it->second);
        log_f += static_cast<double>(f.local_gates) * std::log(m.gate_fidelity_2q);
        log_f += static_cast<double>(f.data_qubits()) * std::log(m.meas_fidelity);
        log_f += static_cast<double>(f.cut_count) * std::log(m.gate_fidelity_2q * m.meas_fidelity);
        for (const auto& [partner, ops] : f.partners) remote_required += ops;
        own.insert(f.id);
        ++fragments;
    }
    if (fragments == 0) throw Error(ErrorCode::IncompleteJob, "job '" + job.id + "' has no executed fragments");

    std::int64_t remote_done = 0;
    for (const auto& op : exec.remote_ops) {
        if (!own.count(op.from)) continue;
        log_f += std::log(op.fidelity);
        ++remote_done;
    }
    if (2 * remote_done < remote_required)
        throw Error(ErrorCode::IncompleteJob, "job '" + job.id + "' is missing remote operations");
    return std::exp(log_f);
}

double uncut_reference_fidelity(const JobSpec& job, const Platform& platform) {
    double best = 0.0;
    for (const auto& m : platform.modules) {
        const double f = std::exp(static_cast<double>(job.two_qubit_gates()) * std::log(m.gate_fidelity_2q) +
                                  static_cast<double>(job.qubits) * std::log(m.meas_fidelity));
        best = std::max(best, f);
    }
    return best;
}

double lpst(double fidelity) {
    if (!(fidelity > 0.0)) throw Error(ErrorCode::ZeroFidelity, "fidelity must be positive");
    if (fidelity > 1.0) throw std::invalid_argument("fidelity above 1");
    return std::log(fidelity);
}

ComparativeFactors comparative_factors(const MetricsReport& run, const MetricsReport& baseline) {
    if (!(run.makespan > 0.0) || !(baseline.makespan > 0.0))
        throw Error(ErrorCode::ZeroMakespan, "comparison needs positive makespans");
    ComparativeFactors out;
    const double tp_run = static_cast<double>(run.jobs_completed) / run.makespan;
    const double tp_base = static_cast<double>(baseline.jobs_completed) / baseline.makespan;
    out.trf = tp_base > 0.0 ? tp_run / tp_base : 0.0;
    out.tirf = baseline.makespan / run.makespan;
    out.tiif = baseline.avg_tiif > 0.0 ? run.avg_tiif / baseline.avg_tiif : 0.0;
    return out;
}

MetricsReport compute_metrics(const std::vector<JobSpec>& workload, const ExecutionRecord& exec,
                              const Platform& platform) {
    const auto stats = queue_stats(exec.trace);
    MetricsReport r;
    r.avg_queue_length = stats.avg_queue_length;
    r.avg_queue_time = stats.avg_queue_time;
    r.avg_run_time = stats.avg_run_time;
    r.avg_total_time = stats.avg_total_time;
    r.workload_changes = stats.workload_changes;
    r.makespan = stats.makespan;

    std::set<std::string> started;
    for (const auto& j : stats.jobs) started.insert(j.job);

    double tiif_sum = 0.0, lpst_sum = 0.0;
    for (const auto& job : workload) {
        if (!started.count(job.id)) continue;
        const double f = job_fidelity(job, exec, platform);
        tiif_sum += f / uncut_reference_fidelity(job, platform);
        lpst_sum += lpst(f);
        ++r.jobs_completed;
    }
    r.jobs_omitted = static_cast<std::int64_t>(workload.size()) - r.jobs_completed;
    if (r.jobs_completed > 0) {
        r.avg_tiif = tiif_sum / static_cast<double>(r.jobs_completed);
        r.avg_lpst = lpst_sum / static_cast<double>(r.jobs_completed);
    }
    return r;
}

std::string metrics_to_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    j["avg_queue_length"] = r.avg_queue_length;
    j["avg_queue_time"] = r.avg_queue_time;
    j["avg_run_time"] = r.avg_run_time;
    j["avg_total_time"] = r.avg_total_time;
    j["workload_changes"] = r.workload_changes;
    j["trf"] = r.trf ? nlohmann::ordered_json(*r.trf) : nlohmann::ordered_json(nullptr);
    j["tirf"] = r.tirf ? nlohmann::ordered_json(*r.tirf) : nlohmann::ordered_json(nullptr);
    j["avg_tiif"] = r.avg_tiif;
    j["avg_lpst"] = r.avg_lpst;
    j["makespan"] = r.makespan;
    j["jobs_completed"] = r.jobs_completed;
    j["jobs_omitted"] = r.jobs_omitted;
    return j.dump(2) + "\n";
}

MetricsReport metrics_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        MetricsReport r;
        r.avg_queue_length = j.at("avg_queue_length").get<double>();
        r.avg_queue_time = j.at("avg_queue_time").get<double>();
        r.avg_run_time = j.at("avg_run_time").get<double>();
        r.avg_total_time = j.at("avg_total_time").get<double>();
        r.workload_changes = j.at("workload_changes").get<std::int64_t>();
        if (!j.at("trf").is_null()) r.trf = j.at("trf").get<double>();
        if (!j.at("tirf").is_null()) r.tirf = j.at("tirf").get<double>();
        r.avg_tiif = j.at("avg_tiif").get<double>();
        r.avg_lpst = j.at("avg_lpst").get<double>();
        r.makespan = j.at("makespan").get<double>();
        r.jobs_completed = j.at("jobs_completed").get<std::int64_t>();
        r.jobs_omitted = j.at("jobs_omitted").get<std::int64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("metrics: ") + e.what());
    }
}

} // namespace interq
