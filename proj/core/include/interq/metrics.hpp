#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "interq/execution.hpp"
#include "interq/model.hpp"

namespace interq {

struct JobTiming {
    std::string job;
    Nanos arrival_ns = 0;
    Nanos start_ns = 0;
    Nanos end_ns = 0;

    Nanos wait_ns() const { return start_ns - arrival_ns; }
    Nanos run_ns() const { return end_ns - start_ns; }
    Nanos total_ns() const { return end_ns - arrival_ns; }
};

struct QueueStats {
    /// Time-weighted number of arrived jobs that have not started, over the makespan.
    double avg_queue_length = 0.0;
    double avg_queue_time = 0.0;  ///< seconds
    double avg_run_time = 0.0;    ///< seconds
    double avg_total_time = 0.0;  ///< seconds
    std::int64_t workload_changes = 0;
    double makespan = 0.0;        ///< seconds, first arrival to last fragment end
    std::vector<JobTiming> jobs;  ///< started jobs, by id
};

/// Queue statistics replayed from an event trace. Jobs that arrive but never
/// start are left out.
QueueStats queue_stats(const std::vector<TraceRecord>& trace);

/// avg_queue_length recomputed as sum(wait) / makespan over the same jobs.
double queue_length_from_waits(const QueueStats& stats);

struct MetricsReport {
    double avg_queue_length = 0.0;
    double avg_queue_time = 0.0;
    double avg_run_time = 0.0;
    double avg_total_time = 0.0;
    std::int64_t workload_changes = 0;
    std::optional<double> trf;
    std::optional<double> tirf;
    double avg_tiif = 1.0;
    double avg_lpst = 0.0;
    double makespan = 0.0;
    std::int64_t jobs_completed = 0;
    std::int64_t jobs_omitted = 0;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Modelled success probability of one executed job: per fragment
/// F2q^local_gates * Fmeas^data_qubits * (F2q * Fmeas)^cut_count on its module,
/// times the recorded fidelity of every remote operation.
/// Throws Error(IncompleteJob) if a fragment of the job never finished.
double job_fidelity(const JobSpec& job, const ExecutionRecord& exec, const Platform& platform);

/// Fidelity of the job run uncut on the module where that is highest
/// (capacity ignored).
double uncut_reference_fidelity(const JobSpec& job, const Platform& platform);

/// Natural log of a fidelity in (0, 1]. Throws Error(ZeroFidelity) for F <= 0.
double lpst(double fidelity);

struct ComparativeFactors {
    double trf = 1.0;
    double tirf = 1.0;
    double tiif = 1.0;
};

/// trf  = throughput(run) / throughput(baseline), throughput = completed / makespan
/// tirf = makespan(baseline) / makespan(run)
/// tiif = avg_tiif(run) / avg_tiif(baseline)
/// Throws Error(ZeroMakespan).
ComparativeFactors comparative_factors(const MetricsReport& run, const MetricsReport& baseline);

/// Full report for one run. trf and tirf stay empty until compared.
MetricsReport compute_metrics(const std::vector<JobSpec>& workload, const ExecutionRecord& exec,
                              const Platform& platform);

/// Flat JSON object with the MetricsReport field names.
std::string metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const std::string& text);

} // namespace interq
