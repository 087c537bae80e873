#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "interq/execution.hpp"
#include "interq/metrics.hpp"
#include "interq/model.hpp"
#include "interq/scheduler.hpp"

namespace interq {

/// BURST plans each group of simultaneous arrivals on top of what is already
/// planned. EVENT_DRIVEN additionally re-plans every job that has not started
/// whenever a job arrives or a group finishes.
enum class ArrivalMode { BURST, EVENT_DRIVEN };

std::string_view to_string(ArrivalMode mode);
ArrivalMode arrival_mode_from_string(std::string_view text);

struct SimConfig {
    SchedulerConfig scheduler;
    ArrivalMode arrivals = ArrivalMode::BURST;
};

/// Seeded random source with independent named substreams.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    /// The generator for `name`, seeded from (seed, FNV-1a(name)) on first use.
    std::mt19937_64& substream(std::string_view name);

private:
    std::uint64_t seed_;
    std::map<std::string, std::mt19937_64, std::less<>> streams_;
};

/// Time until a requested pair is ready: attempts * T_pair, where the number
/// of attempts is geometric with success probability p_succ.
Nanos generate_pair(const LinkProfile& link, RngStream& rng);

struct EventPayload {
    std::size_t a = 0;
    std::size_t b = 0;
    bool remote = false;
};

struct Event {
    Nanos time = 0;
    EventKind kind = EventKind::JOB_ARRIVAL;
    std::uint64_t seq = 0;
    EventPayload payload;
};

/// Min-queue over (time, kind, seq).
class EventQueue {
public:
    void push(Nanos time, EventKind kind, EventPayload payload = {});
    Event pop();
    const Event& top() const { return heap_.top(); }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& x, const Event& y) const;
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

struct SimOutput {
    ExecutionRecord exec;
    MetricsReport metrics;
    /// One entry per scheduler invocation (InterQ policy only).
    std::vector<ImprovementLog> improvement;
};

/// Runs the workload to completion: arrivals trigger the configured policy,
/// groups start in planned order once their module is free, their precedence
/// messages are in and their QComm partners are ready; pair generation draws
/// from the seeded "pair_success" substream.
/// Throws Error(DeadlockDetected) if events run out with groups unfinished.
SimOutput run_simulation(const std::vector<JobSpec>& workload, const Platform& platform, const SimConfig& config,
                         std::uint64_t seed);

} // namespace interq
