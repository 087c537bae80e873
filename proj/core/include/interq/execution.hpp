#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "interq/model.hpp"

namespace interq {

/// Simulator event kinds, in the order they are processed at equal timestamps.
enum class EventKind {
    LINK_FREED,
    PAIR_READY,
    CLASSICAL_MSG_DELIVERED,
    PAIR_EXPIRED,
    FRAGMENT_END,
    GROUP_START,
    JOB_ARRIVAL,
};

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view text);

/// One line of the event trace.
///
/// Payload ids per kind:
///   JOB_ARRIVAL              job
///   GROUP_START              module, fragment...
///   FRAGMENT_END             fragment, module
///   CLASSICAL_MSG_DELIVERED  from, to            (feed-forward)
///                            from, to, link      (remote operation completed)
///   PAIR_READY/PAIR_EXPIRED  link, pair
///   LINK_FREED               link
struct TraceRecord {
    Nanos time_ns = 0;
    EventKind kind = EventKind::JOB_ARRIVAL;
    std::vector<std::string> ids;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// "time_ns<TAB>KIND<TAB>id,id,..." one record per line.
std::string format_trace(const std::vector<TraceRecord>& trace);
/// Inverse of format_trace. Throws Error(ParseError).
std::vector<TraceRecord> parse_trace(std::string_view text);

struct RemoteOpRecord {
    std::string from;
    std::string to;
    std::string link;
    Nanos start_ns = 0;
    Nanos end_ns = 0;
    double fidelity = 1.0;
};

struct PairCounts {
    std::int64_t generated = 0;
    std::int64_t consumed = 0;
    std::int64_t expired = 0;
    std::int64_t live = 0;
};

/// Everything a simulation run produced, before metrics.
struct ExecutionRecord {
    /// Groups with their realised start and fragment end times; link
    /// reservations are the realised pair generations.
    Schedule executed;
    std::vector<TraceRecord> trace;
    std::vector<RemoteOpRecord> remote_ops;
    /// Arrival time per job id.
    std::map<std::string, Nanos> arrivals;
    PairCounts pairs;
};

} // namespace interq
