#include "interq/execution.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "interq/error.hpp"

namespace interq {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 7> kKindNames{{
    {EventKind::LINK_FREED, "LINK_FREED"},
    {EventKind::PAIR_READY, "PAIR_READY"},
    {EventKind::CLASSICAL_MSG_DELIVERED, "CLASSICAL_MSG_DELIVERED"},
    {EventKind::PAIR_EXPIRED, "PAIR_EXPIRED"},
    {EventKind::FRAGMENT_END, "FRAGMENT_END"},
    {EventKind::GROUP_START, "GROUP_START"},
    {EventKind::JOB_ARRIVAL, "JOB_ARRIVAL"},
}};

} // namespace

std::string_view to_string(EventKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "?";
}

EventKind event_kind_from_string(std::string_view text) {
    for (const auto& [k, name] : kKindNames)
        if (name == text) return k;
    throw Error(ErrorCode::ParseError, "unknown event kind '" + std::string(text) + "'");
}

std::string format_trace(const std::vector<TraceRecord>& trace) {
    std::string out;
    for (const auto& r : trace) {
        out += std::to_string(r.time_ns);
        out += '\t';
        out += to_string(r.kind);
        out += '\t';
        for (std::size_t i = 0; i < r.ids.size(); ++i) {
            if (i) out += ',';
            out += r.ids[i];
        }
        out += '\n';
    }
    return out;
}

std::vector<TraceRecord> parse_trace(std::string_view text) {
    std::vector<TraceRecord> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) continue;

        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos)
            throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": expected 3 fields");

        TraceRecord r;
        const auto time = line.substr(0, t1);
        auto [ptr, ec] = std::from_chars(time.data(), time.data() + time.size(), r.time_ns);
        if (ec != std::errc{} || ptr != time.data() + time.size())
            throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": bad time");
        r.kind = event_kind_from_string(line.substr(t1 + 1, t2 - t1 - 1));
        auto ids = line.substr(t2 + 1);
        while (!ids.empty()) {
            const auto comma = ids.find(',');
            r.ids.emplace_back(ids.substr(0, comma));
            ids = comma == std::string_view::npos ? std::string_view{} : ids.substr(comma + 1);
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace interq
