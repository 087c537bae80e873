#include "interq/link_timeline.hpp"

#include <algorithm>
#include <cmath>

namespace interq {

LinkTimeline::LinkTimeline(const std::vector<LinkReservation>& existing) : prior_(existing) {
    for (const auto& r : existing) {
        auto& v = by_link_[r.link];
        v.push_back({r.begin_ns, r.end_ns});
        longest_[r.link] = std::max(longest_[r.link], r.end_ns - r.begin_ns);
    }
    for (auto& [id, v] : by_link_)
        std::sort(v.begin(), v.end(), [](const Booking& a, const Booking& b) { return a.begin < b.begin; });
}

Nanos LinkTimeline::earliest_slot(const LinkProfile& link, Nanos not_before, Nanos duration) const {
    auto it = by_link_.find(link.id);
    if (it == by_link_.end()) return not_before;
    const auto& bookings = it->second;
    const Nanos longest = longest_.at(link.id);

    Nanos t = not_before;
    for (;;) {
        const Nanos end = t + std::max<Nanos>(duration, 1);
        // bookings overlapping [t, end) begin in (t - longest, end)
        auto b = std::lower_bound(bookings.begin(), bookings.end(), t - longest,
                                  [](const Booking& x, Nanos v) { return x.begin <= v; });
        int overlapping = 0;
        Nanos next = end;
        for (; b != bookings.end() && b->begin < end; ++b) {
            if (b->end <= t) continue;
            ++overlapping;
            next = std::min(next, b->end);
        }
        if (overlapping < link.parallelism) return t;
        t = next;
    }
}

void LinkTimeline::reserve(const LinkProfile& link, Nanos begin, Nanos end) {
    auto& v = by_link_[link.id];
    Booking b{begin, end};
    v.insert(std::upper_bound(v.begin(), v.end(), b, [](const Booking& x, const Booking& y) { return x.begin < y.begin; }),
             b);
    longest_[link.id] = std::max(longest_[link.id], end - begin);
    added_.push_back({link.id, begin, end, 1});
}

std::vector<LinkReservation> LinkTimeline::all() const {
    auto out = prior_;
    out.insert(out.end(), added_.begin(), added_.end());
    return out;
}

Nanos expected_generation_time(const LinkProfile& link) {
    return static_cast<Nanos>(std::llround(static_cast<double>(link.pair_time) / link.succ_prob));
}

Nanos plan_remote_phase(LinkTimeline& timeline, const LinkProfile& link, Nanos ready, int ops) {
    const Nanos gen = expected_generation_time(link);
    const Nanos op_time = link.bell_op_time + link.corr_time;
    Nanos request = ready;
    Nanos previous_end = ready;
    for (int k = 0; k < ops; ++k) {
        Nanos start_gen = timeline.earliest_slot(link, request, gen);
        timeline.reserve(link, start_gen, start_gen + gen);
        Nanos pair_ready = start_gen + gen;
        while (previous_end - pair_ready > link.ttl) {
            // expired while the previous operation ran; generate a fresh one
            start_gen = timeline.earliest_slot(link, pair_ready + link.ttl, gen);
            timeline.reserve(link, start_gen, start_gen + gen);
            pair_ready = start_gen + gen;
        }
        const Nanos op_start = std::max(pair_ready, previous_end);
        previous_end = op_start + op_time;
        request = op_start;
    }
    return previous_end;
}

} // namespace interq
