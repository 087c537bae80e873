#pragma once

#include <map>
#include <string>
#include <vector>

#include "interq/model.hpp"

namespace interq {

/// Bell-pair generation slots booked on each link, used by the planner to
/// keep concurrent generations within link parallelism.
class LinkTimeline {
public:
    LinkTimeline() = default;
    explicit LinkTimeline(const std::vector<LinkReservation>& existing);

    /// Earliest t >= not_before at which [t, t + duration) overlaps fewer than
    /// link.parallelism bookings.
    Nanos earliest_slot(const LinkProfile& link, Nanos not_before, Nanos duration) const;
    void reserve(const LinkProfile& link, Nanos begin, Nanos end);

    /// Reservations made through this timeline, in booking order.
    const std::vector<LinkReservation>& added() const { return added_; }
    /// Prior and new reservations.
    std::vector<LinkReservation> all() const;

private:
    struct Booking {
        Nanos begin;
        Nanos end;
    };
    std::map<std::string, std::vector<Booking>> by_link_; // sorted by begin
    std::map<std::string, Nanos> longest_;
    std::vector<LinkReservation> prior_;
    std::vector<LinkReservation> added_;
};

/// Planned duration of one pair generation: T_pair / p_succ, rounded.
Nanos expected_generation_time(const LinkProfile& link);

/// Plans `ops` serial remote operations over `link` for parts resident from
/// `ready`. The next pair is requested when the previous one is consumed; a
/// pair that waits past its ttl is regenerated. Books every generation on the
/// timeline and returns when the last correction completes.
Nanos plan_remote_phase(LinkTimeline& timeline, const LinkProfile& link, Nanos ready, int ops);

} // namespace interq
