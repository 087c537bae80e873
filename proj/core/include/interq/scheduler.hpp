#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "interq/model.hpp"
#include "interq/partitioner.hpp"

namespace interq {

enum class Policy { INTERQ, SERIAL_RR };

std::string_view to_string(Policy policy);
/// Accepts "interq", "serial-rr" and the enum spellings. Throws Error(ParseError).
Policy policy_from_string(std::string_view text);

struct SchedulerConfig {
    CostWeights weights;
    Policy policy = Policy::INTERQ;
    int max_improvement_rounds = 64;
};

void validate_config(const SchedulerConfig& config);

/// What earlier scheduling rounds left behind: module and link commitments,
/// fragment completion times and the Serial RR cursor.
struct PlanningState {
    Nanos now = 0;
    std::map<std::string, Nanos> module_free;
    std::vector<LinkReservation> link_reservations;
    std::map<std::string, Nanos> fragment_end;
    /// Arrival time per job id.
    std::map<std::string, Nanos> release;
    std::size_t rr_cursor = 0;
};

/// Modules a unit may run on: all modules large enough, or only its pinned module.
std::vector<const ModuleProfile*> eligible_modules(const Fragment& unit, const Platform& platform);

/// Descending runtime on the fastest module the unit fits, ties by ascending id.
std::vector<Fragment> sort_by_runtime(std::vector<Fragment> units, const Platform& platform);

/// Greedy grouping. Each step fills one candidate group per module from the
/// runtime-sorted pool and keeps the cheapest (modules scanned by id, strict
/// improvement only, so the lowest id wins ties). Besides the three group
/// predicates a unit joins a group only if it may run on that module, all its
/// predecessors sit in already emitted groups, and it does not mix QComm
/// parts of two jobs or QComm parts with LOCC stages.
/// Candidate groups are scored with the wait each unit would see between
/// becoming ready and the group start, estimated from `context` and the
/// groups already emitted.
/// Throws Error(UnplaceableUnit) if some unit can never be grouped.
std::vector<Group> partition_interq(const std::vector<Fragment>& units, const Platform& platform,
                                    const CostWeights& weights, const PlanningState* context = nullptr);

/// Timed placement of groups in the given order. Every group starts at the
/// earliest time its module is free, its jobs have arrived and its precedence
/// messages are in; the groups holding the parts of one QComm job start
/// together. Remote phases are planned on the links with reservations.
/// `state`, when given, supplies prior commitments and receives the new ones.
/// Throws Error(UnresolvedPredecessor).
Schedule map_groups(const std::vector<Group>& groups, const Platform& platform, const FragmentIndex& fragments,
                    PlanningState* state = nullptr);

struct ImprovementStep {
    int round = 0;
    std::string job;
    CommMode mode = CommMode::LO;
    double z_before = 0.0;
    double z_after = 0.0;
};

struct ImprovementLog {
    double z_initial = 0.0;
    double z_final = 0.0;
    std::vector<ImprovementStep> accepted;
    int rounds = 0;
    bool hit_round_limit = false;
};

/// Greedy grouping, timed placement and repartitioning of the queue. Jobs too
/// wide for every module start from their cheapest candidate; jobs with no
/// usable candidate are listed in Schedule::omitted.
Schedule schedule_interq(const std::vector<JobSpec>& queue, const Platform& platform, const SchedulerConfig& config,
                         PlanningState* state = nullptr, ImprovementLog* log = nullptr);

/// Baseline: whole jobs in arrival order, one per group, dealt round-robin to
/// the modules large enough to hold them. Jobs wider than every module are omitted.
Schedule schedule_serial_rr(const std::vector<JobSpec>& queue, const Platform& platform,
                            PlanningState* state = nullptr);

/// Dispatches on config.policy.
Schedule schedule_queue(const std::vector<JobSpec>& queue, const Platform& platform, const SchedulerConfig& config,
                        PlanningState* state = nullptr, ImprovementLog* log = nullptr);

} // namespace interq
