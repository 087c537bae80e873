#pragma once

#include <string>
#include <string_view>

#include "interq/model.hpp"

namespace interq {

/// Local execution time of a fragment on a module:
///   depth * layer_time + shots_effective * shot_overhead.
/// Throws Error(CapacityExceeded) if the fragment does not fit the module.
Nanos fragment_runtime(const Fragment& f, const ModuleProfile& m);

/// Expected cost of one remote operation over a quantum link:
///   T_pair / p_succ + T_bell + T_corr   (ns).
/// Throws Error(NotQuantumLink) for classical links.
double remote_op_cost(const LinkProfile& link);

/// Fidelity of one remote operation: F_pair * F_2q(m) * F_meas(m).
/// Throws Error(NotQuantumLink) for classical links.
double remote_op_fidelity(const LinkProfile& link, const ModuleProfile& m);

/// Quantum link joining two modules with the lowest remote-op cost (ties by id), or nullptr.
const LinkProfile* cheapest_quantum_link(const Platform& p, std::string_view a, std::string_view b);

/// Quantum link with the lowest remote-op cost on the platform, or nullptr.
const LinkProfile* cheapest_quantum_link(const Platform& p);

enum class Feasibility { Feasible, CapacityExceeded, StageConflict, LinkBudget };

std::string_view to_string(Feasibility verdict);

/// Group predicates, checked in order: aggregate qubits within capacity,
/// no two fragments of the same parent in different stages, and per incident
/// link the summed Bell-pair demand within the link budget. Returns the first
/// violated predicate. Throws Error(InfeasibleGroup) if a fragment id does not
/// resolve.
Feasibility check_group_feasible(const Group& g, const ModuleProfile& m, const Platform& platform,
                                 const FragmentIndex& fragments);

struct GroupCostBreakdown {
    double a = 0.0;       ///< runtime imbalance, max T / min T - 1
    double b = 0.0;       ///< synchronisation delay and precedence slack, ns
    double c = 0.0;       ///< communication pressure, ns
    double h = 0.0;       ///< cut overhead, sum(Omega_cut - 1)
    double h_raw = 0.0;   ///< unshifted sum(Omega_cut), kept for auditing
    double total = 0.0;   ///< alpha*a + beta*b/ref + gamma*c/ref + eta*h
};

/// Timing context of a placed or tentatively placed group. When present the b
/// term is the summed wait of its fragments between readiness and the group
/// start (module queueing plus feed-forward delay); otherwise it is the summed
/// feed-forward delay of their precedence edges.
struct GroupTiming {
    std::vector<Nanos> sync_delay_ns;
};

/// Reference time normalising the b and c terms: max module layer_time * 1000
/// (1 ns if every layer time is zero).
double normalization_time(const Platform& p);

/// Communication cost of a REMOTE fragment placed on `module`, each remote op
/// priced on the cheapest quantum link from `module` to the partner's module.
/// Falls back to the platform-wide cheapest link where no such link exists.
double placed_comm_cost(const Fragment& f, std::string_view module, const Platform& platform,
                        const FragmentIndex& fragments);

/// Communication-aware group cost. Throws Error(InfeasibleGroup) when the
/// group fails check_group_feasible on m.
GroupCostBreakdown group_cost(const Group& g, const ModuleProfile& m, const Platform& platform,
                              const CostWeights& w, const FragmentIndex& fragments,
                              const GroupTiming* timing = nullptr);

/// Sum of group_cost totals over every schedule entry, using each entry's
/// realised synchronisation delays.
double schedule_objective(const Schedule& s, const Platform& platform, const CostWeights& w);

} // namespace interq
