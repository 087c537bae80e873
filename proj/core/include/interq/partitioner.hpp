#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "interq/model.hpp"

namespace interq {

enum class CutKind { WIRE, GATE };

struct CutEdge {
    InteractionEdge edge;
    CutKind kind = CutKind::WIRE;
    int part_a = 0;
    int part_b = 0;
};

/// Reconstruction metadata that depends on the communication mode.
struct PlanMeta {
    /// LO: sampling overhead of the whole plan (16^k_wire * 9^k_gate).
    double kappa = 1.0;
    /// LOCC: parts [0, upstream_parts) feed parts [upstream_parts, size).
    int upstream_parts = 0;
    /// LOCC: (upstream part, downstream part) feed-forward pairs.
    std::vector<std::pair<int, int>> precedence;
    /// QCOMM: module each part was sized for.
    std::vector<std::string> part_modules;
    /// QCOMM: communication qubits per part (one per partner part).
    std::vector<int> ancillas;
};

struct PartitionPlan {
    CommMode mode = CommMode::LO;
    std::vector<std::vector<int>> parts;
    std::vector<CutEdge> cut_edges;
    int k_wire = 0;
    int k_gate = 0;
    PlanMeta meta;

    bool degenerate() const { return parts.size() <= 1; }
    /// Sum of the weights of all cut edges.
    std::int64_t crossing_weight() const;
};

/// Partitions a job for one communication mode.
///
/// A job that fits the largest module yields a single-part plan. Otherwise
/// LO and LOCC split into ceil(q / Q_max) balanced parts (LOCC rounds up to an
/// even count so upstream and downstream sides pair up), and QCOMM picks the
/// fewest largest modules whose capacities, less one communication qubit per
/// other part, cover the job and sizes one part per module. Returns nullopt
/// when no such split exists.
std::optional<PartitionPlan> find_partition(const JobSpec& job, CommMode mode, const Platform& platform);

/// 16^k_wire * 9^k_gate. Throws Error(OverheadOverflow) above 2^53.
double lo_cut_overhead(int k_wire, int k_gate);

/// 4^k_wire. Throws Error(OverheadOverflow) above 2^53.
double locc_cut_overhead(int k_wire);

std::vector<Fragment> expand_lo(const JobSpec& job, const PartitionPlan& plan, const Platform& platform);

/// Throws Error(NoClassicalLink) when a cut plan has no classical link for feed-forward.
std::vector<Fragment> expand_locc(const JobSpec& job, const PartitionPlan& plan, const Platform& platform);

/// Throws Error(NoQuantumLink) when two communicating parts sit on modules with no quantum link.
std::vector<Fragment> expand_qcomm(const JobSpec& job, const PartitionPlan& plan, const Platform& platform);

struct Candidate {
    CommMode mode = CommMode::LO;
    PartitionPlan plan;
    std::vector<Fragment> fragments;

    double total_cut_overhead() const;
    double total_comm_cost() const;
};

/// Candidate fragment sets for every mode the job admits and the platform
/// supports, in LO, LOCC, QCOMM order. Candidates whose summed cut overhead
/// exceeds cut_budget, or whose summed link cost exceeds comm_budget, are
/// dropped, as are plans that fail to expand.
std::vector<Candidate> intercomm_modes(const JobSpec& job, const Platform& platform);

} // namespace interq
