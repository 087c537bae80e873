#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "interq/model.hpp"

namespace interq {

/// Dense symmetric weight matrix over the qubits of one job.
class InteractionGraph {
public:
    InteractionGraph(int vertices, std::span<const InteractionEdge> edges);

    int size() const { return n_; }
    int weight(int a, int b) const { return w_[static_cast<std::size_t>(a) * n_ + b]; }

private:
    int n_;
    std::vector<int> w_;
};

/// Splits `vertices` into two sides, the first of exactly `first_size` vertices,
/// minimising the crossing weight. Greedy graph growing from the lowest vertex
/// followed by Kernighan-Lin pair swaps. Both sides come back sorted.
std::pair<std::vector<int>, std::vector<int>> bisect(const InteractionGraph& g, std::vector<int> vertices,
                                                     int first_size);

/// Splits `vertices` into caps.size() parts with part i holding at most caps[i]
/// vertices, by recursive bisection with sizes proportional to the caps.
/// Requires sum(caps) >= vertices.size().
std::vector<std::vector<int>> split_by_capacity(const InteractionGraph& g, std::vector<int> vertices,
                                                const std::vector<int>& caps);

/// Sum of weights over edges whose endpoints lie in different parts.
std::int64_t crossing_weight(const InteractionGraph& g, const std::vector<std::vector<int>>& parts);

/// Part index of every vertex (-1 where unassigned).
std::vector<int> part_of(int vertices, const std::vector<std::vector<int>>& parts);

} // namespace interq
