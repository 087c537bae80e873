#include "interq/graph_cut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace interq {

InteractionGraph::InteractionGraph(int vertices, std::span<const InteractionEdge> edges)
    : n_(vertices), w_(static_cast<std::size_t>(vertices) * vertices, 0) {
    for (const auto& e : edges) {
        w_[static_cast<std::size_t>(e.a) * n_ + e.b] += e.weight;
        w_[static_cast<std::size_t>(e.b) * n_ + e.a] += e.weight;
    }
}

namespace {

// Grows side A from the lowest vertex, always taking the vertex most strongly
// connected to A (ties to the lowest index).
std::vector<char> grow(const InteractionGraph& g, const std::vector<int>& vertices, int first_size) {
    std::vector<char> in_a(vertices.size(), 0);
    std::vector<long long> conn(vertices.size(), 0);
    for (int taken = 0; taken < first_size; ++taken) {
        std::size_t pick = vertices.size();
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (in_a[i]) continue;
            if (pick == vertices.size() || conn[i] > conn[pick]) pick = i;
        }
        in_a[pick] = 1;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (!in_a[i]) conn[i] += g.weight(vertices[pick], vertices[i]);
    }
    return in_a;
}

// One-pair-at-a-time Kernighan-Lin passes until a pass yields no positive gain.
void kernighan_lin(const InteractionGraph& g, const std::vector<int>& vertices, std::vector<char>& in_a) {
    const std::size_t n = vertices.size();
    constexpr int kMaxPasses = 32;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        // D[v] = external - internal connection weight
        std::vector<long long> d(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const int w = g.weight(vertices[i], vertices[j]);
                d[i] += (in_a[i] != in_a[j]) ? w : -w;
            }

        std::vector<char> locked(n, 0);
        std::vector<std::pair<std::size_t, std::size_t>> swaps;
        std::vector<long long> gains;
        const std::size_t side_a = static_cast<std::size_t>(std::count(in_a.begin(), in_a.end(), 1));
        const std::size_t steps = std::min(side_a, n - side_a);

        for (std::size_t step = 0; step < steps; ++step) {
            long long best = std::numeric_limits<long long>::min();
            std::size_t best_a = n, best_b = n;
            for (std::size_t a = 0; a < n; ++a) {
                if (locked[a] || !in_a[a]) continue;
                for (std::size_t b = 0; b < n; ++b) {
                    if (locked[b] || in_a[b]) continue;
                    const long long gain = d[a] + d[b] - 2LL * g.weight(vertices[a], vertices[b]);
                    if (gain > best) {
                        best = gain;
                        best_a = a;
                        best_b = b;
                    }
                }
            }
            locked[best_a] = locked[best_b] = 1;
            swaps.emplace_back(best_a, best_b);
            gains.push_back(best);
            for (std::size_t x = 0; x < n; ++x) {
                if (locked[x]) continue;
                const long long wa = g.weight(vertices[x], vertices[best_a]);
                const long long wb = g.weight(vertices[x], vertices[best_b]);
                d[x] += in_a[x] ? 2 * wa - 2 * wb : 2 * wb - 2 * wa;
            }
        }

        long long running = 0, best_total = 0;
        std::size_t best_prefix = 0;
        for (std::size_t k = 0; k < gains.size(); ++k) {
            running += gains[k];
            if (running > best_total) {
                best_total = running;
                best_prefix = k + 1;
            }
        }
        if (best_total <= 0) return;
        for (std::size_t k = 0; k < best_prefix; ++k) {
            in_a[swaps[k].first] = 0;
            in_a[swaps[k].second] = 1;
        }
    }
}

} // namespace

std::pair<std::vector<int>, std::vector<int>> bisect(const InteractionGraph& g, std::vector<int> vertices,
                                                     int first_size) {
    std::sort(vertices.begin(), vertices.end());
    if (first_size < 0 || first_size > static_cast<int>(vertices.size()))
        throw std::invalid_argument("bisect: first_size out of range");

    auto in_a = grow(g, vertices, first_size);
    kernighan_lin(g, vertices, in_a);

    std::pair<std::vector<int>, std::vector<int>> sides;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        (in_a[i] ? sides.first : sides.second).push_back(vertices[i]);
    return sides;
}

std::vector<std::vector<int>> split_by_capacity(const InteractionGraph& g, std::vector<int> vertices,
                                                const std::vector<int>& caps) {
    if (caps.empty()) throw std::invalid_argument("split_by_capacity: no parts");
    if (caps.size() == 1) {
        std::sort(vertices.begin(), vertices.end());
        return {std::move(vertices)};
    }

    const std::size_t half = caps.size() / 2;
    const std::vector<int> left(caps.begin(), caps.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<int> right(caps.begin() + static_cast<std::ptrdiff_t>(half), caps.end());
    const long long cap_l = std::accumulate(left.begin(), left.end(), 0LL);
    const long long cap_r = std::accumulate(right.begin(), right.end(), 0LL);
    const long long n = static_cast<long long>(vertices.size());
    if (cap_l + cap_r < n) throw std::invalid_argument("split_by_capacity: capacities too small");

    long long n_left = std::llround(static_cast<double>(n) * static_cast<double>(cap_l) /
                                    static_cast<double>(cap_l + cap_r));
    // keep at least one vertex per part where possible
    n_left = std::max(n_left, std::min<long long>(static_cast<long long>(left.size()), n));
    n_left = std::min(n_left, n - std::min<long long>(static_cast<long long>(right.size()), n));
    n_left = std::clamp(n_left, n - cap_r, cap_l);

    auto [a, b] = bisect(g, std::move(vertices), static_cast<int>(n_left));
    auto parts = split_by_capacity(g, std::move(a), left);
    auto rest = split_by_capacity(g, std::move(b), right);
    parts.insert(parts.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
    return parts;
}

std::vector<int> part_of(int vertices, const std::vector<std::vector<int>>& parts) {
    std::vector<int> owner(static_cast<std::size_t>(vertices), -1);
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (int v : parts[p]) owner[static_cast<std::size_t>(v)] = static_cast<int>(p);
    return owner;
}

std::int64_t crossing_weight(const InteractionGraph& g, const std::vector<std::vector<int>>& parts) {
    const auto owner = part_of(g.size(), parts);
    std::int64_t total = 0;
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b)
            if (owner[a] != owner[b]) total += g.weight(a, b);
    return total;
}

} // namespace interq
