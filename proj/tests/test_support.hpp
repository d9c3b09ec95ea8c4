#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "specpart/graph.hpp"
#include "specpart/simplex.hpp"

namespace testsup {

using specpart::Edge;
using specpart::Graphd;
using specpart::Index;

inline Graphd path_graph(Index n) {
    std::vector<Edge<double>> edges;
    for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return Graphd::from_edges(n, edges);
}

inline Graphd complete_graph(Index n) {
    std::vector<Edge<double>> edges;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
    return Graphd::from_edges(n, edges);
}

inline Graphd star_graph(Index leaves) {
    std::vector<Edge<double>> edges;
    for (Index i = 1; i <= leaves; ++i) edges.push_back({0, i, 1.0});
    return Graphd::from_edges(leaves + 1, edges);
}

// Two K_m cliques on vertices [0, m) and [m, 2m), joined by edge (0, m).
inline Graphd two_cliques(Index m) {
    std::vector<Edge<double>> edges;
    for (Index i = 0; i < m; ++i)
        for (Index j = i + 1; j < m; ++j) {
            edges.push_back({i, j, 1.0});
            edges.push_back({m + i, m + j, 1.0});
        }
    edges.push_back({0, m, 1.0});
    return Graphd::from_edges(2 * m, edges);
}

// Random spanning tree plus `extra` random non-duplicate edges. Weighted
// draws edge weights from [0.5, 2.0], otherwise all weights are 1.
inline Graphd random_connected_graph(Index n, Index extra, std::mt19937_64& rng,
                                     bool weighted = false) {
    std::uniform_real_distribution<double> wdist(0.5, 2.0);
    std::set<std::pair<Index, Index>> used;
    std::vector<Edge<double>> edges;
    for (Index i = 1; i < n; ++i) {
        std::uniform_int_distribution<Index> pick(0, i - 1);
        const Index j = pick(rng);
        used.insert({std::min(i, j), std::max(i, j)});
        edges.push_back({j, i, weighted ? wdist(rng) : 1.0});
    }
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (Index e = 0; e < extra; ++e) {
        const Index u = pick(rng), v = pick(rng);
        if (u == v) continue;
        const auto key = std::make_pair(std::min(u, v), std::max(u, v));
        if (!used.insert(key).second) continue;
        edges.push_back({key.first, key.second, weighted ? wdist(rng) : 1.0});
    }
    return Graphd::from_edges(n, edges);
}

// Random composition of n into k parts, each at least 1.
inline specpart::PartitionSpec random_spec(Index n, int k, std::mt19937_64& rng) {
    specpart::PartitionSpec spec;
    spec.k = k;
    spec.target_sizes.assign(k, 1);
    std::uniform_int_distribution<int> pick(0, k - 1);
    for (Index i = k; i < n; ++i) ++spec.target_sizes[pick(rng)];
    return spec;
}

// Shuffled assignment whose realized sizes equal the spec's targets.
inline std::vector<int> assignment_with_sizes(const std::vector<Index>& sizes,
                                              std::mt19937_64& rng) {
    std::vector<int> assignment;
    for (std::size_t r = 0; r < sizes.size(); ++r)
        assignment.insert(assignment.end(), sizes[r], static_cast<int>(r));
    std::shuffle(assignment.begin(), assignment.end(), rng);
    return assignment;
}

}  // namespace testsup
