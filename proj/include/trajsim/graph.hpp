#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace trajsim {

using VertexId = std::uint32_t;

struct Edge {
    VertexId u;
    VertexId v;
    double weight;
};

struct Neighbor {
    VertexId vertex;
    double weight;
};

/// Undirected graph with strictly positive edge weights, stored as a
/// compressed adjacency array. Immutable after construction.
///
/// The constructor rejects self-loops, non-positive weights, and endpoints
/// outside [0, vertex_count). Connectivity is a property of the data, not a
/// construction invariant: file loading enforces it, while programmatic
/// construction (e.g. from GPS clustering) may legitimately produce
/// disconnected graphs.
class Graph {
public:
    Graph(std::size_t vertex_count, std::vector<Edge> edges);

    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const Neighbor> neighbors(VertexId v) const;

    bool contains_vertex(VertexId v) const { return v < vertex_count_; }

    /// BFS reachability check from vertex 0 (true for the empty graph).
    bool connected() const;

private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
};

}  // namespace trajsim
