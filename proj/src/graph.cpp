#include "trajsim/graph.hpp"

#include <stdexcept>
#include <string>

#include "trajsim/errors.hpp"

namespace trajsim {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    std::vector<std::size_t> degree(vertex_count_, 0);
    for (const Edge& e : edges_) {
        if (e.u >= vertex_count_ || e.v >= vertex_count_)
            throw UnknownVertex("edge endpoint " +
                                std::to_string(e.u >= vertex_count_ ? e.u : e.v) +
                                " outside vertex range");
        if (e.u == e.v)
            throw ValidationError("self-loop at vertex " + std::to_string(e.u));
        if (!(e.weight > 0.0))
            throw NonPositiveWeight("edge (" + std::to_string(e.u) + "," +
                                    std::to_string(e.v) + ") has weight " +
                                    std::to_string(e.weight));
        ++degree[e.u];
        ++degree[e.v];
    }

    offsets_.assign(vertex_count_ + 1, 0);
    for (std::size_t v = 0; v < vertex_count_; ++v)
        offsets_[v + 1] = offsets_[v] + degree[v];
    adjacency_.resize(offsets_[vertex_count_]);

    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
        adjacency_[cursor[e.u]++] = {e.v, e.weight};
        adjacency_[cursor[e.v]++] = {e.u, e.weight};
    }
}

std::span<const Neighbor> Graph::neighbors(VertexId v) const {
    if (!contains_vertex(v))
        throw UnknownVertex("vertex " + std::to_string(v) + " outside vertex range");
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool Graph::connected() const {
    if (vertex_count_ == 0) return true;
    std::vector<char> seen(vertex_count_, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (const Neighbor& n : neighbors(v)) {
            if (!seen[n.vertex]) {
                seen[n.vertex] = 1;
                ++reached;
                stack.push_back(n.vertex);
            }
        }
    }
    return reached == vertex_count_;
}

}  // namespace trajsim
