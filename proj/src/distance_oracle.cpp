#include "trajsim/distance_oracle.hpp"

#include <queue>
#include <string>
#include <utility>

#include "trajsim/errors.hpp"

namespace trajsim {

DistanceOracle::DistanceOracle(const Graph& graph)
    : graph_(graph), published_(graph.vertex_count()) {
    owned_.reserve(64);
}

namespace {

std::vector<double> dijkstra(const Graph& g, VertexId source) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.vertex_count(), inf);
    dist[source] = 0.0;

    // (distance, vertex) min-heap; the vertex component makes pop order —
    // and therefore every floating-point relaxation sum — deterministic.
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;  // stale entry
        for (const Neighbor& n : g.neighbors(v)) {
            const double cand = d + n.weight;
            if (cand < dist[n.vertex]) {
                dist[n.vertex] = cand;
                heap.push({cand, n.vertex});
            }
        }
    }
    return dist;
}

}  // namespace

std::shared_ptr<const std::vector<double>> DistanceOracle::row(VertexId source) const {
    if (!graph_.contains_vertex(source))
        throw UnknownVertex("distance row for unknown vertex " + std::to_string(source));

    if (published_[source].load(std::memory_order_acquire)) {
        std::lock_guard<std::mutex> lock(publish_mutex_);
        return owned_.at(source);
    }

    // Concurrent first requests may both compute; exactly one row is kept.
    auto fresh = std::make_shared<const std::vector<double>>(dijkstra(graph_, source));
    std::lock_guard<std::mutex> lock(publish_mutex_);
    if (published_[source].load(std::memory_order_acquire)) return owned_.at(source);
    owned_.emplace(source, fresh);
    published_[source].store(fresh.get(), std::memory_order_release);
    return fresh;
}

double DistanceOracle::distance(VertexId u, VertexId v) const {
    if (u == v) {
        if (!graph_.contains_vertex(u))
            throw UnknownVertex("distance for unknown vertex " + std::to_string(u));
        return 0.0;
    }
    // Canonical orientation: always read the smaller endpoint's row, so
    // d(u,v) and d(v,u) are the same array slot, bit for bit.
    if (u > v) std::swap(u, v);
    if (!graph_.contains_vertex(v))
        throw UnknownVertex("distance for unknown vertex " + std::to_string(v));
    if (const auto* ready = published_[u].load(std::memory_order_acquire))
        return (*ready)[v];
    return (*row(u))[v];
}

std::size_t DistanceOracle::rows_computed() const {
    std::lock_guard<std::mutex> lock(publish_mutex_);
    return owned_.size();
}

void ExpWeightCache::pin(VertexId v) {
    const std::size_t n = oracle_->graph().vertex_count();
    if (pinned_.empty()) pinned_.assign(n, nullptr);
    if (v >= n || pinned_[v]) return;
    const auto row = oracle_->row(v);
    std::vector<double> weights(n);
    for (std::size_t u = 0; u < n; ++u) weights[u] = std::exp(-(*row)[u]);
    pinned_storage_.push_back(std::move(weights));
    pinned_[v] = pinned_storage_.back().data();
}

}  // namespace trajsim
