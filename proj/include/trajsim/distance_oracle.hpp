#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "trajsim/graph.hpp"

namespace trajsim {

/// Exact shortest-path distances with lazy per-source caching.
///
/// The first query touching a source vertex runs one full Dijkstra pass and
/// publishes the distance row; later queries reuse it. Rows are immutable
/// once published, so readers can hold them without locking. Lookups are
/// canonicalized to the smaller endpoint's row: d(u,v) and d(v,u) read the
/// same array slot and are therefore bit-identical.
///
/// Unreachable pairs report +infinity.
class DistanceOracle {
public:
    explicit DistanceOracle(const Graph& graph);

    double distance(VertexId u, VertexId v) const;

    /// Distance row for `source` (computing it on first use).
    std::shared_ptr<const std::vector<double>> row(VertexId source) const;

    const Graph& graph() const { return graph_; }

    /// Number of Dijkstra passes run so far.
    std::size_t rows_computed() const;

private:
    const Graph& graph_;
    mutable std::vector<std::atomic<const std::vector<double>*>> published_;
    mutable std::mutex publish_mutex_;
    mutable std::unordered_map<VertexId, std::shared_ptr<const std::vector<double>>>
        owned_;
};

/// Per-query memo of e^{-d(u,v)} keyed by the canonical (min,max) vertex
/// pair. Not thread-safe; each worker keeps its own.
///
/// pin(v) precomputes the full row e^{-d(v,·)} as a dense array; lookups
/// whose canonical (smaller) endpoint is pinned become array reads. Pinned
/// and memoized paths read the same oracle row, so results are bit-identical
/// either way — pinning changes speed, never values.
class ExpWeightCache {
public:
    explicit ExpWeightCache(const DistanceOracle& oracle) : oracle_(&oracle) {}

    double weight(VertexId u, VertexId v) {
        if (u == v) return 1.0;
        if (u > v) std::swap(u, v);
        if (u < pinned_.size() && pinned_[u]) return pinned_[u][v];
        const std::uint64_t key =
            (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const double d = oracle_->distance(u, v);
        const double w = std::exp(-d);
        memo_.emplace(key, w);
        return w;
    }

    void pin(VertexId v);

    std::size_t size() const { return memo_.size(); }

private:
    const DistanceOracle* oracle_;
    std::unordered_map<std::uint64_t, double> memo_;
    std::vector<const double*> pinned_;
    std::vector<std::vector<double>> pinned_storage_;
};

}  // namespace trajsim
