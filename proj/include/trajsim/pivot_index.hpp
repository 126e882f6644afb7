#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "trajsim/distance_oracle.hpp"
#include "trajsim/store.hpp"
#include "trajsim/time_interval.hpp"
#include "trajsim/trajectory.hpp"

namespace trajsim {

/// Visited vertices of a trajectory set ordered by (visit count desc,
/// vertex id asc); every step counts one visit. Prefixes of this list are
/// the pivot sets for every h, so growing h only ever adds constraints.
std::vector<VertexId> visit_ranking(const TrajectoryStore& store);

/// Ranking prefix of length min(h, #visited vertices).
std::vector<VertexId> select_pivots(const TrajectoryStore& store, std::size_t h);

/// Stationary single-step trajectory sitting at `vertex` across `span` —
/// the pivot trajectory shape; evaluated by the ordinary merge kernel.
Trajectory stationary_trajectory(VertexId vertex, const Interval& span);

/// Spatial pre-filter: h pivot vertices, the global interval t spanning all
/// indexed lifespans, and the matrix D[T][i] = Dist(T, P_i, t) where P_i
/// stays at pivot vertex i throughout t. A candidate survives a query iff
/// |Dist(Q,P_i,t) − D[T][i]| ≤ r for every pivot — the reverse triangle
/// inequality makes every trajectory within distance r of Q survive.
class PivotIndex {
public:
    static PivotIndex build(const TrajectoryStore& store, DistanceOracle& oracle,
                            std::size_t h, std::size_t threads = 1);

    const std::vector<VertexId>& pivots() const { return pivots_; }
    const Interval& global_interval() const { return span_; }
    const std::vector<TrajectoryId>& roster() const { return roster_; }
    /// Row-major |roster| × |pivots| distance matrix.
    const std::vector<double>& matrix() const { return matrix_; }
    std::size_t entry_count() const { return matrix_.size(); }

    double entry(std::size_t row, std::size_t pivot) const {
        return matrix_[row * pivots_.size() + pivot];
    }

    /// Query-side pivot distances Dist(Q, P_i, t), one merge per pivot.
    /// Throws QueryOutsideIndexInterval when s is not contained in the
    /// index's global interval.
    std::vector<double> query_distances(const Trajectory& q_restricted,
                                        const Interval& s,
                                        ExpWeightCache& weights) const;

    /// Ids surviving the radius filter, in roster order.
    std::vector<TrajectoryId> filter(const Trajectory& q_restricted, const Interval& s,
                                     double r, ExpWeightCache& weights) const;

    /// Survivors given precomputed query distances, as roster positions.
    std::vector<std::size_t> filter_rows(const std::vector<double>& query_dists,
                                         double r) const;

    void save(std::ostream& out) const;
    static PivotIndex load(std::istream& in);

    /// Build over an explicit roster subset with externally chosen pivots;
    /// the tree index uses this for its per-node blocks.
    static PivotIndex build_with_pivots(const TrajectoryStore& store,
                                        const std::vector<std::size_t>& member_rows,
                                        const std::vector<VertexId>& pivots,
                                        const Interval& span, DistanceOracle& oracle,
                                        ExpWeightCache& weights);

private:
    PivotIndex() = default;

    std::vector<VertexId> pivots_;
    Interval span_;
    std::vector<TrajectoryId> roster_;
    std::vector<double> matrix_;
};

/// [earliest start, latest end) over the store; empty store gives empty.
Interval global_interval(const TrajectoryStore& store);

}  // namespace trajsim
