#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "trajsim/distance_oracle.hpp"
#include "trajsim/pivot_index.hpp"
#include "trajsim/store.hpp"
#include "trajsim/time_interval.hpp"

namespace trajsim {

struct TreeEntry {
    TrajectoryId id;
    Interval lifespan;
};

struct TreeNode {
    /// Split point over ending times; absent at leaves.
    std::optional<TimePoint> median;
    /// Trajectories stored here: straddlers of `median` at internal nodes,
    /// everything at leaves.
    std::vector<TreeEntry> roster;
    /// Row-major |roster| × h matrix of Dist(T, P_i, t) over the global
    /// pivots and the global interval.
    std::vector<double> matrix;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
};

/// Temporal filter: a binary tree splitting trajectories by the lower median
/// m of their ending times — end ≤ m goes left, start ≥ m goes right,
/// straddlers stay at the node — with a pivot block at every node. A query
/// visits only subtrees whose time range can intersect s, applies the pivot
/// radius filter to each visited roster, and keeps survivors whose lifespan
/// actually intersects s. Pivot vertices and the reference interval are
/// global, so query-side pivot distances are computed once per query.
class TreeIndex {
public:
    static TreeIndex build(const TrajectoryStore& store, DistanceOracle& oracle,
                           std::size_t h, std::size_t leaf_min,
                           std::size_t threads = 1);

    /// Candidate ids in ascending id order. Throws QueryOutsideIndexInterval
    /// when s is not contained in the global interval.
    std::vector<TrajectoryId> query(const Trajectory& q_restricted, const Interval& s,
                                    double r, ExpWeightCache& weights) const;

    const std::vector<VertexId>& pivots() const { return pivots_; }
    const Interval& global_interval() const { return span_; }
    std::size_t leaf_min() const { return leaf_min_; }
    const TreeNode& root() const { return *root_; }

    std::size_t node_count() const;
    std::size_t stored_count() const;  // Σ roster sizes
    std::size_t entry_count() const;   // Σ roster sizes × h

    void save(std::ostream& out) const;
    static TreeIndex load(std::istream& in);

private:
    TreeIndex() = default;

    std::vector<VertexId> pivots_;
    Interval span_;
    std::size_t leaf_min_ = 0;
    std::unique_ptr<TreeNode> root_;
};

}  // namespace trajsim
