#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "trajsim/distance_oracle.hpp"
#include "trajsim/pivot_index.hpp"
#include "trajsim/store.hpp"
#include "trajsim/time_interval.hpp"
#include "trajsim/trajectory.hpp"
#include "trajsim/tree_index.hpp"

namespace trajsim {

enum class IndexChoice { exact, pivot, tree };

std::string to_string(IndexChoice choice);
std::optional<IndexChoice> index_choice_from_string(const std::string& name);

struct QuerySpec {
    Trajectory query;
    /// Evaluation interval; empty means "use the query's lifespan".
    Interval s = Interval::empty();
    std::size_t k = 1;
    /// Radius for the index paths; ignored by exact scan.
    double r = 1.0;
    IndexChoice index = IndexChoice::exact;
    /// Early-abort evaluation against the running k-th best similarity.
    /// On or off, the returned results are identical.
    bool use_budget = true;
    std::size_t threads = 1;
};

struct ResultEntry {
    TrajectoryId id;
    double similarity;

    friend bool operator==(const ResultEntry&, const ResultEntry&) = default;
};

struct TopKResult {
    /// Sorted by similarity descending, ties by ascending id; length ≤ k.
    std::vector<ResultEntry> entries;
    std::size_t candidate_count = 0;
    double filter_ms = 0.0;
    double eval_ms = 0.0;
    /// Set when the query interval left the index's range and the engine
    /// answered by exact scan instead.
    bool fell_back_to_exact = false;
    /// Total merge pointer increments spent on candidate evaluation.
    std::size_t merge_advances = 0;
};

/// Top-k most similar stored trajectories for (Q, s): candidates come from
/// the chosen filter (exact scan = the whole store), each candidate's
/// similarity is evaluated with the budget pinned to the current k-th best,
/// and the heap orders by (similarity desc, id asc). Results are exact over
/// the candidate set and independent of thread count and budget setting.
TopKResult topk(const QuerySpec& spec, const TrajectoryStore& store,
                DistanceOracle& oracle, const PivotIndex* pivot = nullptr,
                const TreeIndex* tree = nullptr);

/// Similarity mass of result set A relative to result set B for the same
/// query: Σ_A Sim(Q,T,s) / Σ_B Sim(Q,T,s). nullopt when the reference sum
/// is zero (reported downstream as a defined "no reference" sentinel).
std::optional<double> ssr(const std::vector<TrajectoryId>& result_ids,
                          const std::vector<TrajectoryId>& reference_ids,
                          const Trajectory& q_restricted, const Interval& s,
                          const TrajectoryStore& store, DistanceOracle& oracle);

}  // namespace trajsim
