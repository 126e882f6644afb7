#pragma once

#include <algorithm>
#include <cstddef>

#include "trajsim/distance_oracle.hpp"
#include "trajsim/errors.hpp"
#include "trajsim/time_interval.hpp"
#include "trajsim/trajectory.hpp"

namespace trajsim {

/// Early-abort control for similarity evaluation. When enabled, the merge
/// maintains an optimistic upper bound on the final similarity (every not yet
/// processed unit step is assumed to contribute weight 1) and stops as soon
/// as that bound falls strictly below `threshold`. Strictness matters:
/// candidates tying the threshold are always evaluated to completion.
struct SimilarityBudget {
    double threshold = 0.0;
    bool enabled = false;

    static SimilarityBudget none() { return {}; }
    static SimilarityBudget at_least(double threshold) { return {threshold, true}; }
};

struct SimilarityOutcome {
    double value = 0.0;        // exact similarity, or the upper bound at abort
    bool completed = true;     // false iff the budget aborted the merge
    std::size_t advances = 0;  // pointer increments performed by the merge
};

namespace detail {

/// Two-pointer merge over the step sequences of q and t, accumulating
/// length(s ∩ q_step ∩ t_step) · weight(q_vertex, t_vertex) over the visited
/// pairs. Advances the pointer whose current interval ends first; on equal
/// ends both advance. Visits at most |q| + |t| pointer positions.
///
/// The pair visiting order is symmetric in (q, t), so swapping the arguments
/// accumulates the identical addend sequence — similarity is bit-identical
/// under argument exchange as long as `weight` itself is symmetric.
template <class WeightFn>
SimilarityOutcome merge_similarity(const Trajectory& q, const Trajectory& t,
                                   const Interval& s, WeightFn&& weight,
                                   const SimilarityBudget& budget) {
    if (s.is_empty()) throw EmptyQueryInterval("similarity: empty query interval");

    const auto& qs = q.steps();
    const auto& ts = t.steps();
    const double inv_len = 1.0 / static_cast<double>(s.length());

    double sum = 0.0;
    std::size_t advances = 0;
    std::size_t i = 0, j = 0;
    while (i < qs.size() && j < ts.size()) {
        const Interval& qi = qs[i].when;
        const Interval& tj = ts[j].when;
        const Interval shared = intersect(intersect(qi, tj), s);
        if (!shared.is_empty())
            sum += static_cast<double>(shared.length()) * weight(qs[i].vertex, ts[j].vertex);

        // Frontier: everything before min(ends) is fully accounted for.
        const TimePoint frontier =
            std::clamp(std::min(qi.end(), tj.end()), s.start(), s.end());
        if (budget.enabled) {
            const double bound =
                (sum + static_cast<double>(s.end() - frontier)) * inv_len;
            if (bound < budget.threshold) return {bound, false, advances};
        }
        if (frontier >= s.end()) break;  // later pairs cannot touch s

        if (qi.end() < tj.end()) {
            ++i;
            ++advances;
        } else if (tj.end() < qi.end()) {
            ++j;
            ++advances;
        } else {
            ++i;
            ++j;
            advances += 2;
        }
    }
    return {sum * inv_len, true, advances};
}

}  // namespace detail

/// Sim(Q,T,s) = (1/|s|) · Σ over step pairs of |s ∩ t_i ∩ s_j| · e^{−d(v_i,u_j)}.
/// Value in [0,1]; 1 exactly when Q and T agree on all of s.
inline SimilarityOutcome similarity(const Trajectory& q, const Trajectory& t,
                                    const Interval& s, ExpWeightCache& weights,
                                    const SimilarityBudget& budget = {}) {
    return detail::merge_similarity(
        q, t, s, [&weights](VertexId u, VertexId v) { return weights.weight(u, v); },
        budget);
}

inline double similarity_value(const Trajectory& q, const Trajectory& t,
                               const Interval& s, ExpWeightCache& weights) {
    return similarity(q, t, s, weights).value;
}

/// Dist(Q,T,s) = 1 − Sim(Q,T,s).
inline double distance(const Trajectory& q, const Trajectory& t, const Interval& s,
                       ExpWeightCache& weights) {
    return 1.0 - similarity(q, t, s, weights).value;
}

/// Expands a distance over s to the distance over an enclosing interval t,
/// assuming the query's lifespan is exactly s (Q contributes nothing outside
/// its lifespan): Dist(Q,T,t) = 1 − |s|/|t| + (|s|/|t|)·Dist(Q,T,s).
inline double rescale_distance(double dist_s, const Interval& s, const Interval& t) {
    if (s.is_empty() || t.is_empty())
        throw EmptyQueryInterval("rescale_distance: empty interval");
    if (!s.contained_in(t))
        throw IntervalNotNested("rescale_distance: s not contained in t");
    const double ratio =
        static_cast<double>(s.length()) / static_cast<double>(t.length());
    return 1.0 - ratio + ratio * dist_s;
}

/// Pointer increments the merge performs on (q, t, s); always ≤ |q| + |t|.
inline std::size_t merge_step_count(const Trajectory& q, const Trajectory& t,
                                    const Interval& s) {
    return detail::merge_similarity(q, t, s, [](VertexId, VertexId) { return 0.0; },
                                    SimilarityBudget::none())
        .advances;
}

/// Reference evaluator: visits every (q step, t step) pair instead of merging.
/// Quadratic, but free of pruning and frontier logic — used to cross-check the
/// merge kernel (`query --oracle`). Contributing pairs appear in the same
/// lexicographic order the merge visits them and the final scaling is the same
/// multiply, so agreement with the merge is bit-exact, not approximate.
inline double naive_similarity(const Trajectory& q, const Trajectory& t,
                               const Interval& s, ExpWeightCache& weights) {
    if (s.is_empty()) throw EmptyQueryInterval("similarity: empty query interval");
    const double inv_len = 1.0 / static_cast<double>(s.length());
    double sum = 0.0;
    for (const Step& a : q.steps()) {
        for (const Step& b : t.steps()) {
            const Interval shared = intersect(intersect(a.when, b.when), s);
            if (!shared.is_empty())
                sum += static_cast<double>(shared.length()) *
                       weights.weight(a.vertex, b.vertex);
        }
    }
    return sum * inv_len;
}

}  // namespace trajsim
