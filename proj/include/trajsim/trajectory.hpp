#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajsim/graph.hpp"
#include "trajsim/time_interval.hpp"

namespace trajsim {

using TrajectoryId = std::uint64_t;

/// One unit of travel: the moving object sits at `vertex` throughout
/// the half-open time interval `when`.
struct Step {
    VertexId vertex;
    Interval when;

    friend bool operator==(const Step&, const Step&) = default;
};

/// A trajectory is a temporally chained sequence of steps: each step's
/// interval starts exactly where the previous one ended, and consecutive
/// steps visit distinct vertices. Construction does not enforce these
/// rules (files may carry malformed records that callers want to inspect);
/// use validate() to check them.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(TrajectoryId id, std::vector<Step> steps)
        : id_(id), steps_(std::move(steps)) {}

    TrajectoryId id() const { return id_; }
    const std::vector<Step>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }

    /// Travel interval: [first start, last end), empty for an empty trajectory.
    /// Meaningful only for chained (validated) trajectories.
    Interval lifespan() const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    TrajectoryId id_ = 0;
    std::vector<Step> steps_;
};

/// Human-readable violations of the trajectory well-formedness rules,
/// optionally including vertex-existence checks against a graph.
/// Empty result means the trajectory is valid.
std::vector<std::string> validate(const Trajectory& t);
std::vector<std::string> validate(const Trajectory& t, const Graph& g);

/// Restricts `t` to the sub-interval `s` of its lifespan: keeps the steps
/// that intersect `s` and clips the first/last kept step to `s`. Returns
/// nullopt when `s` does not intersect the lifespan at all. The restriction
/// of a valid trajectory is valid, and its lifespan is exactly `s` when
/// `s` lies inside the original lifespan.
std::optional<Trajectory> restrict(const Trajectory& t, const Interval& s);

/// True when both trajectories visit the same vertex sequence with the same
/// step intervals (ids may differ).
bool same_path(const Trajectory& a, const Trajectory& b);

}  // namespace trajsim
