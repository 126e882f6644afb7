#pragma once

#include <unordered_map>
#include <vector>

#include "trajsim/trajectory.hpp"

namespace trajsim {

/// Ordered collection of trajectories with id lookup. Order is load order
/// and is preserved everywhere (iteration, serialization, candidate sets),
/// which keeps every downstream artifact reproducible.
class TrajectoryStore {
public:
    TrajectoryStore() = default;
    /// Throws ValidationError on duplicate ids.
    explicit TrajectoryStore(std::vector<Trajectory> items);

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    const Trajectory& at(std::size_t index) const { return items_.at(index); }
    const std::vector<Trajectory>& items() const { return items_; }

    /// nullptr when absent.
    const Trajectory* find(TrajectoryId id) const;
    /// Store index for an id; throws ValidationError when absent.
    std::size_t index_of(TrajectoryId id) const;

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<Trajectory> items_;
    std::unordered_map<TrajectoryId, std::size_t> by_id_;
};

}  // namespace trajsim
