#include "trajsim/store.hpp"

#include <string>

#include "trajsim/errors.hpp"

namespace trajsim {

TrajectoryStore::TrajectoryStore(std::vector<Trajectory> items)
    : items_(std::move(items)) {
    by_id_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto [it, inserted] = by_id_.emplace(items_[i].id(), i);
        if (!inserted)
            throw ValidationError("duplicate trajectory id " +
                                  std::to_string(items_[i].id()));
    }
}

const Trajectory* TrajectoryStore::find(TrajectoryId id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &items_[it->second];
}

std::size_t TrajectoryStore::index_of(TrajectoryId id) const {
    const auto it = by_id_.find(id);
    if (it == by_id_.end())
        throw ValidationError("unknown trajectory id " + std::to_string(id));
    return it->second;
}

}  // namespace trajsim
