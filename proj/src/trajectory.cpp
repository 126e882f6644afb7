#include "trajsim/trajectory.hpp"

#include <string>

namespace trajsim {

Interval Trajectory::lifespan() const {
    if (steps_.empty()) return Interval::empty();
    return {steps_.front().when.start(), steps_.back().when.end()};
}

std::vector<std::string> validate(const Trajectory& t) {
    std::vector<std::string> problems;
    const auto& steps = t.steps();
    if (steps.empty()) {
        problems.push_back("empty step sequence");
        return problems;
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].when.is_empty())
            problems.push_back("step " + std::to_string(i) + ": empty interval");
        if (i == 0) continue;
        if (steps[i].when.start() != steps[i - 1].when.end())
            problems.push_back("step " + std::to_string(i) + ": gap at t=" +
                               std::to_string(steps[i - 1].when.end()) +
                               " (intervals must chain)");
        if (steps[i].vertex == steps[i - 1].vertex)
            problems.push_back("step " + std::to_string(i) + ": repeated vertex " +
                               std::to_string(steps[i].vertex));
    }
    return problems;
}

std::vector<std::string> validate(const Trajectory& t, const Graph& g) {
    std::vector<std::string> problems = validate(t);
    const auto& steps = t.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!g.contains_vertex(steps[i].vertex))
            problems.push_back("step " + std::to_string(i) + ": vertex " +
                               std::to_string(steps[i].vertex) + " not in graph");
    }
    return problems;
}

std::optional<Trajectory> restrict(const Trajectory& t, const Interval& s) {
    std::vector<Step> kept;
    for (const Step& step : t.steps()) {
        const Interval clipped = intersect(step.when, s);
        if (!clipped.is_empty()) kept.push_back({step.vertex, clipped});
    }
    if (kept.empty()) return std::nullopt;
    return Trajectory(t.id(), std::move(kept));
}

bool same_path(const Trajectory& a, const Trajectory& b) {
    return a.steps() == b.steps();
}

}  // namespace trajsim
