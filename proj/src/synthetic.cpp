#include "trajsim/synthetic.hpp"

#include "trajsim/errors.hpp"

namespace trajsim {

TrajectoryStore generate_synthetic(const Graph& g, const WorkloadConfig& cfg) {
    if (g.vertex_count() == 0) throw ValidationError("cannot generate on an empty graph");
    if (cfg.min_len == 0 || cfg.min_len > cfg.max_len)
        throw ValidationError("invalid walk length range");
    if (cfg.min_dwell < 1 || cfg.min_dwell > cfg.max_dwell)
        throw ValidationError("invalid dwell range");
    if (cfg.start_min > cfg.start_max) throw ValidationError("invalid start-time range");

    Rng rng(cfg.seed);
    std::vector<Trajectory> items;
    items.reserve(cfg.count);
    for (std::size_t id = 0; id < cfg.count; ++id) {
        const auto len = static_cast<std::size_t>(
            rng.uniform(static_cast<std::int64_t>(cfg.min_len),
                        static_cast<std::int64_t>(cfg.max_len)));
        auto vertex = static_cast<VertexId>(rng.index(g.vertex_count()));
        TimePoint clock = rng.uniform(cfg.start_min, cfg.start_max);

        std::vector<Step> steps;
        steps.reserve(len);
        for (std::size_t i = 0; i < len; ++i) {
            const TimePoint dwell = rng.uniform(cfg.min_dwell, cfg.max_dwell);
            steps.push_back({vertex, Interval(clock, clock + dwell)});
            clock += dwell;
            const auto out = g.neighbors(vertex);
            if (out.empty()) break;  // isolated vertex: stationary one-step walk
            vertex = out[rng.index(out.size())].vertex;
        }
        items.emplace_back(static_cast<TrajectoryId>(id), std::move(steps));
    }
    return TrajectoryStore(std::move(items));
}

}  // namespace trajsim
