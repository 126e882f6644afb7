#pragma once

#include <cstdint>
#include <random>

#include "trajsim/graph.hpp"
#include "trajsim/store.hpp"

namespace trajsim {

/// Deterministic generator: mt19937_64 (whose output sequence the standard
/// pins down) with explicit bounded-draw rules, so outputs never depend on
/// standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [lo, hi], inclusive; lo ≤ hi required. Modulo draw: the
    /// bias is immaterial at workload ranges and the rule is portable.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % range);
    }

    /// Uniform index in [0, n), n ≥ 1.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    /// Uniform in [0, 1).
    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

struct WorkloadConfig {
    std::size_t count = 0;
    std::size_t min_len = 1;  // steps per trajectory
    std::size_t max_len = 1;
    std::int64_t min_dwell = 1;  // time units per step
    std::int64_t max_dwell = 1;
    TimePoint start_min = 0;  // start time drawn uniformly in [start_min, start_max]
    TimePoint start_max = 0;
    std::uint64_t seed = 0;
};

/// Uniform random walks over graph edges: start vertex uniform, length and
/// per-step dwell uniform in their ranges. Every output trajectory is valid;
/// identical config yields identical stores.
TrajectoryStore generate_synthetic(const Graph& g, const WorkloadConfig& cfg);

}  // namespace trajsim
