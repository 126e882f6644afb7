#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajsim/graph.hpp"
#include "trajsim/store.hpp"

namespace trajsim {

struct GpsPoint {
    std::string trace_id;
    double timestamp = 0.0;  // seconds; decimals allowed
    double x = 0.0;          // planar meters
    double y = 0.0;
};

/// CSV with header "trace_id,timestamp,x,y". Points are sorted by timestamp
/// within each trace after loading; trace order follows first appearance.
std::vector<GpsPoint> load_gps_csv(const std::string& path);

struct GpsOptions {
    std::size_t cluster_count = 2;
    double time_resolution = 1.0;  // seconds per time unit
    std::uint64_t seed = 0;
    std::size_t kmeans_max_iters = 100;
    double kmeans_tolerance = 1e-6;
};

struct GpsResult {
    Graph graph;
    TrajectoryStore trajectories;
    std::vector<std::pair<double, double>> centers;  // cluster centers, id order
    std::size_t dropped_traces = 0;                  // unrepairable after bucketing
    std::size_t repaired_steps = 0;                  // zero-length steps widened
};

/// GPS traces → (graph, trajectory store): k-means++ clustering of the point
/// cloud gives the vertices (empty clusters are dropped and ids renumbered),
/// timestamps are bucketed at time_resolution, consecutive same-cluster
/// points merge into one step, and an edge connects every pair of clusters
/// some trace visits consecutively, weighted by center distance.
GpsResult gps_to_graph(std::vector<GpsPoint> points, const GpsOptions& options);

/// Seeded k-means++ over (x, y) with Lloyd iterations; returns per-point
/// cluster assignment and the center list (possibly fewer than requested
/// when clusters come out empty). Exposed for direct testing.
struct KMeansOutcome {
    std::vector<std::uint32_t> assignment;
    std::vector<std::pair<double, double>> centers;
};
KMeansOutcome kmeans_points(const std::vector<std::pair<double, double>>& points,
                            std::size_t cluster_count, const GpsOptions& options);

}  // namespace trajsim
