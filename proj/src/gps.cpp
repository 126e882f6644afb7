#include "trajsim/gps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "trajsim/errors.hpp"
#include "trajsim/synthetic.hpp"

namespace trajsim {

namespace {

double dist2(const std::pair<double, double>& a, const std::pair<double, double>& b) {
    const double dx = a.first - b.first;
    const double dy = a.second - b.second;
    return dx * dx + dy * dy;
}

}  // namespace

std::vector<GpsPoint> load_gps_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, path + ": missing header");
    ++lineno;
    {
        std::string header = line;
        header.erase(std::remove_if(header.begin(), header.end(),
                                    [](char c) { return c == ' ' || c == '\r'; }),
                     header.end());
        if (header != "trace_id,timestamp,x,y")
            throw ParseError(lineno, path + ": header must be trace_id,timestamp,x,y");
    }

    std::vector<GpsPoint> points;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        GpsPoint p;
        std::string ts, xs, ys;
        if (!std::getline(row, p.trace_id, ',') || !std::getline(row, ts, ',') ||
            !std::getline(row, xs, ',') || !std::getline(row, ys))
            throw ParseError(lineno, path + ": expected trace_id,timestamp,x,y");
        try {
            p.timestamp = std::stod(ts);
            p.x = std::stod(xs);
            p.y = std::stod(ys);
        } catch (const std::exception&) {
            throw ParseError(lineno, path + ": bad number");
        }
        points.push_back(std::move(p));
    }

    // Timestamp-sort within each trace; traces keep first-appearance order.
    std::stable_sort(points.begin(), points.end(),
                     [](const GpsPoint& a, const GpsPoint& b) {
                         return a.timestamp < b.timestamp;
                     });
    std::vector<std::string> trace_order;
    std::map<std::string, std::size_t> trace_rank;
    for (const GpsPoint& p : points)
        if (trace_rank.emplace(p.trace_id, trace_order.size()).second)
            trace_order.push_back(p.trace_id);
    std::stable_sort(points.begin(), points.end(),
                     [&](const GpsPoint& a, const GpsPoint& b) {
                         return trace_rank.at(a.trace_id) < trace_rank.at(b.trace_id);
                     });
    return points;
}

KMeansOutcome kmeans_points(const std::vector<std::pair<double, double>>& points,
                            std::size_t cluster_count, const GpsOptions& options) {
    const std::size_t n = points.size();
    const std::size_t k = std::min(cluster_count, n);
    KMeansOutcome out;
    if (n == 0 || k == 0) return out;

    Rng rng(options.seed);
    auto& centers = out.centers;
    centers.reserve(k);

    // k-means++ seeding: next center drawn with probability proportional to
    // the squared distance from the nearest already-chosen center.
    centers.push_back(points[rng.index(n)]);
    std::vector<double> best(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) best[i] = dist2(points[i], centers[0]);
    while (centers.size() < k) {
        const double total = std::accumulate(best.begin(), best.end(), 0.0);
        std::size_t chosen;
        if (total > 0.0) {
            const double target = rng.real() * total;
            double run = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                run += best[i];
                if (run > target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng.index(n);  // all points already sit on centers
        }
        centers.push_back(points[chosen]);
        for (std::size_t i = 0; i < n; ++i)
            best[i] = std::min(best[i], dist2(points[i], centers.back()));
    }

    auto& assign = out.assignment;
    assign.assign(n, 0);
    for (std::size_t iter = 0; iter < options.kmeans_max_iters; ++iter) {
        // Assignment: nearest center, ties to the smaller cluster id.
        for (std::size_t i = 0; i < n; ++i) {
            double best_d = std::numeric_limits<double>::infinity();
            std::uint32_t best_c = 0;
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double d = dist2(points[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best_c = static_cast<std::uint32_t>(c);
                }
            }
            assign[i] = best_c;
        }

        std::vector<double> sx(centers.size(), 0.0), sy(centers.size(), 0.0);
        std::vector<std::size_t> sizes(centers.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sx[assign[i]] += points[i].first;
            sy[assign[i]] += points[i].second;
            ++sizes[assign[i]];
        }

        double worst_move = 0.0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            std::pair<double, double> next;
            if (sizes[c] == 0) {
                // Re-seed an empty cluster from the point farthest from its
                // own center.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = dist2(points[i], centers[assign[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                next = points[far];
            } else {
                next = {sx[c] / static_cast<double>(sizes[c]),
                        sy[c] / static_cast<double>(sizes[c])};
            }
            worst_move = std::max(worst_move, std::sqrt(dist2(centers[c], next)));
            centers[c] = next;
        }
        if (worst_move < options.kmeans_tolerance) break;
    }

    // Final assignment against the settled centers.
    for (std::size_t i = 0; i < n; ++i) {
        double best_d = std::numeric_limits<double>::infinity();
        std::uint32_t best_c = 0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = dist2(points[i], centers[c]);
            if (d < best_d) {
                best_d = d;
                best_c = static_cast<std::uint32_t>(c);
            }
        }
        assign[i] = best_c;
    }
    return out;
}

GpsResult gps_to_graph(std::vector<GpsPoint> points, const GpsOptions& options) {
    if (options.cluster_count < 2)
        throw ValidationError("gps_to_graph: cluster_count must be at least 2");
    if (options.time_resolution <= 0.0)
        throw ValidationError("gps_to_graph: time_resolution must be positive");

    // Group into traces (the loader's ordering contract).
    std::vector<std::pair<std::string, std::vector<std::size_t>>> traces;
    std::map<std::string, std::size_t> trace_slot;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [it, fresh] = trace_slot.emplace(points[i].trace_id, traces.size());
        if (fresh) traces.push_back({points[i].trace_id, {}});
        traces[it->second].second.push_back(i);
    }
    bool any_pair = false;
    for (auto& [name, rows] : traces) {
        std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            return points[a].timestamp < points[b].timestamp;
        });
        if (rows.size() >= 2) any_pair = true;
    }
    if (points.empty() || !any_pair)
        throw TooFewPoints("gps_to_graph: need at least one trace with two points");

    std::vector<std::pair<double, double>> coords;
    coords.reserve(points.size());
    for (const GpsPoint& p : points) coords.push_back({p.x, p.y});
    const KMeansOutcome km = kmeans_points(coords, options.cluster_count, options);

    // Drop empty clusters and renumber survivors in center order.
    std::vector<std::uint32_t> remap(km.centers.size(),
                                     std::numeric_limits<std::uint32_t>::max());
    std::vector<char> used(km.centers.size(), 0);
    for (std::uint32_t c : km.assignment) used[c] = 1;
    GpsResult result{Graph(0, {}), TrajectoryStore(), {}, 0, 0};
    for (std::size_t c = 0; c < km.centers.size(); ++c) {
        if (!used[c]) continue;
        remap[c] = static_cast<std::uint32_t>(result.centers.size());
        result.centers.push_back(km.centers[c]);
    }

    std::set<std::pair<VertexId, VertexId>> edge_keys;
    std::vector<Trajectory> items;
    items.reserve(traces.size());
    TrajectoryId next_id = 0;

    for (const auto& [name, rows] : traces) {
        // Bucketed cluster runs: consecutive same-cluster points collapse.
        std::vector<std::pair<VertexId, TimePoint>> runs;
        for (std::size_t row : rows) {
            const VertexId cluster = remap[km.assignment[row]];
            const auto bucket =
                static_cast<TimePoint>(std::floor(points[row].timestamp /
                                                  options.time_resolution));
            if (!runs.empty() && runs.back().first == cluster) continue;
            runs.push_back({cluster, bucket});
        }

        std::vector<Step> steps;
        steps.reserve(runs.size());
        TimePoint cursor = runs.front().second;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const TimePoint raw_end =
                i + 1 < runs.size() ? runs[i + 1].second : runs[i].second + 1;
            TimePoint end = raw_end;
            if (end <= cursor) {  // zero-length after bucketing: widen one unit
                end = cursor + 1;
                ++result.repaired_steps;
            }
            steps.push_back({runs[i].first, Interval(cursor, end)});
            cursor = end;
        }
        for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
            const VertexId a = std::min(steps[i].vertex, steps[i + 1].vertex);
            const VertexId b = std::max(steps[i].vertex, steps[i + 1].vertex);
            edge_keys.insert({a, b});
        }

        Trajectory t(next_id, std::move(steps));
        if (!validate(t).empty()) {
            ++result.dropped_traces;
            continue;
        }
        ++next_id;
        items.push_back(std::move(t));
    }

    std::vector<Edge> edges;
    edges.reserve(edge_keys.size());
    for (const auto& [a, b] : edge_keys) {
        const double w =
            std::sqrt(dist2(result.centers[a], result.centers[b]));
        // Coincident centers cannot carry a zero-weight edge; clamp.
        edges.push_back({a, b, std::max(w, 1e-9)});
    }
    result.graph = Graph(result.centers.size(), std::move(edges));
    result.trajectories = TrajectoryStore(std::move(items));
    return result;
}

}  // namespace trajsim
