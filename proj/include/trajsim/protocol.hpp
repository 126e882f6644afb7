#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajsim/query_engine.hpp"

namespace trajsim {

struct ProtocolConfig {
    std::size_t query_count = 100;
    std::vector<std::size_t> k_values = {1, 4, 16, 64};
    std::vector<IndexChoice> indexes = {IndexChoice::exact, IndexChoice::pivot,
                                        IndexChoice::tree};
    double r = 0.1;
    std::size_t h = 8;
    std::size_t leaf_min = 100;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t histogram_bins = 100;
    /// Zero every wall-clock field in the written reports so reruns are
    /// byte-identical; the measured values themselves are inherently noisy.
    bool deterministic_output = false;
};

struct QueryRecord {
    std::size_t query_index = 0;  // position in the sampled query list
    TrajectoryId query_id = 0;
    IndexChoice index = IndexChoice::exact;
    std::size_t k = 0;
    std::vector<ResultEntry> results;
    std::size_t candidate_count = 0;
    double filter_ms = 0.0;
    double eval_ms = 0.0;
    std::optional<double> ssr_vs_exact;  // nullopt = zero-reference sentinel
};

struct AggregateRow {
    IndexChoice index = IndexChoice::exact;
    std::size_t k = 0;
    double mean_query_ms = 0.0;
    double std_query_ms = 0.0;
    double mean_candidates = 0.0;
    std::optional<double> mean_ssr;  // over queries with a defined SSR
    double build_ms = 0.0;           // 0 for exact
    std::size_t index_entries = 0;   // stored matrix entries, 0 for exact
};

struct ProtocolReport {
    ProtocolConfig config;
    std::vector<TrajectoryId> query_ids;
    std::vector<QueryRecord> queries;      // one per (index, k, query)
    std::vector<AggregateRow> aggregates;  // one per (index, k)
    /// Distribution of exact similarities over every (query, trajectory)
    /// pair, evaluated without the budget; bin width = 1 / bins, last bin
    /// closed at 1.
    std::vector<std::uint64_t> histogram;
    double pivot_build_ms = 0.0;
    double tree_build_ms = 0.0;
    std::size_t pivot_entries = 0;
    std::size_t tree_entries = 0;
};

/// Seeded query sample: store indices, shuffled, first `count` (the whole
/// store when it is smaller).
std::vector<std::size_t> sample_query_indices(std::size_t store_size,
                                              std::size_t count, std::uint64_t seed);

/// The evaluation drill: sample queries with s = lifespan(Q), run every
/// configured index at every k, score heuristic paths against the exact
/// reference (SSR), collect the exact similarity histogram. One untimed
/// warm-up query precedes the timed loops; the exact phase runs first so
/// shortest-path rows are paid for once, before any index is timed.
ProtocolReport run_protocol(const TrajectoryStore& store, const Graph& graph,
                            DistanceOracle& oracle, const ProtocolConfig& config);

/// Writes <prefix>_queries.jsonl, <prefix>_aggregate.csv, <prefix>_hist.csv.
void write_protocol_report(const ProtocolReport& report, const std::string& prefix);

}  // namespace trajsim
