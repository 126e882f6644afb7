#include "trajsim/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "trajsim/errors.hpp"
#include "trajsim/similarity.hpp"
#include "trajsim/synthetic.hpp"

namespace trajsim {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<TrajectoryId> result_ids(const TopKResult& r) {
    std::vector<TrajectoryId> ids;
    ids.reserve(r.entries.size());
    for (const ResultEntry& e : r.entries) ids.push_back(e.id);
    return ids;
}

struct Phase {
    double build_ms = 0.0;
    std::size_t entries = 0;
};

}  // namespace

std::vector<std::size_t> sample_query_indices(std::size_t store_size,
                                              std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(store_size);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = store_size; i > 1; --i)
        std::swap(idx[i - 1], idx[rng.index(i)]);
    if (idx.size() > count) idx.resize(count);
    return idx;
}

ProtocolReport run_protocol(const TrajectoryStore& store, const Graph& graph,
                            DistanceOracle& oracle, const ProtocolConfig& config) {
    (void)graph;
    if (store.empty()) throw ValidationError("protocol: empty trajectory store");
    if (config.k_values.empty()) throw ValidationError("protocol: no k values");
    if (config.histogram_bins == 0) throw ValidationError("protocol: zero histogram bins");

    ProtocolReport report;
    report.config = config;
    const auto samples =
        sample_query_indices(store.size(), config.query_count, config.seed);
    for (std::size_t row : samples) report.query_ids.push_back(store.at(row).id());

    // Warm-up, excluded from every timing below.
    {
        QuerySpec warm;
        warm.query = store.at(samples.front());
        warm.k = 1;
        warm.threads = config.threads;
        (void)topk(warm, store, oracle);
    }

    // Exact similarity distribution over every (query, trajectory) pair,
    // evaluated without the budget; untimed bookkeeping.
    report.histogram.assign(config.histogram_bins, 0);
    const double bins = static_cast<double>(config.histogram_bins);
    for (std::size_t row : samples) {
        const Trajectory& q = store.at(row);
        const Interval s = q.lifespan();
        ExpWeightCache weights(oracle);
        for (const Step& step : q.steps()) weights.pin(step.vertex);
        for (const Trajectory& t : store) {
            const double sim = similarity_value(q, t, s, weights);
            const auto bin = sim >= 1.0 ? config.histogram_bins - 1
                                        : static_cast<std::size_t>(sim * bins);
            ++report.histogram[bin];
        }
    }

    // The exact phase runs first: it both provides the SSR reference and
    // pays for every shortest-path row before any index build is timed.
    std::optional<PivotIndex> pivot;
    std::optional<TreeIndex> tree;
    Phase pivot_phase, tree_phase;
    const bool want_pivot =
        std::find(config.indexes.begin(), config.indexes.end(), IndexChoice::pivot) !=
        config.indexes.end();
    const bool want_tree =
        std::find(config.indexes.begin(), config.indexes.end(), IndexChoice::tree) !=
        config.indexes.end();

    // exact reference ids per (k position, query position)
    std::vector<std::vector<std::vector<TrajectoryId>>> exact_ids(
        config.k_values.size(),
        std::vector<std::vector<TrajectoryId>>(samples.size()));

    std::vector<IndexChoice> order{IndexChoice::exact};
    for (IndexChoice choice : config.indexes)
        if (std::find(order.begin(), order.end(), choice) == order.end())
            order.push_back(choice);

    for (IndexChoice choice : order) {
        const bool listed = std::find(config.indexes.begin(), config.indexes.end(),
                                      choice) != config.indexes.end();
        if (choice == IndexChoice::exact && !listed &&
            !(want_pivot || want_tree))  // nothing needs the reference
            continue;

        if (choice == IndexChoice::pivot) {
            if (!want_pivot) continue;
            const auto t0 = Clock::now();
            pivot = PivotIndex::build(store, oracle, config.h, config.threads);
            pivot_phase.build_ms = ms_since(t0);
            pivot_phase.entries = pivot->entry_count();
            report.pivot_build_ms = pivot_phase.build_ms;
            report.pivot_entries = pivot_phase.entries;
        } else if (choice == IndexChoice::tree) {
            if (!want_tree) continue;
            const auto t0 = Clock::now();
            tree = TreeIndex::build(store, oracle, config.h, config.leaf_min,
                                    config.threads);
            tree_phase.build_ms = ms_since(t0);
            tree_phase.entries = tree->entry_count();
            report.tree_build_ms = tree_phase.build_ms;
            report.tree_entries = tree_phase.entries;
        }

        for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
            const std::size_t k = config.k_values[ki];
            std::vector<double> times;
            std::vector<double> candidate_counts;
            std::vector<double> ssr_values;
            times.reserve(samples.size());

            for (std::size_t qi = 0; qi < samples.size(); ++qi) {
                const Trajectory& q = store.at(samples[qi]);
                QuerySpec spec;
                spec.query = q;
                spec.k = k;
                spec.r = config.r;
                spec.index = choice;
                spec.threads = config.threads;
                const TopKResult res =
                    topk(spec, store, oracle, pivot ? &*pivot : nullptr,
                         tree ? &*tree : nullptr);

                QueryRecord record;
                record.query_index = qi;
                record.query_id = q.id();
                record.index = choice;
                record.k = k;
                record.results = res.entries;
                record.candidate_count = res.candidate_count;
                record.filter_ms = res.filter_ms;
                record.eval_ms = res.eval_ms;

                if (choice == IndexChoice::exact) {
                    exact_ids[ki][qi] = result_ids(res);
                    record.ssr_vs_exact = 1.0;
                } else {
                    record.ssr_vs_exact =
                        ssr(result_ids(res), exact_ids[ki][qi], q, q.lifespan(), store,
                            oracle);
                }
                if (record.ssr_vs_exact) ssr_values.push_back(*record.ssr_vs_exact);
                times.push_back(res.filter_ms + res.eval_ms);
                candidate_counts.push_back(static_cast<double>(res.candidate_count));
                if (listed) report.queries.push_back(std::move(record));
            }

            if (!listed) continue;
            AggregateRow agg;
            agg.index = choice;
            agg.k = k;
            const double n = static_cast<double>(times.size());
            agg.mean_query_ms = std::accumulate(times.begin(), times.end(), 0.0) / n;
            double var = 0.0;
            for (double t : times) var += (t - agg.mean_query_ms) * (t - agg.mean_query_ms);
            agg.std_query_ms = std::sqrt(var / n);
            agg.mean_candidates =
                std::accumulate(candidate_counts.begin(), candidate_counts.end(), 0.0) / n;
            if (!ssr_values.empty())
                agg.mean_ssr = std::accumulate(ssr_values.begin(), ssr_values.end(), 0.0) /
                               static_cast<double>(ssr_values.size());
            if (choice == IndexChoice::pivot) {
                agg.build_ms = pivot_phase.build_ms;
                agg.index_entries = pivot_phase.entries;
            } else if (choice == IndexChoice::tree) {
                agg.build_ms = tree_phase.build_ms;
                agg.index_entries = tree_phase.entries;
            }
            report.aggregates.push_back(agg);
        }
    }
    return report;
}

void write_protocol_report(const ProtocolReport& report, const std::string& prefix) {
    const bool det = report.config.deterministic_output;
    const auto timing = [det](double ms) { return det ? 0.0 : ms; };

    {
        std::ofstream out(prefix + "_queries.jsonl", std::ios::trunc);
        if (!out) throw IoError("cannot open " + prefix + "_queries.jsonl");
        for (const QueryRecord& q : report.queries) {
            nlohmann::ordered_json j;
            j["query_index"] = q.query_index;
            j["query_id"] = q.query_id;
            j["index"] = to_string(q.index);
            j["k"] = q.k;
            j["r"] = report.config.r;
            j["h"] = report.config.h;
            nlohmann::ordered_json results = nlohmann::ordered_json::array();
            for (const ResultEntry& e : q.results)
                results.push_back({{"id", e.id}, {"similarity", e.similarity}});
            j["results"] = std::move(results);
            j["candidate_count"] = q.candidate_count;
            j["filter_ms"] = timing(q.filter_ms);
            j["eval_ms"] = timing(q.eval_ms);
            if (q.ssr_vs_exact)
                j["ssr_vs_exact"] = *q.ssr_vs_exact;
            else
                j["ssr_vs_exact"] = nullptr;
            out << j.dump() << '\n';
        }
        if (!out) throw IoError("failed writing " + prefix + "_queries.jsonl");
    }

    {
        std::ofstream out(prefix + "_aggregate.csv", std::ios::trunc);
        if (!out) throw IoError("cannot open " + prefix + "_aggregate.csv");
        out << "index,k,h,r,leaf_min,queries,mean_query_ms,std_query_ms,"
               "mean_candidates,mean_ssr,build_ms,index_entries\n";
        for (const AggregateRow& a : report.aggregates) {
            out << to_string(a.index) << ',' << a.k << ',' << report.config.h << ','
                << fmt(report.config.r) << ',' << report.config.leaf_min << ','
                << report.query_ids.size() << ',' << fmt(timing(a.mean_query_ms)) << ','
                << fmt(timing(a.std_query_ms)) << ',' << fmt(a.mean_candidates) << ','
                << (a.mean_ssr ? fmt(*a.mean_ssr) : "nan") << ','
                << fmt(timing(a.build_ms)) << ',' << a.index_entries << '\n';
        }
        if (!out) throw IoError("failed writing " + prefix + "_aggregate.csv");
    }

    {
        std::ofstream out(prefix + "_hist.csv", std::ios::trunc);
        if (!out) throw IoError("cannot open " + prefix + "_hist.csv");
        out << "bin_start,bin_end,count\n";
        const double width = 1.0 / static_cast<double>(report.histogram.size());
        for (std::size_t i = 0; i < report.histogram.size(); ++i) {
            out << fmt(static_cast<double>(i) * width) << ','
                << fmt(static_cast<double>(i + 1) * width) << ',' << report.histogram[i]
                << '\n';
        }
        if (!out) throw IoError("failed writing " + prefix + "_hist.csv");
    }
}

}  // namespace trajsim
