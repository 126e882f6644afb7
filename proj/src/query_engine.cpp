#include "trajsim/query_engine.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "trajsim/errors.hpp"
#include "trajsim/parallel.hpp"
#include "trajsim/similarity.hpp"

namespace trajsim {

std::string to_string(IndexChoice choice) {
    switch (choice) {
        case IndexChoice::exact: return "exact";
        case IndexChoice::pivot: return "pivot";
        case IndexChoice::tree: return "tree";
    }
    return "?";
}

std::optional<IndexChoice> index_choice_from_string(const std::string& name) {
    if (name == "exact") return IndexChoice::exact;
    if (name == "pivot") return IndexChoice::pivot;
    if (name == "tree") return IndexChoice::tree;
    return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Strictly-better ordering for results: similarity descending, id ascending.
bool better(const ResultEntry& a, const ResultEntry& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
}

/// Bounded best-k accumulator. Backed by a heap whose top is the worst kept
/// entry (`better` plays the role of "less", so the max element is the one
/// nothing beats — the eviction candidate).
class TopKHeap {
public:
    explicit TopKHeap(std::size_t k) : k_(k) {}

    void insert(const ResultEntry& e) {
        if (entries_.size() < k_) {
            entries_.push_back(e);
            std::push_heap(entries_.begin(), entries_.end(), better);
        } else if (better(e, entries_.front())) {
            std::pop_heap(entries_.begin(), entries_.end(), better);
            entries_.back() = e;
            std::push_heap(entries_.begin(), entries_.end(), better);
        }
    }

    /// Current k-th best similarity; 0 until the heap is full, so nothing
    /// can be aborted before k candidates are in.
    double threshold() const { return entries_.size() < k_ ? 0.0 : entries_.front().similarity; }

    std::vector<ResultEntry> take() && { return std::move(entries_); }

private:
    std::size_t k_;
    std::vector<ResultEntry> entries_;
};

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

std::vector<std::size_t> rows_for_ids(const std::vector<TrajectoryId>& ids,
                                      const TrajectoryStore& store) {
    std::vector<std::size_t> rows;
    rows.reserve(ids.size());
    for (TrajectoryId id : ids) rows.push_back(store.index_of(id));
    return rows;
}

}  // namespace

TopKResult topk(const QuerySpec& spec, const TrajectoryStore& store,
                DistanceOracle& oracle, const PivotIndex* pivot,
                const TreeIndex* tree) {
    if (spec.k == 0) throw ValidationError("top-k: k must be at least 1");
    const Interval s = spec.s.is_empty() ? spec.query.lifespan() : spec.s;
    if (s.is_empty()) throw EmptyQueryInterval("top-k: empty query interval");
    const auto q = restrict(spec.query, s);
    if (!q) throw EmptyQueryInterval("top-k: query does not intersect the interval");

    TopKResult out;

    const auto filter_start = Clock::now();
    std::vector<std::size_t> rows;
    switch (spec.index) {
        case IndexChoice::exact:
            rows = all_rows(store.size());
            break;
        case IndexChoice::pivot: {
            if (!pivot) throw IndexMissing("top-k: pivot index not provided");
            ExpWeightCache weights(oracle);
            for (VertexId v : pivot->pivots()) weights.pin(v);
            for (const Step& step : q->steps()) weights.pin(step.vertex);
            try {
                rows = rows_for_ids(pivot->filter(*q, s, spec.r, weights), store);
            } catch (const QueryOutsideIndexInterval&) {
                out.fell_back_to_exact = true;
                rows = all_rows(store.size());
            }
            break;
        }
        case IndexChoice::tree: {
            if (!tree) throw IndexMissing("top-k: tree index not provided");
            ExpWeightCache weights(oracle);
            for (VertexId v : tree->pivots()) weights.pin(v);
            for (const Step& step : q->steps()) weights.pin(step.vertex);
            try {
                rows = rows_for_ids(tree->query(*q, s, spec.r, weights), store);
            } catch (const QueryOutsideIndexInterval&) {
                out.fell_back_to_exact = true;
                rows = all_rows(store.size());
            }
            break;
        }
    }
    out.candidate_count = rows.size();
    out.filter_ms = ms_since(filter_start);

    const auto eval_start = Clock::now();
    const std::size_t threads = std::max<std::size_t>(1, spec.threads);
    std::vector<TopKHeap> heaps;
    std::vector<std::size_t> advances;
    const std::size_t max_blocks = std::max<std::size_t>(1, std::min(threads, rows.size()));
    heaps.assign(max_blocks, TopKHeap(spec.k));
    advances.assign(max_blocks, 0);

    parallel_blocks_indexed(
        rows.size(), threads,
        [&](std::size_t block, std::size_t begin, std::size_t end) {
            ExpWeightCache weights(oracle);
            for (const Step& step : q->steps()) weights.pin(step.vertex);
            TopKHeap& heap = heaps[block];
            std::size_t& local_advances = advances[block];
            for (std::size_t i = begin; i < end; ++i) {
                const Trajectory& t = store.at(rows[i]);
                const SimilarityBudget budget =
                    spec.use_budget ? SimilarityBudget::at_least(heap.threshold())
                                    : SimilarityBudget::none();
                const SimilarityOutcome outcome = similarity(*q, t, s, weights, budget);
                local_advances += outcome.advances;
                // An aborted evaluation proved the candidate strictly below
                // the block's k-th best; it can never reach the result.
                if (outcome.completed) heap.insert({t.id(), outcome.value});
            }
        });

    std::vector<ResultEntry> merged;
    for (auto& heap : heaps) {
        auto part = std::move(heap).take();
        merged.insert(merged.end(), part.begin(), part.end());
    }
    std::sort(merged.begin(), merged.end(), better);
    if (merged.size() > spec.k) merged.resize(spec.k);
    out.entries = std::move(merged);
    out.merge_advances = std::accumulate(advances.begin(), advances.end(), std::size_t{0});
    out.eval_ms = ms_since(eval_start);
    return out;
}

std::optional<double> ssr(const std::vector<TrajectoryId>& result_ids,
                          const std::vector<TrajectoryId>& reference_ids,
                          const Trajectory& q_restricted, const Interval& s,
                          const TrajectoryStore& store, DistanceOracle& oracle) {
    ExpWeightCache weights(oracle);
    const auto total = [&](const std::vector<TrajectoryId>& ids) {
        double sum = 0.0;
        for (TrajectoryId id : ids)
            sum += similarity_value(q_restricted, store.at(store.index_of(id)), s, weights);
        return sum;
    };
    const double reference = total(reference_ids);
    if (reference == 0.0) return std::nullopt;
    return total(result_ids) / reference;
}

}  // namespace trajsim
