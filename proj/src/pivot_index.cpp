#include "trajsim/pivot_index.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "trajsim/errors.hpp"
#include "trajsim/parallel.hpp"
#include "trajsim/serialize.hpp"
#include "trajsim/similarity.hpp"

namespace trajsim {

namespace {
constexpr char kMagic[9] = "TSIMPIVT";
constexpr std::uint32_t kVersion = 1;
}  // namespace

Interval global_interval(const TrajectoryStore& store) {
    Interval span = Interval::empty();
    for (const Trajectory& t : store) {
        const Interval life = t.lifespan();
        if (life.is_empty()) continue;
        span = span.is_empty() ? life
                               : Interval(std::min(span.start(), life.start()),
                                          std::max(span.end(), life.end()));
    }
    return span;
}

std::vector<VertexId> visit_ranking(const TrajectoryStore& store) {
    std::unordered_map<VertexId, std::uint64_t> counts;
    for (const Trajectory& t : store)
        for (const Step& step : t.steps()) ++counts[step.vertex];

    std::vector<std::pair<VertexId, std::uint64_t>> ranked(counts.begin(),
                                                           counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::vector<VertexId> vertices;
    vertices.reserve(ranked.size());
    for (const auto& [v, n] : ranked) vertices.push_back(v);
    return vertices;
}

std::vector<VertexId> select_pivots(const TrajectoryStore& store, std::size_t h) {
    std::vector<VertexId> ranking = visit_ranking(store);
    if (ranking.size() > h) ranking.resize(h);
    return ranking;
}

Trajectory stationary_trajectory(VertexId vertex, const Interval& span) {
    return Trajectory(0, {Step{vertex, span}});
}

PivotIndex PivotIndex::build(const TrajectoryStore& store, DistanceOracle& oracle,
                             std::size_t h, std::size_t threads) {
    PivotIndex index;
    index.pivots_ = select_pivots(store, h);
    index.span_ = trajsim::global_interval(store);
    index.roster_.reserve(store.size());
    for (const Trajectory& t : store) index.roster_.push_back(t.id());
    index.matrix_.assign(store.size() * index.pivots_.size(), 0.0);

    const std::size_t width = index.pivots_.size();
    if (width == 0 || store.size() == 0) return index;

    // Rows are independent; identical values land in identical slots no
    // matter how the blocks are carved up.
    parallel_blocks(store.size(), threads, [&](std::size_t begin, std::size_t end) {
        ExpWeightCache weights(oracle);
        for (VertexId p : index.pivots_) weights.pin(p);
        std::vector<Trajectory> pivot_trajs;
        pivot_trajs.reserve(width);
        for (VertexId p : index.pivots_)
            pivot_trajs.push_back(stationary_trajectory(p, index.span_));
        for (std::size_t row = begin; row < end; ++row) {
            const Trajectory& t = store.at(row);
            for (std::size_t i = 0; i < width; ++i)
                index.matrix_[row * width + i] =
                    1.0 - similarity_value(t, pivot_trajs[i], index.span_, weights);
        }
    });
    return index;
}

PivotIndex PivotIndex::build_with_pivots(const TrajectoryStore& store,
                                         const std::vector<std::size_t>& member_rows,
                                         const std::vector<VertexId>& pivots,
                                         const Interval& span, DistanceOracle& oracle,
                                         ExpWeightCache& weights) {
    PivotIndex index;
    index.pivots_ = pivots;
    index.span_ = span;
    index.roster_.reserve(member_rows.size());
    index.matrix_.reserve(member_rows.size() * pivots.size());
    std::vector<Trajectory> pivot_trajs;
    pivot_trajs.reserve(pivots.size());
    for (VertexId p : pivots) pivot_trajs.push_back(stationary_trajectory(p, span));
    for (std::size_t row : member_rows) {
        const Trajectory& t = store.at(row);
        index.roster_.push_back(t.id());
        for (const Trajectory& pt : pivot_trajs)
            index.matrix_.push_back(1.0 - similarity_value(t, pt, span, weights));
    }
    return index;
}

std::vector<double> PivotIndex::query_distances(const Trajectory& q_restricted,
                                                const Interval& s,
                                                ExpWeightCache& weights) const {
    if (s.is_empty()) throw EmptyQueryInterval("pivot filter: empty query interval");
    if (!s.contained_in(span_))
        throw QueryOutsideIndexInterval("query interval leaves the indexed range");
    std::vector<double> dists;
    dists.reserve(pivots_.size());
    for (VertexId p : pivots_)
        dists.push_back(1.0 - similarity_value(q_restricted,
                                               stationary_trajectory(p, span_), span_,
                                               weights));
    return dists;
}

std::vector<std::size_t> PivotIndex::filter_rows(const std::vector<double>& query_dists,
                                                 double r) const {
    const std::size_t width = pivots_.size();
    std::vector<std::size_t> rows;
    for (std::size_t row = 0; row < roster_.size(); ++row) {
        const double* entry = matrix_.data() + row * width;
        bool keep = true;
        for (std::size_t i = 0; i < width; ++i) {
            const double gap = query_dists[i] - entry[i];
            if (gap > r || -gap > r) {
                keep = false;
                break;
            }
        }
        if (keep) rows.push_back(row);
    }
    return rows;
}

std::vector<TrajectoryId> PivotIndex::filter(const Trajectory& q_restricted,
                                             const Interval& s, double r,
                                             ExpWeightCache& weights) const {
    const std::vector<double> dists = query_distances(q_restricted, s, weights);
    std::vector<TrajectoryId> ids;
    for (std::size_t row : filter_rows(dists, r)) ids.push_back(roster_[row]);
    return ids;
}

void PivotIndex::save(std::ostream& out) const {
    BinaryWriter w(out);
    w.magic(kMagic);
    w.u32(kVersion);
    w.i64(span_.is_empty() ? 0 : span_.start());
    w.i64(span_.is_empty() ? 0 : span_.end());
    w.u32(static_cast<std::uint32_t>(pivots_.size()));
    for (VertexId p : pivots_) w.u32(p);
    w.u64(roster_.size());
    for (TrajectoryId id : roster_) w.u64(id);
    for (double d : matrix_) w.f64(d);
    if (!out) throw IoError("failed writing pivot index");
}

PivotIndex PivotIndex::load(std::istream& in) {
    BinaryReader r(in);
    r.expect_magic(kMagic);
    if (const auto version = r.u32(); version != kVersion)
        throw IoError("unsupported pivot index version " + std::to_string(version));
    PivotIndex index;
    const TimePoint start = r.i64();
    const TimePoint end = r.i64();
    index.span_ = start == end ? Interval::empty() : Interval(start, end);
    index.pivots_.resize(r.u32());
    for (VertexId& p : index.pivots_) p = r.u32();
    index.roster_.resize(r.u64());
    for (TrajectoryId& id : index.roster_) id = r.u64();
    index.matrix_.resize(index.roster_.size() * index.pivots_.size());
    for (double& d : index.matrix_) d = r.f64();
    return index;
}

}  // namespace trajsim
