#include "trajsim/tree_index.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "trajsim/errors.hpp"
#include "trajsim/parallel.hpp"
#include "trajsim/serialize.hpp"
#include "trajsim/similarity.hpp"

namespace trajsim {

namespace {

constexpr char kMagic[9] = "TSIMTREE";
constexpr std::uint32_t kVersion = 1;

struct PendingMatrix {
    TreeNode* node;
    std::vector<std::size_t> store_rows;  // roster order
};

TimePoint lower_median_of_ends(const std::vector<std::size_t>& rows,
                               const TrajectoryStore& store) {
    std::vector<TimePoint> ends;
    ends.reserve(rows.size());
    for (std::size_t row : rows) ends.push_back(store.at(row).lifespan().end());
    std::sort(ends.begin(), ends.end());
    return ends[(ends.size() - 1) / 2];
}

/// Recursive split: end ≤ m left, start ≥ m right, straddlers stay. A split
/// with an empty side counts as degenerate; two degenerate splits in a row
/// (or everything straddling) stop the recursion to guarantee progress.
std::unique_ptr<TreeNode> build_structure(std::vector<std::size_t> rows,
                                          const TrajectoryStore& store,
                                          std::size_t leaf_min,
                                          std::size_t degenerate_streak,
                                          std::vector<PendingMatrix>& pending) {
    auto node = std::make_unique<TreeNode>();
    if (rows.size() <= leaf_min) {
        pending.push_back({node.get(), std::move(rows)});
        return node;
    }

    const TimePoint m = lower_median_of_ends(rows, store);
    std::vector<std::size_t> left, right, stay;
    for (std::size_t row : rows) {
        const Interval life = store.at(row).lifespan();
        if (life.end() <= m)
            left.push_back(row);
        else if (life.start() >= m)
            right.push_back(row);
        else
            stay.push_back(row);
    }

    if (left.empty() && right.empty()) {  // everything straddles: terminal
        node->median = m;
        pending.push_back({node.get(), std::move(rows)});
        return node;
    }
    const bool degenerate = left.empty() || right.empty();
    if (degenerate && degenerate_streak >= 1) {
        pending.push_back({node.get(), std::move(rows)});
        return node;
    }

    const std::size_t streak = degenerate ? degenerate_streak + 1 : 0;
    node->median = m;
    pending.push_back({node.get(), std::move(stay)});
    if (!left.empty())
        node->left = build_structure(std::move(left), store, leaf_min, streak, pending);
    if (!right.empty())
        node->right =
            build_structure(std::move(right), store, leaf_min, streak, pending);
    return node;
}

void save_node(const TreeNode& node, BinaryWriter& w) {
    std::uint8_t flags = 0;
    if (node.median) flags |= 1;
    if (node.left) flags |= 2;
    if (node.right) flags |= 4;
    w.u8(flags);
    w.i64(node.median.value_or(0));
    w.u64(node.roster.size());
    for (const TreeEntry& e : node.roster) {
        w.u64(e.id);
        w.i64(e.lifespan.start());
        w.i64(e.lifespan.end());
    }
    for (double d : node.matrix) w.f64(d);
    if (node.left) save_node(*node.left, w);
    if (node.right) save_node(*node.right, w);
}

std::unique_ptr<TreeNode> load_node(BinaryReader& r, std::size_t width) {
    auto node = std::make_unique<TreeNode>();
    const std::uint8_t flags = r.u8();
    const TimePoint median = r.i64();
    if (flags & 1) node->median = median;
    node->roster.resize(r.u64());
    for (TreeEntry& e : node->roster) {
        e.id = r.u64();
        const TimePoint start = r.i64();
        const TimePoint end = r.i64();
        e.lifespan = start == end ? Interval::empty() : Interval(start, end);
    }
    node->matrix.resize(node->roster.size() * width);
    for (double& d : node->matrix) d = r.f64();
    if (flags & 2) node->left = load_node(r, width);
    if (flags & 4) node->right = load_node(r, width);
    return node;
}

template <class Fn>
void walk(const TreeNode& node, Fn&& fn) {
    fn(node);
    if (node.left) walk(*node.left, fn);
    if (node.right) walk(*node.right, fn);
}

}  // namespace

TreeIndex TreeIndex::build(const TrajectoryStore& store, DistanceOracle& oracle,
                           std::size_t h, std::size_t leaf_min, std::size_t threads) {
    if (leaf_min < 1) throw ValidationError("leaf_min must be at least 1");
    TreeIndex index;
    index.pivots_ = select_pivots(store, h);
    index.span_ = trajsim::global_interval(store);
    index.leaf_min_ = leaf_min;

    std::vector<std::size_t> all(store.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<PendingMatrix> pending;
    index.root_ = build_structure(std::move(all), store, leaf_min, 0, pending);

    const std::size_t width = index.pivots_.size();
    struct Slot {
        TreeNode* node;
        std::size_t local;
        std::size_t store_row;
    };
    std::vector<Slot> slots;
    for (PendingMatrix& p : pending) {
        p.node->roster.reserve(p.store_rows.size());
        p.node->matrix.assign(p.store_rows.size() * width, 0.0);
        for (std::size_t local = 0; local < p.store_rows.size(); ++local) {
            const Trajectory& t = store.at(p.store_rows[local]);
            p.node->roster.push_back({t.id(), t.lifespan()});
            slots.push_back({p.node, local, p.store_rows[local]});
        }
    }

    if (width == 0) return index;
    parallel_blocks(slots.size(), threads, [&](std::size_t begin, std::size_t end) {
        ExpWeightCache weights(oracle);
        for (VertexId p : index.pivots_) weights.pin(p);
        std::vector<Trajectory> pivot_trajs;
        pivot_trajs.reserve(width);
        for (VertexId p : index.pivots_)
            pivot_trajs.push_back(stationary_trajectory(p, index.span_));
        for (std::size_t i = begin; i < end; ++i) {
            const Slot& slot = slots[i];
            const Trajectory& t = store.at(slot.store_row);
            double* dest = slot.node->matrix.data() + slot.local * width;
            for (std::size_t j = 0; j < width; ++j)
                dest[j] = 1.0 - similarity_value(t, pivot_trajs[j], index.span_, weights);
        }
    });
    return index;
}

std::vector<TrajectoryId> TreeIndex::query(const Trajectory& q_restricted,
                                           const Interval& s, double r,
                                           ExpWeightCache& weights) const {
    if (s.is_empty()) throw EmptyQueryInterval("tree query: empty query interval");
    if (!s.contained_in(span_))
        throw QueryOutsideIndexInterval("query interval leaves the indexed range");

    // Pivots and reference interval are global, so one set of query-side
    // distances serves every node.
    std::vector<double> qdists;
    qdists.reserve(pivots_.size());
    for (VertexId p : pivots_)
        qdists.push_back(1.0 - similarity_value(q_restricted,
                                                stationary_trajectory(p, span_),
                                                span_, weights));

    const std::size_t width = pivots_.size();
    std::vector<TrajectoryId> out;
    std::vector<const TreeNode*> stack{root_.get()};
    while (!stack.empty()) {
        const TreeNode* node = stack.back();
        stack.pop_back();
        for (std::size_t row = 0; row < node->roster.size(); ++row) {
            const TreeEntry& entry = node->roster[row];
            if (!entry.lifespan.intersects(s)) continue;
            const double* d = node->matrix.data() + row * width;
            bool keep = true;
            for (std::size_t i = 0; i < width; ++i) {
                const double gap = qdists[i] - d[i];
                if (gap > r || -gap > r) {
                    keep = false;
                    break;
                }
            }
            if (keep) out.push_back(entry.id);
        }
        if (node->median) {
            if (node->left && s.start() < *node->median) stack.push_back(node->left.get());
            if (node->right && s.end() > *node->median) stack.push_back(node->right.get());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t TreeIndex::node_count() const {
    std::size_t n = 0;
    walk(*root_, [&](const TreeNode&) { ++n; });
    return n;
}

std::size_t TreeIndex::stored_count() const {
    std::size_t n = 0;
    walk(*root_, [&](const TreeNode& node) { n += node.roster.size(); });
    return n;
}

std::size_t TreeIndex::entry_count() const {
    std::size_t n = 0;
    walk(*root_, [&](const TreeNode& node) { n += node.matrix.size(); });
    return n;
}

void TreeIndex::save(std::ostream& out) const {
    BinaryWriter w(out);
    w.magic(kMagic);
    w.u32(kVersion);
    w.i64(span_.is_empty() ? 0 : span_.start());
    w.i64(span_.is_empty() ? 0 : span_.end());
    w.u64(leaf_min_);
    w.u32(static_cast<std::uint32_t>(pivots_.size()));
    for (VertexId p : pivots_) w.u32(p);
    save_node(*root_, w);
    if (!out) throw IoError("failed writing tree index");
}

TreeIndex TreeIndex::load(std::istream& in) {
    BinaryReader r(in);
    r.expect_magic(kMagic);
    if (const auto version = r.u32(); version != kVersion)
        throw IoError("unsupported tree index version " + std::to_string(version));
    TreeIndex index;
    const TimePoint start = r.i64();
    const TimePoint end = r.i64();
    index.span_ = start == end ? Interval::empty() : Interval(start, end);
    index.leaf_min_ = r.u64();
    index.pivots_.resize(r.u32());
    for (VertexId& p : index.pivots_) p = r.u32();
    index.root_ = load_node(r, index.pivots_.size());
    return index;
}

}  // namespace trajsim
