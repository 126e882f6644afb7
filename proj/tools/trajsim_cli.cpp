// trajsim — build, query, and evaluate trajectory similarity indexes.
//
// Conventions: machine-readable data goes to files or standard output,
// diagnostics and summaries go to standard error. Exit 0 on success, 2 on
// usage errors, 1 on runtime failures. Every subcommand is deterministic
// given its flags and seeds (timing fields excepted; see --deterministic).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajsim/errors.hpp"
#include "trajsim/gps.hpp"
#include "trajsim/io.hpp"
#include "trajsim/parallel.hpp"
#include "trajsim/pivot_index.hpp"
#include "trajsim/protocol.hpp"
#include "trajsim/query_engine.hpp"
#include "trajsim/similarity.hpp"
#include "trajsim/synthetic.hpp"
#include "trajsim/tree_index.hpp"

namespace {

using namespace trajsim;

Graph load_graph_arg(const std::string& arg) {
    if (auto g = builtin_graph(arg)) return std::move(*g);
    return load_graph(arg);
}

enum class IndexKind { pivot, tree };

IndexKind sniff_index_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    char magic[8] = {};
    in.read(magic, 8);
    const std::string tag(magic, in.gcount());
    if (tag == "TSIMPIVT") return IndexKind::pivot;
    if (tag == "TSIMTREE") return IndexKind::tree;
    throw IoError(path + ": not a trajsim index file");
}

nlohmann::ordered_json result_json(const TopKResult& res, TrajectoryId query_id,
                                   const Interval& s, const QuerySpec& spec,
                                   bool deterministic) {
    nlohmann::ordered_json j;
    j["query_id"] = query_id;
    j["k"] = spec.k;
    j["index"] = to_string(spec.index);
    j["r"] = spec.r;
    j["s"] = {{"start", s.start()}, {"end", s.end()}};
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const ResultEntry& e : res.entries)
        results.push_back({{"id", e.id}, {"similarity", e.similarity}});
    j["results"] = std::move(results);
    j["candidate_count"] = res.candidate_count;
    j["filter_ms"] = deterministic ? 0.0 : res.filter_ms;
    j["eval_ms"] = deterministic ? 0.0 : res.eval_ms;
    j["fallback_to_exact"] = res.fell_back_to_exact;
    return j;
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
    std::vector<std::size_t> values;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        values.push_back(std::stoull(tok));
        if (values.back() == 0) throw CLI::ValidationError("--k-list", "k must be >= 1");
    }
    if (values.empty()) throw CLI::ValidationError("--k-list", "no k values");
    return values;
}

std::vector<IndexChoice> parse_index_list(const std::string& text) {
    std::vector<IndexChoice> values;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        const auto choice = index_choice_from_string(tok);
        if (!choice)
            throw CLI::ValidationError("--indexes", "unknown index type '" + tok + "'");
        values.push_back(*choice);
    }
    if (values.empty()) throw CLI::ValidationError("--indexes", "no index types");
    return values;
}

Trajectory resolve_query(const TrajectoryStore& store, const Graph& g,
                         const std::string& query_file,
                         std::optional<TrajectoryId> id) {
    if (!query_file.empty()) {
        const TrajectoryStore qs = load_trajectories(query_file, g);
        if (qs.empty()) throw ValidationError(query_file + ": no trajectories");
        if (id) {
            const Trajectory* q = qs.find(*id);
            if (!q)
                throw ValidationError(query_file + ": no trajectory with id " +
                                      std::to_string(*id));
            return *q;
        }
        if (qs.size() != 1)
            throw ValidationError(query_file +
                                  ": several trajectories; pick one with --id");
        return qs.at(0);
    }
    if (!id) throw CLI::ValidationError("--id", "query id or --query-file required");
    const Trajectory* q = store.find(*id);
    if (!q) throw ValidationError("no stored trajectory with id " + std::to_string(*id));
    return *q;
}

int run(int argc, char** argv) {
    CLI::App app{"top-k spatio-temporal trajectory similarity search"};
    app.require_subcommand(1);
    // --h is the pivot-count flag, so help keeps only its long spelling.
    app.set_help_flag("--help", "print help and exit");
    std::size_t threads = default_thread_count();
    app.add_option("--threads", threads, "worker threads (env TRAJSIM_THREADS)")
        ->capture_default_str();
    const auto subcommand = [&app](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->set_help_flag("--help", "print help and exit");
        return cmd;
    };

    // ---- gen ----------------------------------------------------------
    auto* gen = subcommand("gen", "generate a synthetic random-walk workload");
    struct {
        std::string graph, out, graph_out;
        WorkloadConfig cfg;
        bool seed_set = false;
    } g;
    gen->add_option("--graph", g.graph,
                    "graph file or built-in name (chainN, gridRxC, hubHxL)")
        ->required();
    gen->add_option("--count", g.cfg.count, "number of trajectories")->required();
    gen->add_option("--seed", g.cfg.seed, "random seed")->required();
    gen->add_option("--min-len", g.cfg.min_len, "minimum steps per walk")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    gen->add_option("--max-len", g.cfg.max_len, "maximum steps per walk");
    gen->add_option("--min-dwell", g.cfg.min_dwell, "minimum time units per step")
        ->capture_default_str();
    gen->add_option("--max-dwell", g.cfg.max_dwell, "maximum time units per step");
    gen->add_option("--start-min", g.cfg.start_min, "earliest start time")
        ->capture_default_str();
    gen->add_option("--start-max", g.cfg.start_max, "latest start time")
        ->capture_default_str();
    gen->add_option("--out", g.out, "output .traj path")->required();
    gen->add_option("--graph-out", g.graph_out, "also write the graph here");
    gen->callback([&] {
        if (!gen->count("--max-len")) g.cfg.max_len = g.cfg.min_len;
        if (!gen->count("--max-dwell")) g.cfg.max_dwell = g.cfg.min_dwell;
        if (!gen->count("--start-max")) g.cfg.start_max = g.cfg.start_min;
        const Graph graph = load_graph_arg(g.graph);
        const TrajectoryStore store = generate_synthetic(graph, g.cfg);
        save_trajectories(store, g.out);
        if (!g.graph_out.empty()) save_graph(graph, g.graph_out);
        std::cerr << "gen: wrote " << store.size() << " trajectories to " << g.out
                  << "\n";
    });

    // ---- ingest-gps ---------------------------------------------------
    auto* ingest = subcommand("ingest-gps",
                                      "cluster GPS traces into a graph + trajectories");
    struct {
        std::string in, out_graph, out_traj;
        GpsOptions opt;
    } ig;
    ingest->add_option("--in", ig.in, "CSV with header trace_id,timestamp,x,y")
        ->required();
    ingest->add_option("--clusters", ig.opt.cluster_count, "k-means cluster count (>= 2)")
        ->required();
    ingest->add_option("--time-resolution", ig.opt.time_resolution,
                       "seconds per time unit")
        ->required();
    ingest->add_option("--seed", ig.opt.seed, "k-means seed")->capture_default_str();
    ingest->add_option("--out-graph", ig.out_graph, "output .graph path")->required();
    ingest->add_option("--out-traj", ig.out_traj, "output .traj path")->required();
    ingest->callback([&] {
        if (ig.opt.cluster_count < 2)
            throw CLI::ValidationError("--clusters", "must be at least 2");
        const auto points = load_gps_csv(ig.in);
        const GpsResult result = gps_to_graph(points, ig.opt);
        save_graph(result.graph, ig.out_graph);
        save_trajectories(result.trajectories, ig.out_traj);
        std::cerr << "ingest-gps: " << result.graph.vertex_count() << " vertices, "
                  << result.graph.edge_count() << " edges, "
                  << result.trajectories.size() << " trajectories ("
                  << result.repaired_steps << " steps widened, "
                  << result.dropped_traces << " traces dropped)\n";
        if (!result.graph.connected())
            std::cerr << "ingest-gps: warning: clustered graph is disconnected; "
                         "reloading it with 'build' or 'query' will be rejected\n";
    });

    // ---- build --------------------------------------------------------
    auto* build = subcommand("build", "build and persist an index");
    struct {
        std::string graph, traj, type, out;
        std::size_t h = 8;
        std::size_t leaf_min = 100;
    } b;
    build->add_option("--graph", b.graph, "graph file")->required();
    build->add_option("--traj", b.traj, "trajectory file")->required();
    build->add_option("--type", b.type, "index type: pivot or tree")
        ->required()
        ->check(CLI::IsMember({"pivot", "tree"}));
    build->add_option("--h", b.h, "pivot count")->capture_default_str();
    build->add_option("--leaf-min", b.leaf_min, "tree leaf size threshold")
        ->capture_default_str();
    build->add_option("--out", b.out, "output index path")->required();
    build->callback([&] {
        const Graph graph = load_graph_arg(b.graph);
        const TrajectoryStore store = load_trajectories(b.traj, graph);
        DistanceOracle oracle(graph);
        const auto t0 = std::chrono::steady_clock::now();
        std::ofstream out(b.out, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + b.out + " for writing");
        std::size_t entries = 0, nodes = 0;
        if (b.type == "pivot") {
            const PivotIndex index = PivotIndex::build(store, oracle, b.h, threads);
            index.save(out);
            entries = index.entry_count();
        } else {
            const TreeIndex index =
                TreeIndex::build(store, oracle, b.h, b.leaf_min, threads);
            index.save(out);
            entries = index.entry_count();
            nodes = index.node_count();
        }
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        std::cerr << "build: " << b.type << " index over " << store.size()
                  << " trajectories, " << entries << " stored distances";
        if (nodes) std::cerr << ", " << nodes << " nodes";
        std::cerr << ", " << ms << " ms -> " << b.out << "\n";
    });

    // ---- query --------------------------------------------------------
    auto* query = subcommand("query", "run one top-k query");
    struct {
        std::string graph, traj, index_path, query_file, out;
        std::optional<TrajectoryId> id;
        std::size_t k = 1;
        std::optional<double> r;
        std::optional<TimePoint> s_start, s_end;
        bool oracle_check = false;
        bool deterministic = false;
    } q;
    query->add_option("--graph", q.graph, "graph file")->required();
    query->add_option("--traj", q.traj, "trajectory file")->required();
    query->add_option("--index", q.index_path, "index file (omit for exact scan)");
    query->add_option("--id", q.id, "query trajectory id");
    query->add_option("--query-file", q.query_file, "load the query from this .traj");
    query->add_option("--k", q.k, "result count")->capture_default_str();
    query->add_option("--r", q.r, "filter radius (required with --index)");
    query->add_option("--start", q.s_start, "query interval start (default lifespan)");
    query->add_option("--end", q.s_end, "query interval end");
    query->add_flag("--oracle", q.oracle_check,
                    "verify results against the quadratic reference evaluator");
    query->add_flag("--deterministic", q.deterministic, "zero timing fields in output");
    query->add_option("--out", q.out, "also write the result JSON here");
    query->callback([&] {
        const Graph graph = load_graph_arg(q.graph);
        const TrajectoryStore store = load_trajectories(q.traj, graph);
        DistanceOracle oracle(graph);

        QuerySpec spec;
        spec.query = resolve_query(store, graph, q.query_file, q.id);
        spec.k = q.k;
        spec.threads = threads;
        if (q.s_start.has_value() != q.s_end.has_value())
            throw CLI::ValidationError("--start", "--start and --end come together");
        if (q.s_start) {
            if (*q.s_start >= *q.s_end)
                throw CLI::ValidationError("--start", "interval must be non-empty");
            spec.s = Interval(*q.s_start, *q.s_end);
        }

        std::optional<PivotIndex> pivot;
        std::optional<TreeIndex> tree;
        if (!q.index_path.empty()) {
            if (!q.r) throw CLI::ValidationError("--r", "required with --index");
            spec.r = *q.r;
            std::ifstream in(q.index_path, std::ios::binary);
            if (!in) throw IoError("cannot open " + q.index_path);
            if (sniff_index_kind(q.index_path) == IndexKind::pivot) {
                pivot = PivotIndex::load(in);
                spec.index = IndexChoice::pivot;
            } else {
                tree = TreeIndex::load(in);
                spec.index = IndexChoice::tree;
            }
        }

        const TopKResult res =
            topk(spec, store, oracle, pivot ? &*pivot : nullptr, tree ? &*tree : nullptr);
        const Interval s = spec.s.is_empty() ? spec.query.lifespan() : spec.s;
        nlohmann::ordered_json j = result_json(res, spec.query.id(), s, spec,
                                               q.deterministic);

        if (q.oracle_check) {
            const auto qr = restrict(spec.query, s);
            ExpWeightCache weights(oracle);
            bool match = true;
            for (const ResultEntry& e : res.entries) {
                const double naive =
                    naive_similarity(*qr, *store.find(e.id), s, weights);
                if (std::abs(naive - e.similarity) > 1e-12) match = false;
            }
            if (spec.index == IndexChoice::exact || res.fell_back_to_exact) {
                // Full reference: quadratic evaluation of the whole store.
                std::vector<ResultEntry> all;
                all.reserve(store.size());
                for (const Trajectory& t : store)
                    all.push_back({t.id(), naive_similarity(*qr, t, s, weights)});
                std::sort(all.begin(), all.end(),
                          [](const ResultEntry& a, const ResultEntry& b) {
                              if (a.similarity != b.similarity)
                                  return a.similarity > b.similarity;
                              return a.id < b.id;
                          });
                if (all.size() > spec.k) all.resize(spec.k);
                if (all.size() != res.entries.size()) match = false;
                for (std::size_t i = 0; match && i < all.size(); ++i) {
                    if (all[i].id != res.entries[i].id ||
                        std::abs(all[i].similarity - res.entries[i].similarity) > 1e-12)
                        match = false;
                }
            }
            j["oracle_verdict"] = match ? "match" : "mismatch";
            if (!match) {
                std::cout << j.dump() << "\n";
                throw ValidationError("oracle mismatch");
            }
        }

        std::cout << j.dump() << "\n";
        if (!q.out.empty()) {
            std::ofstream out(q.out, std::ios::trunc);
            if (!out) throw IoError("cannot open " + q.out);
            out << j.dump() << "\n";
        }
        if (res.fell_back_to_exact)
            std::cerr << "query: interval outside index range; fell back to exact scan\n";
        std::cerr << "query: k=" << spec.k << " index=" << to_string(spec.index)
                  << " candidates=" << res.candidate_count << " results="
                  << res.entries.size() << "\n";
    });

    // ---- protocol -----------------------------------------------------
    auto* protocol = subcommand("protocol", "run the evaluation protocol");
    struct {
        std::string graph, traj, out, k_list = "1,4,16,64", indexes = "exact,pivot,tree";
        ProtocolConfig cfg;
    } p;
    protocol->add_option("--graph", p.graph, "graph file")->required();
    protocol->add_option("--traj", p.traj, "trajectory file")->required();
    protocol->add_option("--queries", p.cfg.query_count, "number of sampled queries")
        ->capture_default_str();
    protocol->add_option("--k-list", p.k_list, "comma-separated k values")
        ->capture_default_str();
    protocol->add_option("--indexes", p.indexes, "comma-separated: exact,pivot,tree")
        ->capture_default_str();
    protocol->add_option("--h", p.cfg.h, "pivot count")->capture_default_str();
    protocol->add_option("--r", p.cfg.r, "filter radius (required with pivot/tree)");
    protocol->add_option("--leaf-min", p.cfg.leaf_min, "tree leaf size threshold")
        ->capture_default_str();
    protocol->add_option("--seed", p.cfg.seed, "query sampling seed")->required();
    protocol->add_option("--bins", p.cfg.histogram_bins, "similarity histogram bins")
        ->capture_default_str();
    protocol->add_flag("--deterministic", p.cfg.deterministic_output,
                       "zero timing fields in the written reports");
    protocol->add_option("--out", p.out, "output prefix")->required();
    protocol->callback([&] {
        p.cfg.k_values = parse_k_list(p.k_list);
        p.cfg.indexes = parse_index_list(p.indexes);
        p.cfg.threads = threads;
        const bool heuristic =
            std::count(p.cfg.indexes.begin(), p.cfg.indexes.end(), IndexChoice::pivot) +
            std::count(p.cfg.indexes.begin(), p.cfg.indexes.end(), IndexChoice::tree);
        if (heuristic && !protocol->count("--r"))
            throw CLI::ValidationError("--r", "required when pivot/tree indexes run");
        const Graph graph = load_graph_arg(p.graph);
        const TrajectoryStore store = load_trajectories(p.traj, graph);
        DistanceOracle oracle(graph);
        const ProtocolReport report = run_protocol(store, graph, oracle, p.cfg);
        write_protocol_report(report, p.out);
        std::cerr << "protocol: " << report.query_ids.size() << " queries, "
                  << report.queries.size() << " records -> " << p.out
                  << "_{queries.jsonl,aggregate.csv,hist.csv}\n";
        for (const AggregateRow& a : report.aggregates)
            std::cerr << "  " << to_string(a.index) << " k=" << a.k << " mean_ms="
                      << a.mean_query_ms << " mean_candidates=" << a.mean_candidates
                      << " mean_ssr=" << (a.mean_ssr ? std::to_string(*a.mean_ssr) : "n/a")
                      << "\n";
    });

    // ---- eval-ssr -----------------------------------------------------
    auto* evalssr = subcommand(
        "eval-ssr", "similarity score ratio between two query result files");
    struct {
        std::string graph, traj, a, b, query_file;
        std::optional<TrajectoryId> id;
        std::optional<TimePoint> s_start, s_end;
    } e;
    evalssr->add_option("--graph", e.graph, "graph file")->required();
    evalssr->add_option("--traj", e.traj, "trajectory file")->required();
    evalssr->add_option("--a", e.a, "result JSON (numerator set)")->required();
    evalssr->add_option("--b", e.b, "result JSON (reference set)")->required();
    evalssr->add_option("--id", e.id, "query trajectory id");
    evalssr->add_option("--query-file", e.query_file, "load the query from this .traj");
    evalssr->add_option("--start", e.s_start, "query interval start");
    evalssr->add_option("--end", e.s_end, "query interval end");
    evalssr->callback([&] {
        const Graph graph = load_graph_arg(e.graph);
        const TrajectoryStore store = load_trajectories(e.traj, graph);
        DistanceOracle oracle(graph);
        const Trajectory query = resolve_query(store, graph, e.query_file, e.id);
        Interval s = query.lifespan();
        if (e.s_start.has_value() != e.s_end.has_value())
            throw CLI::ValidationError("--start", "--start and --end come together");
        if (e.s_start) s = Interval(*e.s_start, *e.s_end);

        const auto ids_of = [](const std::string& path) {
            std::ifstream in(path);
            if (!in) throw IoError("cannot open " + path);
            nlohmann::json j;
            in >> j;
            std::vector<TrajectoryId> ids;
            for (const auto& entry : j.at("results"))
                ids.push_back(entry.at("id").get<TrajectoryId>());
            return ids;
        };
        const auto qr = restrict(query, s);
        if (!qr) throw EmptyQueryInterval("query does not intersect the interval");
        const auto value = ssr(ids_of(e.a), ids_of(e.b), *qr, s, store, oracle);
        if (value)
            std::cout << "ssr " << *value << "\n";
        else
            std::cout << "ssr undefined (zero reference)\n";
    });

    // ---- stats --------------------------------------------------------
    auto* stats = subcommand("stats", "describe a graph/store/index");
    struct {
        std::string graph, traj, index_path;
    } st;
    stats->add_option("--graph", st.graph, "graph file")->required();
    stats->add_option("--traj", st.traj, "trajectory file");
    stats->add_option("--index", st.index_path, "index file");
    stats->callback([&] {
        const Graph graph = load_graph_arg(st.graph);
        std::cout << "graph: " << graph.vertex_count() << " vertices, "
                  << graph.edge_count() << " edges\n";
        if (!st.traj.empty()) {
            const TrajectoryStore store = load_trajectories(st.traj, graph);
            std::size_t steps = 0;
            for (const Trajectory& t : store) steps += t.size();
            std::cout << "store: " << store.size() << " trajectories, " << steps
                      << " steps, global interval " << global_interval(store) << "\n";
        }
        if (!st.index_path.empty()) {
            std::ifstream in(st.index_path, std::ios::binary);
            if (!in) throw IoError("cannot open " + st.index_path);
            if (sniff_index_kind(st.index_path) == IndexKind::pivot) {
                const PivotIndex index = PivotIndex::load(in);
                std::cout << "pivot index: h=" << index.pivots().size() << ", roster="
                          << index.roster().size() << ", entries="
                          << index.entry_count() << ", interval "
                          << index.global_interval() << "\n";
            } else {
                const TreeIndex index = TreeIndex::load(in);
                std::cout << "tree index: h=" << index.pivots().size() << ", nodes="
                          << index.node_count() << ", stored=" << index.stored_count()
                          << ", entries=" << index.entry_count() << ", leaf_min="
                          << index.leaf_min() << ", interval "
                          << index.global_interval() << "\n";
            }
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        // CLI11 exits 0 for --help/--version; everything else is usage.
        return code == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const trajsim::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
