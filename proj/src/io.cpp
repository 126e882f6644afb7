#include "trajsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>

#include "trajsim/errors.hpp"

namespace trajsim {

namespace {

/// Shortest round-trip decimal form; reloading reproduces the exact bits.
std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

[[noreturn]] void parse_fail(const std::string& origin, std::size_t line,
                             const std::string& what) {
    throw ParseError(line, origin + ": " + what);
}

}  // namespace

Graph read_graph(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;

    std::size_t n = 0, m = 0;
    bool have_header = false;
    std::vector<Edge> edges;
    std::set<std::pair<VertexId, VertexId>> seen;

    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        std::istringstream row(line);
        if (!have_header) {
            if (!(row >> n >> m)) parse_fail(origin, lineno, "expected header 'n m'");
            std::string extra;
            if (row >> extra) parse_fail(origin, lineno, "trailing tokens after header");
            have_header = true;
            edges.reserve(m);
            continue;
        }
        long long u = -1, v = -1;
        double w = 0.0;
        if (!(row >> u >> v >> w)) parse_fail(origin, lineno, "expected edge 'u v w'");
        std::string extra;
        if (row >> extra) parse_fail(origin, lineno, "trailing tokens after edge");
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
            static_cast<std::size_t>(v) >= n)
            parse_fail(origin, lineno, "edge endpoint outside [0, n)");
        if (u == v) parse_fail(origin, lineno, "self-loop");
        if (!(w > 0.0))
            throw NonPositiveWeight(origin + ": line " + std::to_string(lineno) +
                                    ": weight must be positive, got " + fmt_double(w));
        const std::pair<VertexId, VertexId> key{
            static_cast<VertexId>(std::min(u, v)), static_cast<VertexId>(std::max(u, v))};
        if (!seen.insert(key).second) parse_fail(origin, lineno, "duplicate edge");
        edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
    }
    if (!have_header) parse_fail(origin, lineno + 1, "missing header 'n m'");
    if (edges.size() != m)
        parse_fail(origin, lineno + 1,
                   "header announces " + std::to_string(m) + " edges, file has " +
                       std::to_string(edges.size()));

    Graph g(n, std::move(edges));
    if (!g.connected())
        throw DisconnectedGraph(origin + ": graph is not connected");
    return g;
}

Graph load_graph(const std::string& path) {
    auto in = open_in(path);
    return read_graph(in, path);
}

void write_graph(const Graph& g, std::ostream& out) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges())
        out << e.u << ' ' << e.v << ' ' << fmt_double(e.weight) << '\n';
}

void save_graph(const Graph& g, const std::string& path) {
    auto out = open_out(path);
    write_graph(g, out);
    if (!out) throw IoError("failed writing " + path);
}

TrajectoryStore read_trajectories(std::istream& in, const Graph& g,
                                  const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<Trajectory> items;

    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        std::istringstream row(line);
        unsigned long long id = 0;
        std::size_t count = 0;
        if (!(row >> id >> count))
            parse_fail(origin, lineno, "expected 'id n v1 a1 b1 ...'");
        if (count == 0) parse_fail(origin, lineno, "trajectory must have steps");
        std::vector<Step> steps;
        steps.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            long long v = 0, a = 0, b = 0;
            if (!(row >> v >> a >> b))
                parse_fail(origin, lineno,
                           "step " + std::to_string(i) + ": expected 'v a b'");
            if (v < 0) parse_fail(origin, lineno, "negative vertex id");
            if (a >= b)
                throw ValidationError(origin + ": line " + std::to_string(lineno) +
                                      ": trajectory " + std::to_string(id) + " step " +
                                      std::to_string(i) + ": empty interval [" +
                                      std::to_string(a) + "," + std::to_string(b) + ")");
            steps.push_back({static_cast<VertexId>(v), Interval(a, b)});
        }
        std::string extra;
        if (row >> extra) parse_fail(origin, lineno, "trailing tokens after steps");

        Trajectory t(static_cast<TrajectoryId>(id), std::move(steps));
        if (const auto problems = validate(t, g); !problems.empty())
            throw ValidationError(origin + ": line " + std::to_string(lineno) +
                                  ": trajectory " + std::to_string(id) + ": " +
                                  problems.front());
        items.push_back(std::move(t));
    }
    return TrajectoryStore(std::move(items));
}

TrajectoryStore load_trajectories(const std::string& path, const Graph& g) {
    auto in = open_in(path);
    return read_trajectories(in, g, path);
}

void write_trajectories(const TrajectoryStore& store, std::ostream& out) {
    for (const Trajectory& t : store) {
        out << t.id() << ' ' << t.size();
        for (const Step& s : t.steps())
            out << ' ' << s.vertex << ' ' << s.when.start() << ' ' << s.when.end();
        out << '\n';
    }
}

void save_trajectories(const TrajectoryStore& store, const std::string& path) {
    auto out = open_out(path);
    write_trajectories(store, out);
    if (!out) throw IoError("failed writing " + path);
}

namespace {

std::optional<std::size_t> parse_size(const std::string& text) {
    std::size_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

}  // namespace

std::optional<Graph> builtin_graph(const std::string& name) {
    const auto dims = [&](const std::string& prefix)
        -> std::optional<std::pair<std::size_t, std::size_t>> {
        if (name.rfind(prefix, 0) != 0) return std::nullopt;
        const std::string rest = name.substr(prefix.size());
        const auto x = rest.find('x');
        if (x == std::string::npos) return std::nullopt;
        const auto a = parse_size(rest.substr(0, x));
        const auto b = parse_size(rest.substr(x + 1));
        if (!a || !b || *a == 0 || *b == 0) return std::nullopt;
        return std::make_pair(*a, *b);
    };

    if (name.rfind("chain", 0) == 0) {
        const auto n = parse_size(name.substr(5));
        if (!n || *n == 0) return std::nullopt;
        std::vector<Edge> edges;
        for (std::size_t i = 0; i + 1 < *n; ++i)
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), 1.0});
        return Graph(*n, std::move(edges));
    }
    if (const auto rc = dims("grid")) {
        const auto [rows, cols] = *rc;
        std::vector<Edge> edges;
        const auto at = [cols](std::size_t r, std::size_t c) {
            return static_cast<VertexId>(r * cols + c);
        };
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                if (c + 1 < cols) edges.push_back({at(r, c), at(r, c + 1), 1.0});
                if (r + 1 < rows) edges.push_back({at(r, c), at(r + 1, c), 1.0});
            }
        return Graph(rows * cols, std::move(edges));
    }
    if (const auto hl = dims("hub")) {
        const auto [hubs, leaves] = *hl;
        // Hub clique with longer internal edges, one unit edge per leaf;
        // hubs take the smallest ids so they canonicalize as row owners.
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < hubs; ++i)
            for (std::size_t j = i + 1; j < hubs; ++j)
                edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), 2.0});
        for (std::size_t j = 0; j < leaves; ++j)
            edges.push_back({static_cast<VertexId>(hubs + j),
                             static_cast<VertexId>(j % hubs), 1.0});
        return Graph(hubs + leaves, std::move(edges));
    }
    return std::nullopt;
}

}  // namespace trajsim
