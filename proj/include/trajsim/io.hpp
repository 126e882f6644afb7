#pragma once

#include <iosfwd>
#include <string>

#include "trajsim/graph.hpp"
#include "trajsim/store.hpp"

namespace trajsim {

/// Graph text format (".graph"): header line "n m", then m lines "u v w"
/// with 0-based vertex ids and strictly positive weight. Duplicate edges
/// (either orientation) are rejected. Loading enforces connectivity.
Graph load_graph(const std::string& path);
Graph read_graph(std::istream& in, const std::string& origin = "<stream>");
void save_graph(const Graph& g, const std::string& path);
void write_graph(const Graph& g, std::ostream& out);

/// Trajectory text format (".traj"): one per line, "id n v1 a1 b1 … vn an bn"
/// — n steps, each a vertex and a half-open interval. Every trajectory must
/// validate against the graph. Empty file loads as an empty store.
TrajectoryStore load_trajectories(const std::string& path, const Graph& g);
TrajectoryStore read_trajectories(std::istream& in, const Graph& g,
                                  const std::string& origin = "<stream>");
void save_trajectories(const TrajectoryStore& store, const std::string& path);
void write_trajectories(const TrajectoryStore& store, std::ostream& out);

/// Fixture graphs addressable by name in the CLI: "chainN" (path of N
/// vertices), "gridRxC" (4-neighbor lattice), "hubHxL" (clique of H hubs,
/// L leaves attached round-robin). All unit-weight except hub cliques,
/// whose hub-hub edges weigh 2. Unknown names give nullopt.
std::optional<Graph> builtin_graph(const std::string& name);

}  // namespace trajsim
