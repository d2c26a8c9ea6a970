// graph_io.hpp - graph file format.
//
//   {"directed": true, "nodes": 4,
//    "edges": [{"id": 0, "u": 0, "v": 1, "cap": 1.0}, ...]}
//
// "nodes" is either a node count (ids 0..n-1) or an array of integer labels,
// which are mapped to dense ids in ascending order.
#pragma once

#include <iosfwd>
#include <string>

#include "circuit_route/graph.hpp"

namespace circuit_route {

RawGraph parse_graph_json(const std::string& text);
Graph read_graph(std::istream& in);
Graph load_graph(const std::string& path);

std::string graph_to_json(const Graph& g);
void save_graph(const Graph& g, const std::string& path);

}  // namespace circuit_route
