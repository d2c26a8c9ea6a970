// graph.hpp - capacitated graph, paths, lightest-path and path enumeration.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace circuit_route {

using NodeId = int;
using EdgeId = int;

struct Edge {
  EdgeId id;
  NodeId u;
  NodeId v;
  double capacity;
};

// One traversal direction of an edge, as seen from its tail node.
struct Arc {
  EdgeId edge;
  NodeId head;
};

// Unvalidated graph description as read from a file or built by hand.
// Node labels may be arbitrary integers when `node_labels` is given; otherwise
// endpoints must already lie in [0, node_count).
struct RawGraph {
  struct RawEdge {
    std::int64_t id;
    std::int64_t u;
    std::int64_t v;
    double cap;
  };
  bool directed = true;
  std::int64_t node_count = 0;
  std::vector<std::int64_t> node_labels;
  std::vector<RawEdge> edges;
};

// Immutable validated graph. Edge ids are dense in [0, m); every capacity is
// at least 1. Undirected edges are traversable both ways.
class Graph {
 public:
  Graph() = default;

  bool directed() const { return directed_; }
  int num_nodes() const { return static_cast<int>(out_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
  double capacity(EdgeId e) const { return edge(e).capacity; }
  bool has_node(NodeId n) const { return n >= 0 && n < num_nodes(); }

  // Outgoing arcs of `n`, ordered by edge id.
  const std::vector<Arc>& arcs(NodeId n) const {
    return out_.at(static_cast<std::size_t>(n));
  }

  // Original label of a dense node id (identity unless labels were supplied).
  std::int64_t label(NodeId n) const;

 private:
  friend Graph validate_graph(const RawGraph& raw);

  bool directed_ = true;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::int64_t> labels_;
};

Graph validate_graph(const RawGraph& raw);

// Ordered edge sequence from `source` to `target`.
struct Path {
  std::vector<EdgeId> edges;
  NodeId source = -1;
  NodeId target = -1;

  std::size_t size() const { return edges.size(); }
  bool operator==(const Path&) const = default;
};

// Throws InputError unless `p` is a simple walk from p.source to p.target in g.
void check_path(const Graph& g, const Path& p);

struct WeightedPath {
  Path path;
  double weight = 0.0;
};

// Sum of weight[e] over the edges of p, accumulated in path order.
double path_weight(const Graph& g, std::span<const double> weight, const Path& p);

// Label-setting search from one source under nonnegative edge weights.
// Among equal-weight paths the one with fewer edges wins, then the
// lexicographically smallest edge-id sequence.
class ShortestPathTree {
 public:
  ShortestPathTree(const Graph& g, std::span<const double> weight, NodeId source);

  NodeId source() const { return source_; }
  bool reachable(NodeId d) const;
  double distance(NodeId d) const { return dist_.at(static_cast<std::size_t>(d)); }
  std::optional<WeightedPath> path_to(NodeId d) const;

 private:
  // Edge sequence from the source to n (reversed order into `out`).
  void reversed_edges_to(NodeId n, std::vector<EdgeId>& out) const;
  bool lex_less_via(NodeId u1, EdgeId e1, NodeId u2, EdgeId e2) const;

  const Graph* graph_;
  NodeId source_;
  std::vector<double> dist_;
  std::vector<int> hops_;
  std::vector<EdgeId> pred_edge_;
  std::vector<NodeId> pred_node_;
};

// Lightest s->d path under `weight`, or nullopt if d is unreachable.
std::optional<WeightedPath> lightest_path(const Graph& g, std::span<const double> weight,
                                          NodeId s, NodeId d);

// All simple s->d paths in depth-first order (arcs visited by ascending edge
// id). Throws InputError once more than max_paths paths exist.
std::vector<Path> enumerate_simple_paths(const Graph& g, NodeId s, NodeId d,
                                         std::size_t max_paths);

// Strict total order used for tie-breaking: weight, then edge count, then
// lexicographic edge ids.
bool lighter(const WeightedPath& a, const WeightedPath& b);

}  // namespace circuit_route
