#include "circuit_route/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "circuit_route/errors.hpp"

namespace circuit_route {

std::int64_t Graph::label(NodeId n) const {
  if (!has_node(n)) throw InputError("unknown node " + std::to_string(n));
  return labels_.empty() ? n : labels_[static_cast<std::size_t>(n)];
}

Graph validate_graph(const RawGraph& raw) {
  if (raw.edges.empty()) throw InputError("graph has no edges");

  Graph g;
  g.directed_ = raw.directed;

  // Node id normalization: explicit labels map to dense ids in sorted order.
  std::map<std::int64_t, NodeId> dense;
  std::int64_t n = raw.node_count;
  if (!raw.node_labels.empty()) {
    std::vector<std::int64_t> sorted = raw.node_labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError("duplicate node label");
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) dense[sorted[i]] = static_cast<NodeId>(i);
    n = static_cast<std::int64_t>(sorted.size());
    g.labels_ = std::move(sorted);
  }
  if (n <= 0) throw InputError("graph has no nodes");
  if (n > std::numeric_limits<NodeId>::max()) throw InputError("too many nodes");

  auto to_dense = [&](std::int64_t label, std::int64_t edge_id) -> NodeId {
    if (!dense.empty()) {
      auto it = dense.find(label);
      if (it != dense.end()) return it->second;
    } else if (label >= 0 && label < n) {
      return static_cast<NodeId>(label);
    }
    throw InputError("edge " + std::to_string(edge_id) + ": dangling endpoint " +
                     std::to_string(label));
  };

  const auto m = raw.edges.size();
  g.edges_.assign(m, Edge{-1, -1, -1, 0.0});
  std::vector<bool> seen(m, false);
  for (const auto& re : raw.edges) {
    if (!(re.cap >= 1.0) || !std::isfinite(re.cap)) {
      std::ostringstream os;
      os << "edge " << re.id << ": capacity below 1 (" << re.cap << ")";
      throw InputError(os.str());
    }
    if (re.id < 0 || static_cast<std::uint64_t>(re.id) >= m) {
      throw InputError("edge id " + std::to_string(re.id) + " outside dense range [0, " +
                       std::to_string(m) + ")");
    }
    const auto idx = static_cast<std::size_t>(re.id);
    if (seen[idx]) throw InputError("duplicate edge id " + std::to_string(re.id));
    seen[idx] = true;
    NodeId u = to_dense(re.u, re.id);
    NodeId v = to_dense(re.v, re.id);
    if (u == v) throw InputError("edge " + std::to_string(re.id) + ": self-loop");
    g.edges_[idx] = Edge{static_cast<EdgeId>(re.id), u, v, re.cap};
  }

  g.out_.assign(static_cast<std::size_t>(n), {});
  for (const Edge& e : g.edges_) {
    g.out_[static_cast<std::size_t>(e.u)].push_back(Arc{e.id, e.v});
    if (!g.directed_) g.out_[static_cast<std::size_t>(e.v)].push_back(Arc{e.id, e.u});
  }
  return g;
}

void check_path(const Graph& g, const Path& p) {
  if (!g.has_node(p.source) || !g.has_node(p.target)) throw InputError("path endpoint unknown");
  if (p.source == p.target) throw InputError("path source equals target");
  if (p.edges.empty()) throw InputError("empty path");
  std::vector<bool> visited(static_cast<std::size_t>(g.num_nodes()), false);
  NodeId at = p.source;
  visited[static_cast<std::size_t>(at)] = true;
  for (EdgeId e : p.edges) {
    if (e < 0 || e >= g.num_edges()) throw InputError("path edge " + std::to_string(e) + " unknown");
    const Edge& ed = g.edge(e);
    NodeId next;
    if (ed.u == at) {
      next = ed.v;
    } else if (!g.directed() && ed.v == at) {
      next = ed.u;
    } else {
      throw InputError("path edge " + std::to_string(e) + " does not continue from node " +
                       std::to_string(at));
    }
    if (visited[static_cast<std::size_t>(next)]) throw InputError("path is not simple");
    visited[static_cast<std::size_t>(next)] = true;
    at = next;
  }
  if (at != p.target) throw InputError("path ends at node " + std::to_string(at));
}

namespace {

void check_weights(const Graph& g, std::span<const double> weight) {
  if (weight.size() < static_cast<std::size_t>(g.num_edges())) {
    throw InputError("weight map misses edges");
  }
  for (std::size_t e = 0; e < static_cast<std::size_t>(g.num_edges()); ++e) {
    if (!(weight[e] >= 0.0) || !std::isfinite(weight[e])) {
      throw InputError("edge " + std::to_string(e) + ": weight must be finite and nonnegative");
    }
  }
}

}  // namespace

double path_weight(const Graph& g, std::span<const double> weight, const Path& p) {
  double total = 0.0;
  for (EdgeId e : p.edges) {
    if (e < 0 || e >= g.num_edges() || static_cast<std::size_t>(e) >= weight.size()) {
      throw InputError("edge " + std::to_string(e) + " not in weight map");
    }
    total += weight[static_cast<std::size_t>(e)];
  }
  return total;
}

bool lighter(const WeightedPath& a, const WeightedPath& b) {
  const std::size_t na = a.path.edges.size();
  const std::size_t nb = b.path.edges.size();
  return std::tie(a.weight, na, a.path.edges) < std::tie(b.weight, nb, b.path.edges);
}

ShortestPathTree::ShortestPathTree(const Graph& g, std::span<const double> weight,
                                   NodeId source)
    : graph_(&g), source_(source) {
  if (!g.has_node(source)) throw InputError("unknown node " + std::to_string(source));
  check_weights(g, weight);

  const auto n = static_cast<std::size_t>(g.num_nodes());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  dist_.assign(n, kInf);
  hops_.assign(n, std::numeric_limits<int>::max());
  pred_edge_.assign(n, -1);
  pred_node_.assign(n, -1);
  std::vector<bool> settled(n, false);

  using Entry = std::tuple<double, int, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist_[static_cast<std::size_t>(source)] = 0.0;
  hops_[static_cast<std::size_t>(source)] = 0;
  queue.emplace(0.0, 0, source);

  while (!queue.empty()) {
    auto [d, h, u] = queue.top();
    queue.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (settled[ui] || d != dist_[ui] || h != hops_[ui]) continue;
    settled[ui] = true;
    for (const Arc& arc : g.arcs(u)) {
      const auto vi = static_cast<std::size_t>(arc.head);
      if (settled[vi]) continue;
      const double nd = d + weight[static_cast<std::size_t>(arc.edge)];
      const int nh = h + 1;
      bool better = nd < dist_[vi] || (nd == dist_[vi] && nh < hops_[vi]);
      bool tie = nd == dist_[vi] && nh == hops_[vi];
      if (better) {
        dist_[vi] = nd;
        hops_[vi] = nh;
        pred_edge_[vi] = arc.edge;
        pred_node_[vi] = u;
        queue.emplace(nd, nh, arc.head);
      } else if (tie && lex_less_via(u, arc.edge, pred_node_[vi], pred_edge_[vi])) {
        pred_edge_[vi] = arc.edge;
        pred_node_[vi] = u;
      }
    }
  }
}

bool ShortestPathTree::reachable(NodeId d) const {
  return graph_->has_node(d) && pred_edge_[static_cast<std::size_t>(d)] != -1;
}

void ShortestPathTree::reversed_edges_to(NodeId n, std::vector<EdgeId>& out) const {
  out.clear();
  while (n != source_) {
    out.push_back(pred_edge_[static_cast<std::size_t>(n)]);
    n = pred_node_[static_cast<std::size_t>(n)];
  }
}

// Both candidates have equal weight and hop count, so the settled prefixes to
// u1 and u2 have equal length; compare prefix + last edge lexicographically.
bool ShortestPathTree::lex_less_via(NodeId u1, EdgeId e1, NodeId u2, EdgeId e2) const {
  std::vector<EdgeId> a;
  std::vector<EdgeId> b;
  reversed_edges_to(u1, a);
  reversed_edges_to(u2, b);
  std::reverse(a.begin(), a.end());
  std::reverse(b.begin(), b.end());
  a.push_back(e1);
  b.push_back(e2);
  return a < b;
}

std::optional<WeightedPath> ShortestPathTree::path_to(NodeId d) const {
  if (!graph_->has_node(d)) throw InputError("unknown node " + std::to_string(d));
  if (d == source_ || !reachable(d)) return std::nullopt;
  WeightedPath wp;
  reversed_edges_to(d, wp.path.edges);
  std::reverse(wp.path.edges.begin(), wp.path.edges.end());
  wp.path.source = source_;
  wp.path.target = d;
  wp.weight = dist_[static_cast<std::size_t>(d)];
  return wp;
}

std::optional<WeightedPath> lightest_path(const Graph& g, std::span<const double> weight,
                                          NodeId s, NodeId d) {
  if (!g.has_node(s)) throw InputError("unknown node " + std::to_string(s));
  if (!g.has_node(d)) throw InputError("unknown node " + std::to_string(d));
  if (s == d) throw InputError("source equals destination");
  return ShortestPathTree(g, weight, s).path_to(d);
}

std::vector<Path> enumerate_simple_paths(const Graph& g, NodeId s, NodeId d,
                                         std::size_t max_paths) {
  if (!g.has_node(s)) throw InputError("unknown node " + std::to_string(s));
  if (!g.has_node(d)) throw InputError("unknown node " + std::to_string(d));
  if (s == d) throw InputError("source equals destination");

  std::vector<Path> result;
  std::vector<bool> on_stack(static_cast<std::size_t>(g.num_nodes()), false);
  std::vector<EdgeId> prefix;

  std::function<void(NodeId)> dfs = [&](NodeId at) {
    if (at == d) {
      if (result.size() == max_paths) {
        throw InputError("more than " + std::to_string(max_paths) + " simple paths from " +
                         std::to_string(s) + " to " + std::to_string(d));
      }
      result.push_back(Path{prefix, s, d});
      return;
    }
    on_stack[static_cast<std::size_t>(at)] = true;
    for (const Arc& arc : g.arcs(at)) {
      if (on_stack[static_cast<std::size_t>(arc.head)]) continue;
      prefix.push_back(arc.edge);
      dfs(arc.head);
      prefix.pop_back();
    }
    on_stack[static_cast<std::size_t>(at)] = false;
  };
  dfs(s);
  return result;
}

}  // namespace circuit_route
