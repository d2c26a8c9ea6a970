#include "circuit_route/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "circuit_route/errors.hpp"
#include "json.hpp"

namespace circuit_route {

namespace {

using nlohmann::json;

std::size_t line_of(const std::string& text, std::size_t byte) {
  const auto end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError("graph: missing field " + where + "." + key);
  }
  return obj.at(key);
}

std::int64_t int_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw InputError("graph: " + where + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

RawGraph parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("graph: parse error at line " + std::to_string(line_of(text, e.byte)) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("graph: top-level value must be an object");

  RawGraph raw;
  const json& directed = field(doc, "directed", "graph");
  if (!directed.is_boolean()) throw InputError("graph: graph.directed must be a boolean");
  raw.directed = directed.get<bool>();

  const json& nodes = field(doc, "nodes", "graph");
  if (nodes.is_number_integer()) {
    raw.node_count = nodes.get<std::int64_t>();
  } else if (nodes.is_array()) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!nodes[i].is_number_integer()) {
        throw InputError("graph: graph.nodes[" + std::to_string(i) + "] must be an integer");
      }
      raw.node_labels.push_back(nodes[i].get<std::int64_t>());
    }
  } else {
    throw InputError("graph: graph.nodes must be a count or an array of labels");
  }

  const json& edges = field(doc, "edges", "graph");
  if (!edges.is_array()) throw InputError("graph: graph.edges must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "graph.edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    RawGraph::RawEdge re{};
    re.id = int_field(e, "id", where);
    re.u = int_field(e, "u", where);
    re.v = int_field(e, "v", where);
    const json& cap = field(e, "cap", where);
    if (!cap.is_number()) throw InputError("graph: " + where + ".cap must be a number");
    re.cap = cap.get<double>();
    raw.edges.push_back(re);
  }
  return raw;
}

Graph read_graph(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return validate_graph(parse_graph_json(text));
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  return read_graph(in);
}

std::string graph_to_json(const Graph& g) {
  nlohmann::ordered_json doc;
  doc["directed"] = g.directed();
  bool identity = true;
  for (NodeId n = 0; n < g.num_nodes(); ++n) identity = identity && g.label(n) == n;
  if (identity) {
    doc["nodes"] = g.num_nodes();
  } else {
    auto labels = nlohmann::ordered_json::array();
    for (NodeId n = 0; n < g.num_nodes(); ++n) labels.push_back(g.label(n));
    doc["nodes"] = labels;
  }
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"id", e.id}, {"u", g.label(e.u)}, {"v", g.label(e.v)}, {"cap", e.capacity}});
  }
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write graph file " + path);
  out << graph_to_json(g);
}

}  // namespace circuit_route
