#include <fstream>
#include <set>
#include <sstream>

#include "circuit_route/errors.hpp"
#include "circuit_route/trace.hpp"
#include "json.hpp"

namespace circuit_route {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail_at(std::size_t index, const std::string& what) {
  throw InputError("event " + std::to_string(index) + ": " + what);
}

json parse_line(const std::string& line, std::size_t line_no, const char* what) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + " line " + std::to_string(line_no) +
                     ": malformed record: " + e.what());
  }
}

void check_header(const json& header, std::size_t line_no, const char* what) {
  if (!header.is_object() || !header.contains("format") || !header["format"].is_string() ||
      header["format"].get<std::string>() != kFormatTag) {
    throw InputError(std::string(what) + " line " + std::to_string(line_no) +
                     ": expected header {\"format\":\"" + kFormatTag + "\"}");
  }
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::int64_t int_member(const json& rec, const char* key, std::size_t line_no) {
  if (!rec.contains(key) || !rec[key].is_number_integer()) {
    throw InputError("trace line " + std::to_string(line_no) + ": field \"" + key +
                     "\" missing or not an integer");
  }
  return rec[key].get<std::int64_t>();
}

}  // namespace

void validate_trace(const Trace& trace) {
  std::set<RequestId> arrived;
  std::set<RequestId> departed;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const Event& ev = trace.events[i];
    if (i > 0 && ev.t <= trace.events[i - 1].t) fail_at(i, "time does not strictly increase");
    if (ev.kind == EventKind::arrive) {
      if (!arrived.insert(ev.k).second) fail_at(i, "request " + std::to_string(ev.k) + " arrives twice");
      if (ev.s < 0 || ev.d < 0) fail_at(i, "arrival without source/destination");
      if (ev.s == ev.d) fail_at(i, "request " + std::to_string(ev.k) + " has source equal to destination");
    } else {
      if (!arrived.count(ev.k)) fail_at(i, "request " + std::to_string(ev.k) + " departs before arriving");
      if (!departed.insert(ev.k).second) fail_at(i, "request " + std::to_string(ev.k) + " departs twice");
    }
  }
}

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json rec = parse_line(line, line_no, "trace");
    if (!have_header) {
      check_header(rec, line_no, "trace");
      if (rec.contains("graph") && rec["graph"].is_string()) trace.graph_ref = rec["graph"];
      have_header = true;
      continue;
    }
    if (!rec.is_object()) throw InputError("trace line " + std::to_string(line_no) + ": malformed record");
    Event ev;
    ev.t = int_member(rec, "t", line_no);
    ev.k = int_member(rec, "k", line_no);
    if (!rec.contains("kind") || !rec["kind"].is_string()) {
      throw InputError("trace line " + std::to_string(line_no) + ": field \"kind\" missing");
    }
    const std::string kind = rec["kind"];
    if (kind == "arrive") {
      ev.kind = EventKind::arrive;
      ev.s = static_cast<NodeId>(int_member(rec, "s", line_no));
      ev.d = static_cast<NodeId>(int_member(rec, "d", line_no));
    } else if (kind == "depart") {
      ev.kind = EventKind::depart;
    } else {
      throw InputError("trace line " + std::to_string(line_no) + ": unknown kind \"" + kind + "\"");
    }
    trace.events.push_back(ev);
  }
  if (!have_header) throw InputError("trace: missing format header");
  validate_trace(trace);
  return trace;
}

void write_trace(const Trace& trace, std::ostream& out) {
  ordered_json header;
  header["format"] = kFormatTag;
  if (!trace.graph_ref.empty()) header["graph"] = trace.graph_ref;
  out << header.dump() << '\n';
  for (const Event& ev : trace.events) {
    ordered_json rec;
    rec["t"] = ev.t;
    rec["kind"] = ev.kind == EventKind::arrive ? "arrive" : "depart";
    rec["k"] = ev.k;
    if (ev.kind == EventKind::arrive) {
      rec["s"] = ev.s;
      rec["d"] = ev.d;
    }
    out << rec.dump() << '\n';
  }
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file " + path);
  return parse_trace(in);
}

void save_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write trace file " + path);
  write_trace(trace, out);
}

Certificate parse_certificate(std::istream& in, const Graph& g, const Trace& trace) {
  std::map<RequestId, std::pair<NodeId, NodeId>> endpoints;
  for (const Event& ev : trace.events) {
    if (ev.kind == EventKind::arrive) endpoints[ev.k] = {ev.s, ev.d};
  }

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::string body;
  std::size_t body_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!have_header) {
      if (blank(line)) continue;
      check_header(parse_line(line, line_no, "certificate"), line_no, "certificate");
      have_header = true;
      body_line = line_no + 1;
      continue;
    }
    body += line;
    body += '\n';
  }
  if (!have_header) throw InputError("certificate: missing format header");

  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw InputError("certificate: malformed body starting at line " + std::to_string(body_line) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("certificate: body must be an object");

  Certificate cert;
  for (const auto& [key, edges] : doc.items()) {
    RequestId k = 0;
    std::size_t used = 0;
    try {
      k = std::stoll(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty()) throw InputError("certificate: bad request id \"" + key + "\"");
    auto it = endpoints.find(k);
    if (it == endpoints.end()) throw InputError("certificate: request " + key + " not in trace");
    if (!edges.is_array()) throw InputError("certificate: request " + key + ": expected edge list");
    Path p;
    p.source = it->second.first;
    p.target = it->second.second;
    for (const auto& e : edges) {
      if (!e.is_number_integer()) throw InputError("certificate: request " + key + ": edge ids must be integers");
      p.edges.push_back(e.get<EdgeId>());
    }
    try {
      check_path(g, p);
    } catch (const InputError& err) {
      throw InputError("certificate: request " + key + ": " + err.what());
    }
    cert.paths.emplace(k, std::move(p));
  }
  return cert;
}

void write_certificate(const Certificate& cert, std::ostream& out) {
  ordered_json header;
  header["format"] = kFormatTag;
  out << header.dump() << '\n';
  ordered_json body = ordered_json::object();
  for (const auto& [k, path] : cert.paths) body[std::to_string(k)] = path.edges;
  out << body.dump() << '\n';
}

Certificate load_certificate(const std::string& path, const Graph& g, const Trace& trace) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open certificate file " + path);
  return parse_certificate(in, g, trace);
}

void save_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write certificate file " + path);
  write_certificate(cert, out);
}

std::size_t peak_alive(const Trace& trace) {
  std::size_t alive = 0;
  std::size_t peak = 0;
  for (const Event& ev : trace.events) {
    if (ev.kind == EventKind::arrive) {
      peak = std::max(peak, ++alive);
    } else {
      --alive;
    }
  }
  return peak;
}

}  // namespace circuit_route
