// trace.hpp - request events, traces, planted certificates and their formats.
//
// Trace files are JSON Lines. The first line is the format header
//   {"format":"circuit-route/1"}
// followed by one event per line:
//   {"t":0,"kind":"arrive","k":1,"s":0,"d":3}
//   {"t":1,"kind":"depart","k":1}
//
// Certificate files carry the same header line followed by one JSON object
// mapping request ids to edge-id lists: {"1":[0,4],"2":[3]}.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "circuit_route/graph.hpp"

namespace circuit_route {

inline constexpr const char* kFormatTag = "circuit-route/1";

using RequestId = std::int64_t;

enum class EventKind { arrive, depart };

struct Event {
  std::int64_t t = 0;
  EventKind kind = EventKind::arrive;
  RequestId k = 0;
  NodeId s = -1;  // arrivals only
  NodeId d = -1;  // arrivals only

  static Event arrival(std::int64_t t, RequestId k, NodeId s, NodeId d) {
    return Event{t, EventKind::arrive, k, s, d};
  }
  static Event departure(std::int64_t t, RequestId k) {
    return Event{t, EventKind::depart, k, -1, -1};
  }
  bool operator==(const Event&) const = default;
};

struct Trace {
  std::vector<Event> events;
  std::string graph_ref;  // optional, carried in the header line

  bool operator==(const Trace&) const = default;
};

// Throws InputError naming the offending event index: double arrival,
// departure without arrival, double departure, nonincreasing time,
// source equal to destination.
void validate_trace(const Trace& trace);

Trace parse_trace(std::istream& in);
void write_trace(const Trace& trace, std::ostream& out);
Trace load_trace(const std::string& path);
void save_trace(const Trace& trace, const std::string& path);

// Planted routing: one path per request, witnessing load <= 1 at all times.
struct Certificate {
  std::map<RequestId, Path> paths;
  bool operator==(const Certificate&) const = default;
};

// Edge lists are stored without endpoints; parsing needs the graph and trace
// to recover and check them.
Certificate parse_certificate(std::istream& in, const Graph& g, const Trace& trace);
void write_certificate(const Certificate& cert, std::ostream& out);
Certificate load_certificate(const std::string& path, const Graph& g, const Trace& trace);
void save_certificate(const Certificate& cert, const std::string& path);

// Largest number of simultaneously alive requests over the trace.
std::size_t peak_alive(const Trace& trace);

}  // namespace circuit_route
