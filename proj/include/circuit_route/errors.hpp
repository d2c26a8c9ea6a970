#pragma once

#include <stdexcept>
#include <string>

namespace circuit_route {

// Malformed or inconsistent input: graph files, traces, certificates,
// generator parameters. The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request the router cannot serve as asked: duplicate arrival, unknown
// departure, unreachable destination.
class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circuit_route
