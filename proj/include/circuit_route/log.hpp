#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace circuit_route {

enum class LogLevel { error = 0, info = 1, debug = 2 };

// Verbosity from CIRCUIT_ROUTE_LOG: "error" (default), "info" or "debug".
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("CIRCUIT_ROUTE_LOG");
    const std::string v = env ? env : "";
    if (v == "debug" || v == "2") return LogLevel::debug;
    if (v == "info" || v == "1") return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) <= static_cast<int>(log_level())) {
    static const char* tags[] = {"error", "info", "debug"};
    std::cerr << "[" << tags[static_cast<int>(level)] << "] " << msg << '\n';
  }
}

}  // namespace circuit_route
