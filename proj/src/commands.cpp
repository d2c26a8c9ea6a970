#include "circuit_route/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "circuit_route/errors.hpp"
#include "circuit_route/generators.hpp"
#include "circuit_route/graph_io.hpp"
#include "circuit_route/log.hpp"
#include "circuit_route/router.hpp"
#include "json.hpp"

namespace circuit_route {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kTraceSeedMix = 0x9E3779B97F4A7C15ULL;

std::string out_file(const RunConfig& config, const char* name) {
  return (fs::path(config.out_dir) / name).string();
}

void ensure_out_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    throw InputError("cannot create output directory " + config.out_dir);
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

ordered_json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("missing artifact " + path);
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw InputError("malformed artifact " + path + ": " + e.what());
  }
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
  std::string quoted = "\"";
  for (char c : v) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// RFC 4180: comma separated, CRLF terminated, quoted where needed.
std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row += ',';
    row += csv_field(fields[i]);
  }
  return row + "\r\n";
}

std::string describe(SubStep at) {
  return "(t=" + std::to_string(at.t) + ", i=" + std::to_string(at.i) + ")";
}

}  // namespace

void validate_config(const RunConfig& config) {
  if (!(config.tol > 0.0) || !std::isfinite(config.tol)) throw InputError("--tol must be positive");
  if (config.format != "json" && config.format != "csv") {
    throw InputError("--format must be json or csv");
  }
  if (config.kind != "planted" && config.kind != "churn") {
    throw InputError("--kind must be planted or churn");
  }
  if (config.out_dir.empty()) throw InputError("--out must not be empty");
}

int cmd_generate(const RunConfig& config, std::ostream& out) {
  validate_config(config);
  ensure_out_dir(config);

  Graph g;
  if (!config.graph_path.empty()) {
    g = load_graph(config.graph_path);
  } else {
    GraphParams gp;
    gp.nodes = config.nodes;
    gp.edges = config.edges;
    gp.directed = config.directed;
    gp.max_capacity = config.max_capacity;
    g = gen_graph(gp, config.seed);
  }

  const std::uint64_t trace_seed = config.seed * kTraceSeedMix + 1;
  std::pair<Trace, Certificate> generated;
  if (config.kind == "planted") {
    PlantedParams pp;
    pp.requests = config.requests;
    pp.max_duration = config.max_duration;
    pp.max_alive = config.max_alive;
    generated = gen_planted(g, pp, trace_seed);
  } else {
    const EdgeId focus = config.focus >= 0 ? config.focus : find_churn_focus(g);
    if (focus < 0) throw InputError("graph has no edge with an alternative route");
    generated = gen_churn_stress(g, focus, config.cycles, trace_seed);
  }
  auto& [trace, cert] = generated;
  trace.graph_ref = "graph.json";

  save_graph(g, out_file(config, "graph.json"));
  save_trace(trace, out_file(config, "trace.jsonl"));
  save_certificate(cert, out_file(config, "cert.json"));

  out << "generated " << config.kind << ": N=" << trace.events.size() << " |V|=" << g.num_nodes()
      << " m=" << g.num_edges() << " alive-peak=" << peak_alive(trace)
      << " planted-load=" << verify_certificate(g, trace, cert) << '\n';
  return kExitOk;
}

int cmd_run(const RunConfig& config, std::ostream& out) {
  validate_config(config);
  if (config.graph_path.empty() || config.trace_path.empty()) {
    throw InputError("run needs --graph and --trace");
  }
  const Graph g = load_graph(config.graph_path);
  const Trace trace = load_trace(config.trace_path);
  std::optional<double> planted;
  if (!config.cert_path.empty()) {
    planted = verify_certificate(g, trace, load_certificate(config.cert_path, g, trace));
  }
  ensure_out_dir(config);

  Router router(g);
  AuditOptions options;
  options.enabled = config.checks;
  options.tol = config.tol;
  Auditor auditor(g, options);
  auditor.begin(router);

  const auto m = static_cast<std::size_t>(g.num_edges());
  std::vector<int> edge_peak(m, 0);
  auto loads = ordered_json::array();
  double peak_load = 0.0;
  std::int64_t peak_t = -1;
  std::size_t dummy_events = 0;
  for (const Event& ev : trace.events) {
    StepReport report = router.step(ev);
    auditor.observe(router, report);
    dummy_events += report.records.size() - 1;
    for (std::size_t e = 0; e < m; ++e) edge_peak[e] = std::max(edge_peak[e], router.path_counts()[e]);
    if (report.max_load > peak_load) {
      peak_load = report.max_load;
      peak_t = ev.t;
    }
    loads.push_back({ev.t, report.max_load});
    if (log_level() >= LogLevel::debug) {
      log(LogLevel::debug, "t=" + std::to_string(ev.t) + " reroutes=" +
                               std::to_string(report.reroutes.size()) +
                               " max_load=" + std::to_string(report.max_load));
    }
  }
  auditor.finish(router);

  const double log_bound = std::log2(12.0 * static_cast<double>(m));
  ordered_json metrics;
  metrics["format"] = kFormatTag;
  metrics["graph"] = {{"nodes", g.num_nodes()}, {"edges", g.num_edges()}, {"directed", g.directed()}};
  metrics["events"] = trace.events.size();
  metrics["dummy_events"] = dummy_events;
  metrics["alive_peak"] = peak_alive(trace);
  metrics["peak_load"] = peak_load;
  metrics["peak_load_t"] = peak_t;
  metrics["max_x"] = auditor.max_x();
  metrics["load_bound"] = 4.0 * log_bound;
  metrics["reroute_bound"] = std::floor(log_bound);
  if (planted) metrics["certificate_load"] = *planted;

  auto edges = ordered_json::array();
  for (const Edge& e : g.edges()) {
    const int peak = edge_peak[static_cast<std::size_t>(e.id)];
    edges.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"cap", e.capacity},
                     {"peak_paths", peak}, {"peak_load", peak / e.capacity}});
  }
  metrics["edges"] = edges;

  std::map<int, std::size_t> histogram;
  std::size_t total_reroutes = 0;
  int max_reroutes = 0;
  auto per_request = ordered_json::object();
  for (const Event& ev : trace.events) {
    if (ev.kind != EventKind::arrive) continue;
    const int r = router.reroutes(ev.k);
    ++histogram[r];
    total_reroutes += static_cast<std::size_t>(r);
    max_reroutes = std::max(max_reroutes, r);
    if (r > 0) per_request[std::to_string(ev.k)] = r;
  }
  auto hist = ordered_json::array();
  for (const auto& [r, n] : histogram) hist.push_back({{"reroutes", r}, {"requests", n}});
  metrics["reroutes_total"] = total_reroutes;
  metrics["reroutes_max"] = max_reroutes;
  metrics["reroute_histogram"] = hist;
  metrics["reroutes"] = per_request;
  metrics["loads"] = loads;

  write_text(out_file(config, "metrics.json"), metrics.dump(2) + "\n");
  write_text(out_file(config, "audit.json"), auditor.to_json());

  out << "run: N=" << trace.events.size() << " m=" << g.num_edges() << " peak-load=" << peak_load
      << " max-x=" << auditor.max_x() << " reroutes=" << total_reroutes << '\n';
  bool ok = true;
  for (const CheckResult& r : auditor.results()) {
    if (!r.enabled) continue;
    out << (r.pass ? "  pass " : "  FAIL ") << check_name(r.check);
    if (r.evaluations > 0) out << "  worst-slack=" << r.worst_slack << " at " << describe(*r.worst_at);
    if (!r.pass) out << "  first-failure " << describe(*r.first_failure);
    out << '\n';
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitInvariant;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
  validate_config(config);
  if (config.graph_path.empty() || config.trace_path.empty()) {
    throw InputError("report needs --graph and --trace");
  }
  if (config.cert_path.empty() && !config.oracle) {
    throw InputError("report needs --cert or --oracle for a reference load");
  }
  const Graph g = load_graph(config.graph_path);
  const Trace trace = load_trace(config.trace_path);
  const ordered_json metrics = read_json(out_file(config, "metrics.json"));
  if (!metrics.contains("loads") || !metrics["loads"].is_array() ||
      metrics["loads"].size() != trace.events.size()) {
    throw InputError("metrics.json does not match the trace; rerun `run` first");
  }

  std::vector<double> cert_loads;
  if (!config.cert_path.empty()) {
    cert_loads = certificate_loads(g, trace, load_certificate(config.cert_path, g, trace));
  }
  std::vector<double> opt_loads;
  if (config.oracle) opt_loads = optimal_loads(g, trace, config.budget);
  const auto& reference = config.oracle ? opt_loads : cert_loads;

  LoadProfile profile;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& point = metrics["loads"][i];
    profile.points.push_back({point[0].get<std::int64_t>(), point[1].get<double>(), reference[i]});
  }
  const CompetitiveReport rep = competitive_report(profile, g.num_edges());

  const char* reference_name = config.oracle ? "enumeration" : "certificate";
  if (config.format == "json") {
    ordered_json doc;
    doc["format"] = kFormatTag;
    doc["reference"] = reference_name;
    doc["alg_load"] = rep.alg_load;
    doc["reference_load"] = rep.opt_load;
    if (!cert_loads.empty()) doc["certificate_load"] = *std::max_element(cert_loads.begin(), cert_loads.end());
    if (!opt_loads.empty()) doc["optimal_load"] = *std::max_element(opt_loads.begin(), opt_loads.end());
    doc["ratio"] = rep.ratio;
    doc["bound"] = rep.bound;
    doc["within_bound"] = rep.within_bound;
    doc["flagged"] = rep.flagged;
    doc["edges"] = metrics.value("edges", ordered_json::array());
    doc["reroute_histogram"] = metrics.value("reroute_histogram", ordered_json::array());
    write_text(out_file(config, "report.json"), doc.dump(2) + "\n");
  } else {
    std::string summary = csv_row({"reference", "alg_load", "reference_load", "ratio", "bound",
                                   "within_bound", "flagged"});
    summary += csv_row({reference_name, csv_number(rep.alg_load), csv_number(rep.opt_load),
                        csv_number(rep.ratio), csv_number(rep.bound),
                        rep.within_bound ? "true" : "false", rep.flagged ? "true" : "false"});
    write_text(out_file(config, "report.csv"), summary);

    std::string edges = csv_row({"edge", "u", "v", "capacity", "peak_paths", "peak_load"});
    for (const auto& e : metrics.value("edges", ordered_json::array())) {
      edges += csv_row({std::to_string(e["id"].get<int>()), std::to_string(e["u"].get<int>()),
                        std::to_string(e["v"].get<int>()), csv_number(e["cap"].get<double>()),
                        std::to_string(e["peak_paths"].get<int>()),
                        csv_number(e["peak_load"].get<double>())});
    }
    write_text(out_file(config, "edge_loads.csv"), edges);

    std::string reroutes = csv_row({"reroutes", "requests"});
    for (const auto& h : metrics.value("reroute_histogram", ordered_json::array())) {
      reroutes += csv_row({std::to_string(h["reroutes"].get<int>()),
                           std::to_string(h["requests"].get<std::size_t>())});
    }
    write_text(out_file(config, "reroutes.csv"), reroutes);
  }

  out << "report: reference=" << reference_name << " alg-load=" << rep.alg_load
      << " reference-load=" << rep.opt_load << " ratio=" << rep.ratio << " bound=" << rep.bound
      << (rep.within_bound ? " pass" : " ABOVE BOUND") << '\n';
  return rep.flagged ? kExitInvariant : kExitOk;
}

int invoke(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return command(config, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const RoutingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace circuit_route
