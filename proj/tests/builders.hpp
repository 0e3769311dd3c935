#pragma once

// Scenario document builders and run helpers shared across the test
// suite. Documents are built as JSON and pushed through the public
// parser so every generated scenario also exercises validation.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "itmsim/metrics.hpp"
#include "itmsim/scenario.hpp"
#include "itmsim/simulation.hpp"

namespace builders {

using nlohmann::json;

inline json jnode(const std::string& name, const std::string& kind, const std::string& addr = "") {
  json n = {{"name", name}, {"kind", kind}};
  if (!addr.empty()) n["addr"] = addr;
  return n;
}

inline json jlink(const std::string& a, const std::string& b, itmsim::SimTime latency = 1,
                  std::uint32_t capacity = 0) {
  json l = {{"a", a}, {"b", b}, {"latency", latency}};
  if (capacity > 0) l["capacity"] = capacity;
  return l;
}

inline json jmonitor(const std::string& name, const std::string& attachment,
                     const std::string& range, std::uint64_t threshold,
                     itmsim::SimTime bucket_width = 10, itmsim::SimTime window = 600,
                     itmsim::SimTime report_period = 20) {
  return {{"name", name},
          {"attachment", attachment},
          {"watched_range", range},
          {"bucket_width", bucket_width},
          {"window", window},
          {"threshold", threshold},
          {"report_period", report_period}};
}

inline itmsim::Scenario parse_doc(const json& doc) {
  return itmsim::parse_scenario_text(doc.dump());
}

inline json run_report_doc(const json& doc, std::optional<std::uint64_t> seed = {}) {
  const itmsim::Scenario sc = parse_doc(doc);
  itmsim::Simulation sim(sc, seed.value_or(sc.seed));
  sim.run();
  return json::parse(itmsim::report_json_text(sim));
}

inline std::string scenario_path(const std::string& file) {
  return std::string(ITMSIM_SCENARIO_DIR) + "/" + file;
}

inline json run_report_file(const std::string& file, std::optional<std::uint64_t> seed = {}) {
  const itmsim::Scenario sc = itmsim::load_scenario_file(scenario_path(file));
  itmsim::Simulation sim(sc, seed.value_or(sc.seed));
  sim.run();
  return json::parse(itmsim::report_json_text(sim));
}

// injected == delivered + dropped + still in flight, checked on every run.
inline bool conserved(const json& report) {
  const json& t = report.at("traffic");
  return t.at("injected").get<std::uint64_t>() ==
         t.at("delivered").get<std::uint64_t>() + t.at("dropped_capacity").get<std::uint64_t>() +
             t.at("dropped_unroutable").get<std::uint64_t>() +
             t.at("in_flight_at_end").get<std::uint64_t>();
}

inline std::uint64_t series_sum(const json& report, const std::string& which, itmsim::SimTime from,
                                itmsim::SimTime to) {
  std::uint64_t total = 0;
  for (const json& point : report.at("series").at(which)) {
    const auto tick = point.at(0).get<itmsim::SimTime>();
    if (tick >= from && tick <= to) total += point.at(1).get<std::uint64_t>();
  }
  return total;
}

inline itmsim::SimTime series_last_tick(const json& report, const std::string& which) {
  itmsim::SimTime last = 0;
  for (const json& point : report.at("series").at(which))
    last = std::max(last, point.at(0).get<itmsim::SimTime>());
  return last;
}

// Random routed tree with full monitor coverage: a detector at the
// victim's edge router plus a quiet sensor on every router, a honeypot,
// a data center, and a botnet flooding the victim. The shape behind the
// full-coverage traceback and agent-deletion properties.
struct RandomAttackSpec {
  int routers = 6;
  int bots = 3;
  std::uint64_t detector_threshold = 15;
  itmsim::SimTime duration = 240;
  std::vector<std::string> sensor_names;  // filled by the builder
};

inline json random_attack_doc(std::uint64_t gen_seed, RandomAttackSpec& spec) {
  std::mt19937_64 g(gen_seed);
  auto pick_router = [&](int n) {
    return "r" + std::to_string(std::uniform_int_distribution<int>(0, n - 1)(g));
  };

  json nodes = json::array();
  json links = json::array();
  for (int i = 0; i < spec.routers; ++i) nodes.push_back(jnode("r" + std::to_string(i), "router"));
  for (int i = 1; i < spec.routers; ++i) {
    const int parent = std::uniform_int_distribution<int>(0, i - 1)(g);
    const auto lat =
        static_cast<itmsim::SimTime>(std::uniform_int_distribution<int>(1, 2)(g));
    links.push_back(jlink("r" + std::to_string(i), "r" + std::to_string(parent), lat));
  }

  auto host = [&](const std::string& name, const std::string& addr, const std::string& at) {
    nodes.push_back(jnode(name, "host", addr));
    links.push_back(jlink(name, at, 1));
  };
  host("victim", "10.1.0.10", "r0");
  host("honeypot", "10.9.0.9", pick_router(spec.routers));
  host("dchost", "10.3.0.3", pick_router(spec.routers));
  host("cnc", "10.4.0.4", pick_router(spec.routers));
  host("master", "10.4.0.5", pick_router(spec.routers));
  json candidates = json::array();
  for (int b = 0; b < spec.bots; ++b) {
    const std::string name = "b" + std::to_string(b);
    host(name, "10.7.0." + std::to_string(10 + b), pick_router(spec.routers));
    candidates.push_back(name);
  }
  host("l1", "10.8.0.1", pick_router(spec.routers));
  host("l2", "10.8.0.2", pick_router(spec.routers));

  json monitors = json::array();
  monitors.push_back(jmonitor("det", "r0", "10.1.0.0/16", spec.detector_threshold));
  spec.sensor_names.clear();
  for (int i = 0; i < spec.routers; ++i) {
    const std::string name = "s" + std::to_string(i);
    monitors.push_back(jmonitor(name, "r" + std::to_string(i), "10.250.0.0/16", 1000000000ull));
    spec.sensor_names.push_back(name);
  }

  json doc;
  doc["schema"] = 1;
  doc["name"] = "random_attack";
  doc["seed"] = 1;
  doc["duration"] = spec.duration;
  doc["topology"] = {{"nodes", nodes}, {"links", links}};
  doc["monitors"] = monitors;
  doc["detection"] = {{"mode", "distributed"}, {"global_threshold", 0}};
  doc["datacenter"] = {{"node", "dchost"}, {"query_service_rate", 4}};
  doc["honeypot"] = {{"node", "honeypot"},
                     {"entrap_files", json::array({{{"selector", 7}, {"name", "payroll.db"}}})}};
  doc["botnet"] = {{"candidates", candidates},
                   {"vulnerability_prob", 1.0},
                   {"scan_rate", 4},
                   {"scan_start", 2},
                   {"cnc", "cnc"},
                   {"botmaster", "master"},
                   {"poll_interval", 50},
                   {"commands", json::array({{{"at", 30},
                                              {"flood", "tcp_syn"},
                                              {"target", "victim"},
                                              {"rate", 3},
                                              {"duration", 60},
                                              {"spoof", "uniform"}}})}};
  doc["legit"] = json::array(
      {{{"hosts", json::array({"l1", "l2"})}, {"rate", 0.5}, {"dst_pool", json::array({"l1", "l2"})}}});
  doc["trace"] = {{"window_back", 300}, {"collect_timeout", 0}};
  doc["victim"] = "victim";
  return doc;
}

// Broadcast amplification scenario: one bot, one amplifier subnet with
// `members` responding hosts behind a gateway, victim one hop past it.
inline json smurf_doc(int members) {
  json nodes = json::array({jnode("rA", "router"), jnode("rG", "router"), jnode("rV", "router"),
                            jnode("victim", "host", "10.1.0.10"), jnode("bot", "host", "10.7.0.11"),
                            jnode("cnc", "host", "10.4.0.4"), jnode("master", "host", "10.4.0.5")});
  json links = json::array({jlink("rA", "rG"), jlink("rG", "rV"), jlink("victim", "rV"),
                            jlink("bot", "rA"), jlink("cnc", "rA"), jlink("master", "rA")});
  json amps = json::array();
  for (int i = 0; i < members; ++i) {
    const std::string name = "amp" + std::to_string(i);
    nodes.push_back(jnode(name, "host", "10.5.0." + std::to_string(10 + i)));
    links.push_back(jlink(name, "rG"));
    amps.push_back(name);
  }

  json doc;
  doc["schema"] = 1;
  doc["name"] = "smurf_sweep";
  doc["seed"] = 3;
  doc["duration"] = 120;
  doc["topology"] = {{"nodes", nodes},
                     {"links", links},
                     {"subnets", json::array({{{"cidr", "10.5.0.0/24"},
                                               {"gateway", "rG"},
                                               {"members", amps}}})}};
  doc["detection"] = {{"mode", "distributed"}, {"global_threshold", 0}};
  doc["botnet"] = {{"candidates", json::array({"bot"})},
                   {"vulnerability_prob", 1.0},
                   {"scan_rate", 4},
                   {"scan_start", 2},
                   {"cnc", "cnc"},
                   {"botmaster", "master"},
                   {"poll_interval", 50},
                   {"commands", json::array({{{"at", 10},
                                              {"flood", "smurf"},
                                              {"target", "victim"},
                                              {"rate", 2},
                                              {"duration", 25},
                                              {"amplifier", "10.5.0.0/24"}}})}};
  doc["victim"] = "victim";
  return doc;
}

// Two-router scenario whose detector blocks mid-attack, plus a control
// twin whose threshold is unreachable so the flood always lands.
inline json block_doc(std::uint64_t detector_threshold) {
  json nodes = json::array(
      {jnode("r0", "router"), jnode("r1", "router"), jnode("victim", "host", "10.1.0.10"),
       jnode("honeypot", "host", "10.9.0.9"), jnode("dchost", "host", "10.3.0.3"),
       jnode("l2", "host", "10.8.0.2"), jnode("cnc", "host", "10.4.0.4"),
       jnode("master", "host", "10.4.0.5"), jnode("b1", "host", "10.7.0.11"),
       jnode("b2", "host", "10.7.0.12"), jnode("l1", "host", "10.8.0.1")});
  json links = json::array({jlink("r0", "r1", 2), jlink("victim", "r0"), jlink("honeypot", "r0"),
                            jlink("dchost", "r0"), jlink("l2", "r0"), jlink("cnc", "r1"),
                            jlink("master", "r1"), jlink("b1", "r1"), jlink("b2", "r1"),
                            jlink("l1", "r1")});

  json doc;
  doc["schema"] = 1;
  doc["name"] = "block_redirect";
  doc["seed"] = 11;
  doc["duration"] = 260;
  doc["topology"] = {{"nodes", nodes}, {"links", links}};
  doc["monitors"] = json::array({jmonitor("det", "r0", "10.1.0.0/16", detector_threshold),
                                 jmonitor("s1", "r1", "10.250.0.0/16", 1000000000ull)});
  doc["detection"] = {{"mode", "distributed"}, {"global_threshold", 0}};
  doc["datacenter"] = {{"node", "dchost"}, {"query_service_rate", 4}};
  doc["honeypot"] = {{"node", "honeypot"},
                     {"entrap_files", json::array({{{"selector", 7}, {"name", "payroll.db"}}})}};
  doc["botnet"] = {{"candidates", json::array({"b1", "b2"})},
                   {"vulnerability_prob", 1.0},
                   {"scan_rate", 4},
                   {"scan_start", 2},
                   {"cnc", "cnc"},
                   {"botmaster", "master"},
                   {"poll_interval", 50},
                   {"commands", json::array({{{"at", 30},
                                              {"flood", "udp"},
                                              {"target", "victim"},
                                              {"rate", 4},
                                              {"duration", 100}}})}};
  doc["legit"] = json::array(
      {{{"hosts", json::array({"l1", "l2"})}, {"rate", 1.0}, {"dst_pool", json::array({"l1", "l2"})}}});
  doc["trace"] = {{"window_back", 200}, {"collect_timeout", 0}};
  doc["victim"] = "victim";
  return doc;
}

}  // namespace builders
