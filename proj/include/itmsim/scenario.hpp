#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itmsim/types.hpp"

namespace itmsim {

// Parsed scenario document. Node references are kept as names here and
// resolved against the topology when the simulation is built; loading
// validates that every reference resolves.

struct ScenarioNode {
  std::string name;
  std::string kind;  // "host" | "router"
  std::string addr;  // dotted quad, empty = auto-assigned
};

struct ScenarioLink {
  std::string a;
  std::string b;
  std::uint32_t capacity = 0;  // packets per tick, 0 = unbounded
  SimTime latency = 1;
};

struct ScenarioSubnet {
  std::string cidr;  // "a.b.c.d/len"
  std::string gateway;
  std::vector<std::string> members;
};

struct ScenarioTopology {
  std::vector<ScenarioNode> nodes;
  std::vector<ScenarioLink> links;
  std::vector<ScenarioSubnet> subnets;
};

struct ScenarioMonitor {
  std::string name;
  std::string attachment;
  std::string watched_range;  // cidr
  SimTime bucket_width = 10;
  SimTime window = 100;
  std::uint64_t threshold = 100;
  SimTime report_period = 50;
};

struct ScenarioDetection {
  std::string mode = "distributed";  // or "centralized"
  std::uint64_t global_threshold = 0;
};

struct ScenarioQuery {
  SimTime at = 0;
  std::string lane = "public";  // or "private"
  std::string monitor;
  SimTime from = 0;
  SimTime to = 0;
};

struct ScenarioDatacenter {
  std::string node;
  std::uint32_t query_service_rate = 1;
};

struct ScenarioEntrapFile {
  std::uint32_t selector = 0;
  std::string name;
};

struct ScenarioHoneypot {
  std::string name = "honeypot";
  std::string node;
  std::vector<ScenarioEntrapFile> entrap_files;
  std::uint32_t bandwidth_cap = 0;
  SimTime trigger_delay = 0;
  bool deceive_responses = false;
};

struct ScenarioCommand {
  SimTime at = 0;
  std::string flood = "tcp_syn";  // tcp_syn|tcp_ack|udp|icmp_echo|smurf
  std::string target;             // node name or dotted quad
  std::uint32_t rate = 1;
  SimTime duration = 1;
  std::string spoof = "none";  // none|uniform
  std::uint32_t size = 64;
  std::uint32_t selector = 0;
  std::string amplifier;  // subnet cidr, smurf only
};

struct ScenarioBotnet {
  std::vector<std::string> candidates;
  double vulnerability_prob = 1.0;
  std::uint32_t scan_rate = 1;
  SimTime scan_start = 0;
  std::optional<SimTime> establish_at;  // default: right after the scan ends
  std::string cnc;
  std::string botmaster;
  SimTime poll_interval = 10;
  std::string ddns_name;   // recorded, no dynamics
  std::string static_ip;   // recorded, no dynamics
  std::vector<ScenarioCommand> commands;
};

struct ScenarioLegit {
  std::vector<std::string> hosts;
  double rate = 1.0;  // mean packets per tick per host
  std::vector<std::string> dst_pool;
  std::uint32_t size = 64;
};

struct ScenarioPrevention {
  std::string agent;
  std::optional<SimTime> infiltrate_at;
  std::optional<SimTime> shutdown_at;
};

struct ScenarioBaselines {
  bool ppm = false;
  double p = 0.04;
};

struct ScenarioTrace {
  SimTime window_back = 0;     // how far before first-seen the flow window reaches
  SimTime collect_timeout = 0; // 0 = twice the worst instruction round trip
};

struct Scenario {
  int schema = 1;
  std::string name;
  std::uint64_t seed = 1;
  SimTime duration = 100;
  ScenarioTopology topology;
  std::vector<ScenarioMonitor> monitors;
  ScenarioDetection detection;
  std::optional<ScenarioDatacenter> datacenter;
  std::optional<ScenarioHoneypot> honeypot;
  std::optional<ScenarioBotnet> botnet;
  std::vector<ScenarioLegit> legit;
  std::optional<ScenarioPrevention> prevention;
  ScenarioBaselines baselines;
  ScenarioTrace trace;
  std::vector<ScenarioQuery> queries;
  std::string victim;  // node name; empty = first command target's owner
};

/// Parses and validates a scenario document. Unknown fields anywhere in
/// the document are rejected. Throws SimError(ParseError) for malformed
/// JSON and SimError(ValidationError) for schema or cross-reference
/// violations.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

class Topology;

/// Builds the static graph from a scenario, auto-assigning addresses:
/// explicit "addr" wins, subnet members get sequential host numbers in
/// their prefix, everything else draws from 172.16.0.0/16. Declaration
/// order fixes the assignment, so it is deterministic.
Topology build_scenario_topology(const Scenario& s);

/// Normalized echo with every default filled in, 2-space indent, sorted
/// keys; byte-stable for golden snapshots.
std::string scenario_to_json_text(const Scenario& s);

}  // namespace itmsim
