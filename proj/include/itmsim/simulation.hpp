#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "itmsim/botnet.hpp"
#include "itmsim/datacenter.hpp"
#include "itmsim/honeypot.hpp"
#include "itmsim/network.hpp"
#include "itmsim/ppm.hpp"
#include "itmsim/scenario.hpp"
#include "itmsim/sim.hpp"
#include "itmsim/traceback.hpp"

namespace itmsim {

// Control-plane traffic counts, the scalability-facing side of the
// report: how chatty each coordination stage was.
struct MsgStats {
  std::uint64_t cnc_commands = 0;
  std::uint64_t log_submissions = 0;
  std::uint64_t attacked_notices = 0;
  std::uint64_t block_orders = 0;
  std::uint64_t block_notices = 0;
  std::uint64_t trace_requests = 0;
  std::uint64_t trace_instructions = 0;
  std::uint64_t trace_feedback = 0;
  std::uint64_t trace_advisories = 0;
};

// Builds every module from a scenario, wires them together through the
// event loop, and runs the whole pipeline: botnet buildup, floods,
// detection, block/redirect, honeypot capture, traceback, prevention.
// All cross-module transport happens here; the modules never touch the
// engine or each other.
class Simulation {
 public:
  Simulation(const Scenario& sc, std::uint64_t seed);

  RunSummary run();  // to scenario duration; single-shot

  const Scenario& scenario() const { return scenario_; }
  std::uint64_t seed() const { return seed_; }
  const Topology& topo() const { return topo_; }
  const Network& net() const { return *net_; }
  Engine& engine() { return *engine_; }
  const Engine& engine() const { return *engine_; }

  const Botnet* botnet() const { return botnet_ ? botnet_.get() : nullptr; }
  const DataCenter* datacenter() const { return dc_ ? dc_.get() : nullptr; }
  const Honeypot* honeypot() const { return honeypot_ ? honeypot_.get() : nullptr; }
  const TraceConsole* console() const { return console_ ? console_.get() : nullptr; }
  const PpmCollector* ppm() const { return ppm_ ? ppm_.get() : nullptr; }

  const std::vector<Monitor>& monitors() const { return monitors_; }
  const Monitor* monitor_by_name(const std::string& name) const;

  NodeId victim_node() const { return victim_; }
  /// Deliveries per tick at the victim / honeypot node (sparse, ordered).
  const std::map<SimTime, std::uint64_t>& victim_series() const { return victim_series_; }
  const std::map<SimTime, std::uint64_t>& honeypot_series() const { return honeypot_series_; }

  const MsgStats& msg_stats() const { return msg_stats_; }
  const std::vector<std::pair<int, SimTime>>& block_log() const { return block_log_; }

  std::uint64_t attack_packets_injected() const { return attack_injected_; }
  std::uint64_t commands_rejected() const { return commands_rejected_; }
  std::uint64_t lost_trace_requests() const { return lost_trace_requests_; }
  std::uint64_t deceive_sent() const { return deceive_sent_; }
  bool establish_failed() const { return establish_failed_; }
  bool infiltrate_failed() const { return infiltrate_failed_; }

  /// Packets still queued as arrivals or pending injections.
  std::uint64_t in_flight() const;

 private:
  void build_topology();
  void build_modules();
  void schedule_initial();
  void dispatch(const Event& ev);

  void on_packet_event(const Event& ev);
  void on_inject_due(const Event& ev);
  void on_timer(const Event& ev);
  void on_control(const Event& ev);

  void process_packet(Packet p, NodeId at, LinkId via, bool injected_here);
  void deliver_packet(const Packet& p, NodeId at, bool redirected);
  void observe(NodeId at, const Packet& p, Direction d, LinkId link);
  void inject_and_route(Packet proto, NodeId origin);

  void decide_block(int monitor_id);
  void handle_trace_request(const TraceRequest& req);
  void conclude_trace(int serial);
  void emit_honeypot_requests();

  SimTime control_latency(NodeId from, NodeId to) const;
  void send_control(NodeId from, NodeId to, ControlMessage msg);

  NodeId resolve(const std::string& name) const;
  Address resolve_target(const std::string& target) const;

  Scenario scenario_;
  std::uint64_t seed_;
  Topology topo_;
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<Network> net_;

  std::unique_ptr<Botnet> botnet_;
  std::unique_ptr<DataCenter> dc_;
  std::unique_ptr<Honeypot> honeypot_;
  std::unique_ptr<TraceConsole> console_;
  std::unique_ptr<PpmCollector> ppm_;
  std::vector<Monitor> monitors_;
  std::map<NodeId, std::vector<std::size_t>> monitors_at_;  // attachment -> index

  std::vector<AttackCommand> commands_;   // resolved from scenario order
  std::vector<Address> command_targets_;  // broadcast for smurf
  std::vector<std::vector<NodeId>> legit_hosts_;    // per group, resolved
  std::vector<std::vector<Address>> legit_pools_;   // per group, resolved
  NodeId victim_ = kNoNode;
  NodeId cnc_node_ = kNoNode;
  NodeId agent_node_ = kNoNode;

  std::map<SimTime, std::uint64_t> victim_series_;
  std::map<SimTime, std::uint64_t> honeypot_series_;
  MsgStats msg_stats_;
  std::vector<std::pair<int, SimTime>> block_log_;

  std::vector<TraceRequest> retry_queue_;
  bool query_service_scheduled_ = false;
  bool ran_ = false;

  std::uint64_t attack_injected_ = 0;
  std::uint64_t commands_rejected_ = 0;
  std::uint64_t lost_trace_requests_ = 0;
  std::uint64_t deceive_sent_ = 0;
  bool establish_failed_ = false;
  bool infiltrate_failed_ = false;
};

}  // namespace itmsim
