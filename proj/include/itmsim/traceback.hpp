#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itmsim/honeypot.hpp"
#include "itmsim/monitor.hpp"
#include "itmsim/topology.hpp"

namespace itmsim {

struct TraceInstruction {
  int serial = 0;
  FlowSignature flow_signature;
  SimTime issued_at = 0;
};

// One matched link as the agent saw it. peer is the node across the
// link; host_facing means that peer is a Host.
struct LinkObservation {
  LinkId link = kNoLink;
  NodeId peer = kNoNode;
  bool host_facing = false;

  auto operator<=>(const LinkObservation&) const = default;
};

struct AgentFeedback {
  int agent_id = 0;
  int serial = 0;
  NodeId agent_node = kNoNode;
  bool incoming_match = false;
  bool outgoing_match = false;
  bool window_expired = false;  // instruction arrived after eviction
  std::vector<PacketRecord> matched_records;
  SimTime first_seen = 0;  // earliest matched record
  std::vector<LinkObservation> upstream_links;    // incoming matches
  std::vector<LinkObservation> downstream_links;  // outgoing matches
  std::vector<NodeId> source_candidates;          // hosts behind matched host-facing links
};

enum class Confidence : std::uint8_t { Exact, Partial };

struct RebuiltPath {
  int serial = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;  // directed toward the flow sink, sorted
  std::vector<NodeId> sources;                   // judged origin hosts, sorted
  Confidence confidence = Confidence::Partial;
  bool untraceable = false;  // no positive feedback at all
  SimTime concluded_at = 0;
};

struct TraceEvent {
  int serial = 0;
  std::string initiator;  // reporting honeypot/monitor name
  NodeId initiator_node = kNoNode;
  SimTime initiated_at = 0;
  TraceRequest request;
  std::vector<AgentFeedback> feedback;
  std::vector<int> instructed_agents;
  RebuiltPath conclusion;
  bool concluded = false;
};

// Append-only record of every trace, queryable by specific terms. All
// supplied terms must match; results come back ordered by serial.
class TraceDatabase {
 public:
  struct Terms {
    std::optional<int> serial;
    std::optional<std::pair<SimTime, SimTime>> time_range;  // initiated_at inclusive
    std::optional<std::string> initiator;
  };

  void open(TraceEvent ev);
  TraceEvent& at(int serial);
  const TraceEvent& at(int serial) const;
  bool has(int serial) const { return events_.count(serial) != 0; }
  std::size_t size() const { return events_.size(); }

  std::vector<const TraceEvent*> query(const Terms& t) const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [s, ev] : events_) f(ev);
  }

 private:
  std::map<int, TraceEvent> events_;
};

// Trace service console, co-located with the data center. Assigns
// serials, fans instructions out to agents, synthesizes feedback into a
// rebuilt path, and files everything in the database.
class TraceConsole {
 public:
  explicit TraceConsole(NodeId node) : node_(node) {}

  struct Dispatch {
    TraceInstruction instruction;
    std::vector<int> agents;
  };

  /// Serial assignment plus one instruction per supplied agent. The
  /// caller delivers them with routed latency and schedules the
  /// collection deadline.
  Dispatch receive_request(const TraceRequest& r, NodeId initiator_node,
                           const std::vector<int>& agents, SimTime now);

  /// Returns true once every instructed agent for the serial reported.
  bool collect(const AgentFeedback& fb);

  /// Synthesizes the conclusion from whatever feedback arrived. Safe to
  /// call from both the completion and deadline paths; only the first
  /// call computes.
  const RebuiltPath& conclude(int serial, SimTime now);
  bool concluded(int serial) const;

  const TraceDatabase& db() const { return db_; }
  int last_serial() const { return next_serial_ - 1; }
  NodeId node() const { return node_; }

 private:
  NodeId node_;
  int next_serial_ = 1;
  TraceDatabase db_;
};

/// Sliding-window incoming/outgoing matching at one agent. Uses the
/// topology only to name link peers and tell hosts from routers.
AgentFeedback agent_analyze(Monitor& agent, const TraceInstruction& ins, const Topology& topo,
                            SimTime now);

/// Pure synthesis step: union of per-agent edge fragments oriented
/// toward the sink plus source attribution. Exposed for direct testing;
/// the console calls it from conclude().
RebuiltPath rebuild_path(int serial, NodeId initiator_node,
                         const std::vector<AgentFeedback>& feedback, SimTime now);

}  // namespace itmsim
