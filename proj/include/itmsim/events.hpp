#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "itmsim/botnet.hpp"
#include "itmsim/honeypot.hpp"
#include "itmsim/monitor.hpp"
#include "itmsim/packet.hpp"
#include "itmsim/traceback.hpp"

namespace itmsim {

// Data-plane arrival at Event.target. via is the link it came over,
// kNoLink right after injection at the origin.
struct PacketArrival {
  Packet packet;
  LinkId via = kNoLink;
};

// Pre-built packet due for injection at Event.target (smurf replies).
struct InjectDue {
  Packet proto;
};

enum class TimerKind : std::uint8_t {
  ScanTick,
  EstablishBotnet,
  CommandIssue,     // a = scenario command index
  BotFloodTick,     // a = bot node, b = command index
  AttackEnd,        // a = bot node
  BotPoll,          // a = bot node
  LegitTick,        // a = legit group index
  BucketClose,      // a = monitor id, b = bucket start
  ReportSubmit,     // a = monitor id
  QueryArrive,      // a = scenario query index
  QueryService,
  HoneypotEmit,
  HoneypotRetry,
  TraceDeadline,    // a = serial
  CncShutdown,
  AgentInfiltrate,
};

struct TimerFire {
  TimerKind kind;
  std::int64_t a = 0;
  std::int64_t b = 0;
};

// Control-plane messages ride routed latencies but not the data plane:
// no link capacity use, no monitor observation.
struct CncCommandMsg {
  std::size_t command_index = 0;
  NodeId member = kNoNode;
};
struct MonitorAttackedMsg {
  int monitor_id = 0;
  SimTime bucket_start = 0;
  std::uint64_t count = 0;
};
struct LogSubmissionMsg {
  int monitor_id = 0;
  std::vector<Bucket> buckets;
};
struct BlockMonitorMsg {
  int monitor_id = 0;
};
struct HoneypotBlockNotice {
  int monitor_id = 0;
  Subnet blocked_range{};
};
struct TraceRequestMsg {
  TraceRequest request;
};
struct TraceInstructionMsg {
  TraceInstruction instruction;
  int agent_id = 0;
};
struct TraceFeedbackMsg {
  AgentFeedback feedback;
};
// Console tells the reporting honeypot how the trace ended. Advisory
// only; nothing reacts to it.
struct TraceAdvisoryMsg {
  int serial = 0;
  bool exact = false;
  bool untraceable = false;
};

struct ControlMessage {
  std::variant<CncCommandMsg, MonitorAttackedMsg, LogSubmissionMsg, BlockMonitorMsg,
               HoneypotBlockNotice, TraceRequestMsg, TraceInstructionMsg, TraceFeedbackMsg,
               TraceAdvisoryMsg>
      body;
};

using EventPayload = std::variant<PacketArrival, InjectDue, TimerFire, ControlMessage>;

}  // namespace itmsim
