#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itmsim/monitor.hpp"
#include "itmsim/packet.hpp"

namespace itmsim {

// Flow identity the honeypot aggregates by and the console traces by.
struct FlowSignature {
  Address dst{};
  FloodType flood_type = FloodType::Legit;
  SimTime window_from = 0;
  SimTime window_to = 0;

  auto operator<=>(const FlowSignature&) const = default;
};

struct TraceRequest {
  std::string itm_name;        // honeypot identifier
  std::uint64_t flow_size = 0; // packets of the flow at emission
  std::uint64_t flow_bytes = 0;
  // Packets the flow had when its trigger fired; 1 for a flow caught on
  // its first packet. The single-packet claim is measured on this.
  std::uint64_t trigger_size = 0;
  SimTime visit_time = 0;      // first packet of the flow
  Address dst{};               // flow destination as addressed
  Address observed_src{};      // first seen src, untrusted
  FlowSignature flow_signature;
};

struct EntrapFile {
  std::uint32_t selector = 0;  // packet selector that touches this lure
  std::string name;
};

// Honeypot: accepts whatever arrives, logs it, and turns suspect flows
// into trace requests. Outbound deceive responses obey the bandwidth
// cap; trace requests ride the control channel and do not.
class Honeypot {
 public:
  Honeypot(std::string name, NodeId node, Address address, std::vector<EntrapFile> entrap_files,
           std::uint32_t bandwidth_cap, SimTime trigger_delay, SimTime window_back,
           bool deceive_responses);

  struct CaptureOutcome {
    bool triggered = false;        // first trigger for this flow
    SimTime emit_at = 0;           // when the request should leave
    std::optional<Packet> response;  // deceive reply, pre-throttle
  };
  /// Records one arriving packet; decides whether its flow (dst,
  /// flood_type) starts a trace countdown and what to answer.
  CaptureOutcome on_packet(const Packet& p, SimTime now);

  /// Arms the blocked-status trigger: every flow from here on is
  /// suspect, and flows already waiting start their countdown now.
  /// Returns the emission times of the newly triggered flows.
  std::vector<SimTime> note_block(SimTime now);

  /// Builds the requests whose countdown ends at `now`. flow_size counts
  /// packets captured up to this moment.
  std::vector<TraceRequest> emit_due(SimTime now);

  /// Per-tick outbound shaping for deceive responses only. Returns the
  /// ones allowed out; the rest are dropped and counted.
  std::vector<Packet> throttle(std::vector<Packet> outbound, SimTime now);

  void record_emitted(const TraceRequest& r) { emitted_requests_.push_back(r); }
  void record_unreachable() { ++console_unreachable_; }

  const std::string& name() const { return name_; }
  NodeId node() const { return node_; }
  Address address() const { return address_; }
  const std::vector<PacketRecord>& capture_log() const { return capture_log_; }
  const std::vector<std::pair<SimTime, std::string>>& entrap_accesses() const {
    return entrap_accesses_;
  }
  const std::vector<TraceRequest>& emitted_requests() const { return emitted_requests_; }
  std::uint64_t throttled_dropped() const { return throttled_dropped_; }
  std::uint64_t console_unreachable() const { return console_unreachable_; }
  std::uint64_t legit_arrivals() const { return legit_arrivals_; }
  bool block_noticed() const { return block_noticed_; }

 private:
  struct FlowState {
    SimTime first_seen = 0;
    std::uint64_t packets = 0;
    std::uint64_t bytes = 0;
    std::uint64_t packets_at_trigger = 0;
    Address first_src{};
    bool triggered = false;
    bool emitted = false;
    SimTime emit_at = 0;
  };
  using FlowKey = std::pair<Address, FloodType>;

  std::string name_;
  NodeId node_;
  Address address_;
  std::map<std::uint32_t, std::string> entrap_files_;  // selector -> lure name
  std::uint32_t bandwidth_cap_;
  SimTime trigger_delay_;
  SimTime window_back_;
  bool deceive_responses_;
  bool block_noticed_ = false;

  std::vector<PacketRecord> capture_log_;
  std::vector<std::pair<SimTime, std::string>> entrap_accesses_;
  std::map<FlowKey, FlowState> flows_;
  std::vector<TraceRequest> emitted_requests_;

  std::pair<SimTime, std::uint32_t> sent_this_tick_{0, 0};
  std::uint64_t throttled_dropped_ = 0;
  std::uint64_t console_unreachable_ = 0;
  std::uint64_t legit_arrivals_ = 0;
};

}  // namespace itmsim
