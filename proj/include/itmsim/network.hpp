#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "itmsim/ledger.hpp"
#include "itmsim/packet.hpp"
#include "itmsim/routing.hpp"
#include "itmsim/topology.hpp"

namespace itmsim {

struct NetStats {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t dropped_capacity = 0;
  std::uint64_t dropped_unroutable = 0;
  std::uint64_t redirected_delivered = 0;
  std::uint64_t broadcast_fanouts = 0;
  // Conservation is checked per flood type; indexed by FloodType value.
  std::array<std::uint64_t, 7> injected_by_type{};
  std::array<std::uint64_t, 7> delivered_by_type{};
  std::array<std::uint64_t, 7> dropped_by_type{};
};

// What the data plane decided for one packet at one node. The caller owns
// scheduling: Forwarded means an arrival at `next` is due at `arrive_at`,
// BroadcastFanout means every responder answers the echo request.
struct HopResult {
  enum class Kind : std::uint8_t { Delivered, Forwarded, Dropped, BroadcastFanout };
  Kind kind = Kind::Dropped;
  LinkId via_out = kNoLink;
  NodeId next = kNoNode;
  SimTime arrive_at = 0;
  bool redirected = false;
  std::vector<NodeId> responders;
};

// Data plane: owns routing, per-link per-tick drop-tail capacity, the
// redirect table installed by blocking, and the ground-truth ledger.
// Engine-free; the orchestrator turns HopResults into events.
class Network {
 public:
  explicit Network(const Topology& topo);

  const Topology& topo() const { return *topo_; }
  const RoutingTable& routing() const { return routing_; }

  /// Assigns the packet id, stamps sent_at, opens the ledger entry.
  Packet inject(Packet p, NodeId origin, SimTime now);

  /// Appends `at` to the packet's true path. Call once per arrival event.
  void arrive(const Packet& p, NodeId at);

  /// Routing decision at `at`. Redirect overrides are consulted before the
  /// local delivery check, so a blocked dst never reaches its owner.
  HopResult step(const Packet& p, NodeId at, SimTime now);

  /// From now on, packets destined into `blocked` route to `honeypot`.
  void add_redirect(const Subnet& blocked, NodeId honeypot);
  bool redirect_active(Address dst) const;

  const NetStats& stats() const { return stats_; }
  std::uint64_t delivered_at(NodeId n) const;

  LedgerInspector ledger_for_validation() const { return LedgerInspector(ledger_); }

 private:
  std::uint32_t charge_link(LinkId l, SimTime now);

  const Topology* topo_;
  RoutingTable routing_;
  GroundTruthLedger ledger_;
  NetStats stats_;
  PacketId next_packet_ = 1;

  struct Redirect {
    Subnet blocked;
    NodeId honeypot;
  };
  std::vector<Redirect> redirects_;

  // usage_[link] = (tick, packets entered this tick)
  std::vector<std::pair<SimTime, std::uint32_t>> usage_;
  std::unordered_map<NodeId, std::uint64_t> delivered_by_node_;
};

}  // namespace itmsim
