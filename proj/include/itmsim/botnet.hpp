#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "itmsim/address.hpp"
#include "itmsim/packet.hpp"
#include "itmsim/rng.hpp"
#include "itmsim/types.hpp"

namespace itmsim {

enum class BotPhase : std::uint8_t { Vulnerable, Compromised, Joined, Attacking, Updated, Disabled };

inline const char* bot_phase_name(BotPhase p) {
  switch (p) {
    case BotPhase::Vulnerable: return "vulnerable";
    case BotPhase::Compromised: return "compromised";
    case BotPhase::Joined: return "joined";
    case BotPhase::Attacking: return "attacking";
    case BotPhase::Updated: return "updated";
    case BotPhase::Disabled: return "disabled";
  }
  return "?";
}

/// Legal lifecycle moves. Any phase may jump to Disabled; otherwise only
/// V->C->J, J<->A, J->U.
bool bot_transition_allowed(BotPhase from, BotPhase to);

enum class SpoofMode : std::uint8_t { None, UniformRandom };

// What the botmaster tells the channel. Smurf bounces echo requests off
// the amplifier subnet's broadcast address; all other types hit the
// target directly.
enum class CommandFlood : std::uint8_t { TcpSyn, TcpAck, Udp, IcmpEchoReq, Smurf };

const char* command_flood_name(CommandFlood f);
FloodType command_packet_type(CommandFlood f);

struct AttackCommand {
  CommandFlood flood_type = CommandFlood::TcpSyn;
  Address target{};
  std::uint32_t rate = 1;      // packets per tick per bot
  SimTime duration = 1;        // ticks
  SpoofMode spoof = SpoofMode::None;
  std::uint32_t size = 64;     // bytes per packet
  std::uint32_t selector = 0;  // lure key stamped on every packet
  std::optional<Subnet> amplifier;  // Smurf only
};

struct BotState {
  NodeId node = kNoNode;
  BotPhase phase = BotPhase::Vulnerable;
  SimTime poll_interval = 10;
  std::vector<std::pair<SimTime, BotPhase>> history;  // transitions, entry per change
};

struct CncChannel {
  int channel_id = 1;
  NodeId server = kNoNode;
  NodeId controller = kNoNode;  // botmaster
  bool active = false;
  std::vector<NodeId> members;  // join order
  std::unordered_map<NodeId, SimTime> join_time;
  std::vector<std::pair<SimTime, AttackCommand>> command_log;
  SimTime shutdown_at = 0;  // meaningful once !active
  // Lifecycle steps with no behavioral consequence, kept as bookkeeping.
  std::string ddns_name;
  std::string static_ip;
};

struct InfiltrationAgent {
  NodeId node = kNoNode;
  std::optional<int> joined_channel;
  SimTime joined_at = 0;
  std::vector<std::pair<SimTime, AttackCommand>> observed_commands;
};

// Bot lifecycle plus C&C bookkeeping. Engine-free: scanning, command
// delivery and flooding are driven tick by tick from outside; routed
// latencies are the caller's problem.
class Botnet {
 public:
  Botnet(std::vector<NodeId> candidates, SimTime poll_interval);

  /// Scans the next `scan_rate` untried candidates; each flips to
  /// Compromised with probability vulnerability_prob. Returns the ones
  /// that flipped. Empty result with scan_done() true means exhausted.
  std::vector<NodeId> scan_tick(std::uint32_t scan_rate, double vulnerability_prob, Rng& rng,
                                SimTime now);
  bool scan_done() const { return scan_cursor_ >= candidates_.size(); }

  /// Moves every Compromised bot to Joined and activates the channel.
  /// Throws NoBots when nothing was compromised.
  void establish(NodeId cnc_server, NodeId controller, SimTime now);

  /// Appends to the command log; the agent, if inside, observes at issue
  /// time. Throws ChannelDown when the channel is inactive. Returns the
  /// command index for delivery bookkeeping.
  std::size_t issue(const AttackCommand& cmd, SimTime now);

  /// Command lands at a member. Returns true when the bot accepted it
  /// (was Joined and the channel is still active).
  bool deliver(NodeId member, std::size_t command_index, SimTime now);

  /// Flood finished; Attacking reverts to Joined.
  void end_attack(NodeId member, SimTime now);

  /// Bot checks the channel. A Joined bot that finds it dead goes
  /// Disabled. Returns true if the bot just disabled itself.
  bool poll(NodeId member, SimTime now);

  void shutdown(SimTime now);  // idempotent

  /// Joins the channel as a pseudo-bot. Throws ChannelDown when inactive.
  void infiltrate(NodeId agent_node, SimTime now);

  /// Maintenance bump, Joined -> Updated. No command carries this; it
  /// exists so the full lifecycle is reachable.
  void mark_updated(NodeId member, SimTime now);
  void disable(NodeId member, SimTime now);

  const CncChannel& channel() const { return channel_; }
  CncChannel& channel() { return channel_; }
  const InfiltrationAgent* agent() const { return agent_ ? &*agent_ : nullptr; }
  const BotState& bot(NodeId n) const;
  const std::vector<NodeId>& candidates() const { return candidates_; }
  std::vector<NodeId> bots_in(BotPhase p) const;

  std::uint64_t suppressed_deliveries() const { return suppressed_deliveries_; }
  std::uint64_t ignored_deliveries() const { return ignored_deliveries_; }

 private:
  void transition(BotState& b, BotPhase to, SimTime now);

  std::vector<NodeId> candidates_;
  std::size_t scan_cursor_ = 0;
  SimTime poll_interval_;
  std::unordered_map<NodeId, BotState> bots_;
  CncChannel channel_;
  std::optional<InfiltrationAgent> agent_;
  bool was_shutdown_ = false;
  std::uint64_t suppressed_deliveries_ = 0;  // arrived after shutdown
  std::uint64_t ignored_deliveries_ = 0;     // bot not in Joined
};

/// One tick's worth of flood packets for a bot executing `cmd`. Smurf
/// aims at `smurf_broadcast` with the victim as spoofed source; other
/// types aim at cmd.target with src per spoof mode.
std::vector<Packet> generate_flood_tick(const AttackCommand& cmd, Address bot_addr,
                                        Address smurf_broadcast, Rng& rng);

/// Poisson(rate) background packets from one host this tick.
std::vector<Packet> generate_legit_tick(Address src, double rate,
                                        const std::vector<Address>& dst_pool, std::uint32_t size,
                                        Rng& rng);

}  // namespace itmsim
