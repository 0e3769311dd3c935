#include "itmsim/botnet.hpp"

#include <algorithm>

#include "itmsim/errors.hpp"

namespace itmsim {

bool bot_transition_allowed(BotPhase from, BotPhase to) {
  if (to == BotPhase::Disabled) return from != BotPhase::Disabled;
  switch (from) {
    case BotPhase::Vulnerable: return to == BotPhase::Compromised;
    case BotPhase::Compromised: return to == BotPhase::Joined;
    case BotPhase::Joined: return to == BotPhase::Attacking || to == BotPhase::Updated;
    case BotPhase::Attacking: return to == BotPhase::Joined;
    case BotPhase::Updated: return false;
    case BotPhase::Disabled: return false;
  }
  return false;
}

const char* command_flood_name(CommandFlood f) {
  switch (f) {
    case CommandFlood::TcpSyn: return "tcp_syn";
    case CommandFlood::TcpAck: return "tcp_ack";
    case CommandFlood::Udp: return "udp";
    case CommandFlood::IcmpEchoReq: return "icmp_echo";
    case CommandFlood::Smurf: return "smurf";
  }
  return "?";
}

FloodType command_packet_type(CommandFlood f) {
  switch (f) {
    case CommandFlood::TcpSyn: return FloodType::TcpSyn;
    case CommandFlood::TcpAck: return FloodType::TcpAck;
    case CommandFlood::Udp: return FloodType::Udp;
    case CommandFlood::IcmpEchoReq: return FloodType::IcmpEchoReq;
    case CommandFlood::Smurf: return FloodType::IcmpEchoReq;
  }
  return FloodType::TcpSyn;
}

Botnet::Botnet(std::vector<NodeId> candidates, SimTime poll_interval)
    : candidates_(std::move(candidates)), poll_interval_(poll_interval) {
  for (NodeId n : candidates_) {
    BotState b;
    b.node = n;
    b.poll_interval = poll_interval_;
    b.history.push_back({0, BotPhase::Vulnerable});
    bots_.emplace(n, std::move(b));
  }
}

void Botnet::transition(BotState& b, BotPhase to, SimTime now) {
  if (!bot_transition_allowed(b.phase, to))
    throw SimError(Errc::InvalidArgument,
                   std::string("illegal bot transition ") + bot_phase_name(b.phase) + " -> " +
                       bot_phase_name(to));
  b.phase = to;
  b.history.push_back({now, to});
}

std::vector<NodeId> Botnet::scan_tick(std::uint32_t scan_rate, double vulnerability_prob,
                                      Rng& rng, SimTime now) {
  std::vector<NodeId> flipped;
  for (std::uint32_t i = 0; i < scan_rate && scan_cursor_ < candidates_.size(); ++i) {
    const NodeId n = candidates_[scan_cursor_++];
    if (rng.bernoulli(vulnerability_prob)) {
      transition(bots_.at(n), BotPhase::Compromised, now);
      flipped.push_back(n);
    }
  }
  return flipped;
}

void Botnet::establish(NodeId cnc_server, NodeId controller, SimTime now) {
  std::vector<NodeId> compromised = bots_in(BotPhase::Compromised);
  if (compromised.empty()) throw SimError(Errc::NoBots, "no compromised hosts to enlist");
  channel_.server = cnc_server;
  channel_.controller = controller;
  // A channel shut down before it was built stays dead; the recruits
  // join it, notice on their first poll, and disable themselves.
  channel_.active = !was_shutdown_;
  for (NodeId n : compromised) {
    transition(bots_.at(n), BotPhase::Joined, now);
    channel_.members.push_back(n);
    channel_.join_time[n] = now;
  }
}

std::size_t Botnet::issue(const AttackCommand& cmd, SimTime now) {
  if (!channel_.active) throw SimError(Errc::ChannelDown, "command issued on a dead channel");
  channel_.command_log.push_back({now, cmd});
  // The infiltrated pseudo-bot sees the command as it goes out.
  if (agent_ && agent_->joined_channel) agent_->observed_commands.push_back({now, cmd});
  return channel_.command_log.size() - 1;
}

bool Botnet::deliver(NodeId member, std::size_t command_index, SimTime now) {
  (void)command_index;
  if (!channel_.active) {
    // Issued before the shutdown, landed after: the bot never sees it.
    ++suppressed_deliveries_;
    return false;
  }
  auto it = bots_.find(member);
  if (it == bots_.end() || it->second.phase != BotPhase::Joined) {
    ++ignored_deliveries_;
    return false;
  }
  transition(it->second, BotPhase::Attacking, now);
  return true;
}

void Botnet::end_attack(NodeId member, SimTime now) {
  auto it = bots_.find(member);
  if (it != bots_.end() && it->second.phase == BotPhase::Attacking)
    transition(it->second, BotPhase::Joined, now);
}

bool Botnet::poll(NodeId member, SimTime now) {
  auto it = bots_.find(member);
  if (it == bots_.end()) return false;
  if (!channel_.active && it->second.phase == BotPhase::Joined) {
    transition(it->second, BotPhase::Disabled, now);
    return true;
  }
  return false;
}

void Botnet::shutdown(SimTime now) {
  if (was_shutdown_) return;
  was_shutdown_ = true;
  channel_.active = false;
  channel_.shutdown_at = now;
}

void Botnet::infiltrate(NodeId agent_node, SimTime now) {
  if (!channel_.active) throw SimError(Errc::ChannelDown, "cannot infiltrate a dead channel");
  InfiltrationAgent a;
  a.node = agent_node;
  a.joined_channel = channel_.channel_id;
  a.joined_at = now;
  agent_ = std::move(a);
}

void Botnet::mark_updated(NodeId member, SimTime now) {
  transition(bots_.at(member), BotPhase::Updated, now);
}

void Botnet::disable(NodeId member, SimTime now) {
  transition(bots_.at(member), BotPhase::Disabled, now);
}

const BotState& Botnet::bot(NodeId n) const {
  auto it = bots_.find(n);
  if (it == bots_.end()) throw SimError(Errc::InvalidArgument, "not a botnet candidate");
  return it->second;
}

std::vector<NodeId> Botnet::bots_in(BotPhase p) const {
  std::vector<NodeId> out;
  for (NodeId n : candidates_)
    if (bots_.at(n).phase == p) out.push_back(n);
  return out;
}

std::vector<Packet> generate_flood_tick(const AttackCommand& cmd, Address bot_addr,
                                        Address smurf_broadcast, Rng& rng) {
  std::vector<Packet> out;
  out.reserve(cmd.rate);
  for (std::uint32_t i = 0; i < cmd.rate; ++i) {
    Packet p;
    p.type = command_packet_type(cmd.flood_type);
    p.size = cmd.size;
    p.selector = cmd.selector;
    if (cmd.flood_type == CommandFlood::Smurf) {
      // Reflection: the request claims to come from the victim so the
      // amplifier hosts answer there.
      p.src = cmd.target;
      p.dst = smurf_broadcast;
    } else {
      p.dst = cmd.target;
      p.src = cmd.spoof == SpoofMode::UniformRandom
                  ? Address{static_cast<std::uint32_t>(rng.bounded(0x100000000ull))}
                  : bot_addr;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Packet> generate_legit_tick(Address src, double rate,
                                        const std::vector<Address>& dst_pool, std::uint32_t size,
                                        Rng& rng) {
  std::vector<Packet> out;
  if (dst_pool.empty()) return out;
  const std::uint32_t n = rng.poisson(rate);
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Packet p;
    p.type = FloodType::Legit;
    p.size = size;
    p.src = src;
    p.dst = dst_pool[rng.bounded(dst_pool.size())];
    out.push_back(p);
  }
  return out;
}

}  // namespace itmsim
