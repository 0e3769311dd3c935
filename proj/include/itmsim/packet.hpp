#pragma once

#include <cstdint>
#include <optional>

#include "itmsim/address.hpp"
#include "itmsim/types.hpp"

namespace itmsim {

enum class FloodType : std::uint8_t {
  Legit,
  TcpSyn,
  TcpAck,
  TcpRst,
  Udp,
  IcmpEchoReq,
  IcmpEchoReply,
};

inline const char* flood_type_name(FloodType t) {
  switch (t) {
    case FloodType::Legit: return "legit";
    case FloodType::TcpSyn: return "tcp_syn";
    case FloodType::TcpAck: return "tcp_ack";
    case FloodType::TcpRst: return "tcp_rst";
    case FloodType::Udp: return "udp";
    case FloodType::IcmpEchoReq: return "icmp_echo_req";
    case FloodType::IcmpEchoReply: return "icmp_echo_reply";
  }
  return "?";
}

// Single overwritable mark slot, written probabilistically by routers.
// distance counts routers traversed after the marking one.
struct PpmMark {
  Address router{};
  std::uint32_t distance = 0;
};

struct Packet {
  PacketId id = 0;
  Address src{};  // claimed origin, spoofable
  Address dst{};
  FloodType type = FloodType::Legit;
  std::uint32_t size = 1;
  SimTime sent_at = 0;
  // Port-like lure key carried in the payload, 0 for clean traffic.
  // Honeypot entrap files match against this.
  std::uint32_t selector = 0;
  std::optional<PpmMark> mark;
};

}  // namespace itmsim
