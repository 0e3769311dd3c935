#pragma once

#include <cstdint>

namespace itmsim {

// 1 tick = 1 simulated time unit. Link latencies, bucket widths, sliding
// windows and report periods are all expressed in ticks; there is no
// floating-point time anywhere in the simulator.
using SimTime = std::uint64_t;

using NodeId = std::int32_t;   // dense index into Topology::nodes()
using LinkId = std::int32_t;   // dense index into Topology::links()
using PacketId = std::uint64_t;
using EventId = std::uint64_t;

inline constexpr NodeId kNoNode = -1;
inline constexpr LinkId kNoLink = -1;

struct RunSummary {
  std::uint64_t events_dispatched = 0;
  SimTime final_time = 0;
};

}  // namespace itmsim
