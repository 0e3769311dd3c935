#pragma once

#include <vector>

#include "itmsim/topology.hpp"

namespace itmsim {

// All-pairs next-hop table over hop count. Ties between equal-cost next
// hops break toward the smaller node id so paths are reproducible.
class RoutingTable {
 public:
  explicit RoutingTable(const Topology& topo);

  /// Next node on the path from `at` toward `dst`; kNoNode if unreachable
  /// or already there.
  NodeId next_hop(NodeId at, NodeId dst) const { return table_[idx(at, dst)]; }

  /// Link used for that hop, kNoLink when next_hop is kNoNode.
  LinkId next_link(NodeId at, NodeId dst) const { return link_[idx(at, dst)]; }

  int hop_count(NodeId from, NodeId to) const { return dist_[idx(from, to)]; }

  /// Full node sequence from..to inclusive; empty if unreachable.
  std::vector<NodeId> path(NodeId from, NodeId to) const;

  /// Sum of link latencies along path(from,to); -1 if unreachable.
  std::int64_t path_latency(const Topology& topo, NodeId from, NodeId to) const;

 private:
  std::size_t idx(NodeId a, NodeId b) const {
    return static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b);
  }

  std::size_t n_ = 0;
  std::vector<NodeId> table_;
  std::vector<LinkId> link_;
  std::vector<int> dist_;  // -1 unreachable
};

}  // namespace itmsim
