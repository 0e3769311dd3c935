#include "itmsim/routing.hpp"

#include <algorithm>
#include <queue>

namespace itmsim {

// BFS from every destination so table_[at][dst] follows hop-count
// shortest paths. Neighbor expansion visits links in insertion order and
// keeps the smallest next-hop node id among equal-cost choices, so the
// table is independent of container internals.
RoutingTable::RoutingTable(const Topology& topo) {
  n_ = topo.nodes().size();
  table_.assign(n_ * n_, kNoNode);
  link_.assign(n_ * n_, kNoLink);
  dist_.assign(n_ * n_, -1);

  for (NodeId dst = 0; dst < static_cast<NodeId>(n_); ++dst) {
    auto dist_to = [&](NodeId v) -> int& { return dist_[idx(v, dst)]; };
    dist_to(dst) = 0;
    std::queue<NodeId> q;
    q.push(dst);
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop();
      for (LinkId l : topo.links_of(v)) {
        const NodeId u = topo.peer(l, v);
        const int cand = dist_to(v) + 1;
        if (dist_to(u) == -1) {
          dist_to(u) = cand;
          table_[idx(u, dst)] = v;
          link_[idx(u, dst)] = l;
          q.push(u);
        } else if (dist_to(u) == cand && v < table_[idx(u, dst)]) {
          table_[idx(u, dst)] = v;
          link_[idx(u, dst)] = l;
        }
      }
    }
  }
}

std::vector<NodeId> RoutingTable::path(NodeId from, NodeId to) const {
  if (dist_[idx(from, to)] < 0) return {};
  std::vector<NodeId> p{from};
  NodeId at = from;
  while (at != to) {
    at = next_hop(at, to);
    p.push_back(at);
  }
  return p;
}

std::int64_t RoutingTable::path_latency(const Topology& topo, NodeId from, NodeId to) const {
  if (dist_[idx(from, to)] < 0) return -1;
  std::int64_t total = 0;
  NodeId at = from;
  while (at != to) {
    total += static_cast<std::int64_t>(topo.link(next_link(at, to)).latency);
    at = next_hop(at, to);
  }
  return total;
}

}  // namespace itmsim
