#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "itmsim/address.hpp"
#include "itmsim/types.hpp"

namespace itmsim {

enum class NodeKind : std::uint8_t { Host, Router };

inline const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Host: return "host";
    case NodeKind::Router: return "router";
  }
  return "?";
}

struct Node {
  NodeId id = kNoNode;
  std::string name;
  NodeKind kind = NodeKind::Host;
  Address addr{};
};

struct Link {
  LinkId id = kNoLink;
  NodeId a = kNoNode;
  NodeId b = kNoNode;
  // Packets entering the link in one tick beyond this count are dropped.
  std::uint32_t capacity_per_tick = 0;  // 0 means unbounded
  SimTime latency = 1;                  // ticks, >= 1
};

struct SubnetDecl {
  Subnet subnet;
  NodeId gateway = kNoNode;     // Router fronting the broadcast domain
  std::vector<NodeId> members;  // hosts that answer to the broadcast address
};

// Static graph: nodes, undirected links, broadcast domains. Construction
// validates ids and addresses; the graph never changes after that.
class Topology {
 public:
  NodeId add_node(const std::string& name, NodeKind kind, Address addr);
  LinkId add_link(NodeId a, NodeId b, std::uint32_t capacity_per_tick, SimTime latency);
  void add_subnet(const Subnet& subnet, NodeId gateway, std::vector<NodeId> members);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<SubnetDecl>& subnets() const { return subnets_; }

  const Node& node(NodeId id) const;
  const Link& link(LinkId id) const;

  NodeId node_by_name(const std::string& name) const;  // kNoNode when absent
  NodeId node_by_addr(Address a) const;                // kNoNode when absent

  /// Links incident to n, in insertion order.
  const std::vector<LinkId>& links_of(NodeId n) const;

  NodeId peer(LinkId l, NodeId from) const;

  /// Subnet whose broadcast address equals a, or nullptr.
  const SubnetDecl* subnet_for_broadcast(Address a) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<SubnetDecl> subnets_;
  std::vector<std::vector<LinkId>> incident_;
  std::unordered_map<std::string, NodeId> name_index_;
  std::unordered_map<std::uint32_t, NodeId> addr_index_;
};

}  // namespace itmsim
