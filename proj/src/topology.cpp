#include "itmsim/topology.hpp"

#include <unordered_map>

#include "itmsim/errors.hpp"

namespace itmsim {

NodeId Topology::add_node(const std::string& name, NodeKind kind, Address addr) {
  if (node_by_name(name) != kNoNode)
    throw SimError(Errc::DuplicateNodeId, "node '" + name + "' declared twice");
  if (node_by_addr(addr) != kNoNode)
    throw SimError(Errc::AddressCollision,
                   "address " + format_address(addr) + " already owned (node '" + name + "')");
  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{id, name, kind, addr});
  incident_.emplace_back();
  name_index_[name] = id;
  addr_index_[addr.value] = id;
  return id;
}

LinkId Topology::add_link(NodeId a, NodeId b, std::uint32_t capacity_per_tick, SimTime latency) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (a < 0 || a >= n || b < 0 || b >= n)
    throw SimError(Errc::DanglingLink, "link endpoint does not exist");
  if (a == b) throw SimError(Errc::DanglingLink, "self-loop on node '" + nodes_[a].name + "'");
  if (latency < 1) throw SimError(Errc::InvalidArgument, "link latency must be >= 1");
  const LinkId id = static_cast<LinkId>(links_.size());
  links_.push_back(Link{id, a, b, capacity_per_tick, latency});
  incident_[a].push_back(id);
  incident_[b].push_back(id);
  return id;
}

void Topology::add_subnet(const Subnet& subnet, NodeId gateway, std::vector<NodeId> members) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (gateway < 0 || gateway >= n) throw SimError(Errc::DanglingLink, "subnet gateway missing");
  if (nodes_[gateway].kind != NodeKind::Router)
    throw SimError(Errc::ValidationError,
                   "subnet gateway '" + nodes_[gateway].name + "' must be a router");
  for (NodeId m : members) {
    if (m < 0 || m >= n) throw SimError(Errc::DanglingLink, "subnet member missing");
    if (nodes_[m].kind != NodeKind::Host)
      throw SimError(Errc::ValidationError,
                     "subnet member '" + nodes_[m].name + "' must be a host");
  }
  if (subnet_for_broadcast(subnet.broadcast()))
    throw SimError(Errc::AddressCollision,
                   "broadcast address collision on " + format_subnet(subnet));
  subnets_.push_back(SubnetDecl{subnet, gateway, std::move(members)});
}

const Node& Topology::node(NodeId id) const {
  if (id < 0 || id >= static_cast<NodeId>(nodes_.size()))
    throw SimError(Errc::InvalidArgument, "node id out of range");
  return nodes_[id];
}

const Link& Topology::link(LinkId id) const {
  if (id < 0 || id >= static_cast<LinkId>(links_.size()))
    throw SimError(Errc::InvalidArgument, "link id out of range");
  return links_[id];
}

NodeId Topology::node_by_name(const std::string& name) const {
  auto it = name_index_.find(name);
  return it == name_index_.end() ? kNoNode : it->second;
}

NodeId Topology::node_by_addr(Address a) const {
  auto it = addr_index_.find(a.value);
  return it == addr_index_.end() ? kNoNode : it->second;
}

const std::vector<LinkId>& Topology::links_of(NodeId n) const {
  if (n < 0 || n >= static_cast<NodeId>(incident_.size()))
    throw SimError(Errc::InvalidArgument, "node id out of range");
  return incident_[n];
}

NodeId Topology::peer(LinkId l, NodeId from) const {
  const Link& ln = link(l);
  return ln.a == from ? ln.b : ln.a;
}

const SubnetDecl* Topology::subnet_for_broadcast(Address a) const {
  for (const SubnetDecl& s : subnets_)
    if (s.subnet.broadcast() == a) return &s;
  return nullptr;
}

}  // namespace itmsim
