#include "itmsim/network.hpp"

#include "itmsim/errors.hpp"

namespace itmsim {

Network::Network(const Topology& topo) : topo_(&topo), routing_(topo) {
  usage_.assign(topo.links().size(), {0, 0});
}

Packet Network::inject(Packet p, NodeId origin, SimTime now) {
  if (origin < 0 || origin >= static_cast<NodeId>(topo_->nodes().size()))
    throw SimError(Errc::UnknownOrigin, "inject from nonexistent node");
  p.id = next_packet_++;
  p.sent_at = now;
  ledger_.record_injection(p.id, origin, p.dst, p.type, now);
  ++stats_.injected;
  ++stats_.injected_by_type[static_cast<std::size_t>(p.type)];
  return p;
}

void Network::arrive(const Packet& p, NodeId at) { ledger_.record_hop(p.id, at); }

void Network::add_redirect(const Subnet& blocked, NodeId honeypot) {
  redirects_.push_back(Redirect{blocked, honeypot});
}

bool Network::redirect_active(Address dst) const {
  for (const Redirect& r : redirects_)
    if (r.blocked.contains(dst)) return true;
  return false;
}

std::uint64_t Network::delivered_at(NodeId n) const {
  auto it = delivered_by_node_.find(n);
  return it == delivered_by_node_.end() ? 0 : it->second;
}

std::uint32_t Network::charge_link(LinkId l, SimTime now) {
  auto& [tick, used] = usage_[static_cast<std::size_t>(l)];
  if (tick != now) {
    tick = now;
    used = 0;
  }
  return ++used;
}

HopResult Network::step(const Packet& p, NodeId at, SimTime now) {
  const auto type_ix = static_cast<std::size_t>(p.type);
  auto dropped = [&]() {
    HopResult r;
    r.kind = HopResult::Kind::Dropped;
    ledger_.record_dropped(p.id);
    ++stats_.dropped_by_type[type_ix];
    return r;
  };
  auto delivered = [&](bool redirected) {
    HopResult r;
    r.kind = HopResult::Kind::Delivered;
    r.redirected = redirected;
    ledger_.record_delivered(p.id);
    ++stats_.delivered;
    ++stats_.delivered_by_type[type_ix];
    ++delivered_by_node_[at];
    if (redirected) ++stats_.redirected_delivered;
    return r;
  };

  // Redirect overrides come before the local delivery check: a blocked
  // destination never receives, even when the packet is already there.
  bool redirected = false;
  NodeId target = kNoNode;
  for (const Redirect& r : redirects_) {
    if (r.blocked.contains(p.dst)) {
      redirected = true;
      target = r.honeypot;
      break;
    }
  }

  const SubnetDecl* bcast = nullptr;
  if (!redirected) {
    bcast = topo_->subnet_for_broadcast(p.dst);
    target = bcast ? bcast->gateway : topo_->node_by_addr(p.dst);
  }

  if (target == kNoNode) {
    ++stats_.dropped_unroutable;
    return dropped();
  }

  if (at == target) {
    if (bcast) {
      // The echo request terminates at the gateway; every member host
      // answers it one tick later. Conservation counts the request as
      // delivered here and each reply as a fresh injection.
      HopResult r = delivered(false);
      r.kind = HopResult::Kind::BroadcastFanout;
      r.responders = bcast->members;
      r.arrive_at = now + 1;
      ++stats_.broadcast_fanouts;
      return r;
    }
    return delivered(redirected);
  }

  const LinkId out = routing_.next_link(at, target);
  if (out == kNoLink) {
    ++stats_.dropped_unroutable;
    return dropped();
  }
  const Link& ln = topo_->link(out);
  if (ln.capacity_per_tick > 0 && charge_link(out, now) > ln.capacity_per_tick) {
    ++stats_.dropped_capacity;
    return dropped();
  }

  HopResult r;
  r.kind = HopResult::Kind::Forwarded;
  r.via_out = out;
  r.next = routing_.next_hop(at, target);
  r.arrive_at = now + ln.latency;
  r.redirected = redirected;
  ++stats_.forwarded;
  return r;
}

}  // namespace itmsim
