#pragma once

#include <unordered_map>
#include <vector>

#include "itmsim/errors.hpp"
#include "itmsim/packet.hpp"
#include "itmsim/types.hpp"

namespace itmsim {

class Network;
class LedgerInspector;

// Records, per packet, the node that really injected it and every node it
// traversed. Written by the network as packets move. Nothing on the
// simulated side may read it; only LedgerInspector (handed out through
// Network::ledger_for_validation) can, which keeps detection and traceback
// honest.
class GroundTruthLedger {
 public:
  struct Entry {
    NodeId true_origin = kNoNode;
    std::vector<NodeId> true_path;  // origin first, grows hop by hop
    Address dst{};
    FloodType type = FloodType::Legit;
    SimTime sent_at = 0;
    bool delivered = false;
    bool dropped = false;
  };

 private:
  friend class Network;
  friend class LedgerInspector;

  void record_injection(PacketId p, NodeId origin, Address dst, FloodType type, SimTime at) {
    auto& e = entries_[p];
    e.true_origin = origin;
    e.true_path.push_back(origin);
    e.dst = dst;
    e.type = type;
    e.sent_at = at;
  }
  void record_hop(PacketId p, NodeId node) { entries_[p].true_path.push_back(node); }
  void record_delivered(PacketId p) { entries_[p].delivered = true; }
  void record_dropped(PacketId p) { entries_[p].dropped = true; }

  const Entry& entry(PacketId p) const {
    auto it = entries_.find(p);
    if (it == entries_.end()) throw SimError(Errc::UnknownOrigin, "no ledger entry for packet");
    return it->second;
  }
  bool has(PacketId p) const { return entries_.count(p) != 0; }

  std::unordered_map<PacketId, Entry> entries_;
};

// Read-only validation handle. Test and evaluation code holds one of
// these; simulated components never see the type.
class LedgerInspector {
 public:
  explicit LedgerInspector(const GroundTruthLedger& l) : ledger_(&l) {}

  const GroundTruthLedger::Entry& entry(PacketId p) const { return ledger_->entry(p); }
  NodeId true_origin(PacketId p) const { return ledger_->entry(p).true_origin; }
  const std::vector<NodeId>& true_path(PacketId p) const { return ledger_->entry(p).true_path; }
  bool delivered(PacketId p) const { return ledger_->entry(p).delivered; }
  bool dropped(PacketId p) const { return ledger_->entry(p).dropped; }
  bool has(PacketId p) const { return ledger_->has(p); }
  std::size_t size() const { return ledger_->entries_.size(); }

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [id, e] : ledger_->entries_) f(id, e);
  }

 private:
  const GroundTruthLedger* ledger_;
};

}  // namespace itmsim
