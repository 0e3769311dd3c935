#include "itmsim/traceback.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "itmsim/errors.hpp"

namespace itmsim {

void TraceDatabase::open(TraceEvent ev) {
  const int serial = ev.serial;
  if (!events_.emplace(serial, std::move(ev)).second)
    throw SimError(Errc::InvalidArgument, "serial " + std::to_string(serial) + " reused");
}

TraceEvent& TraceDatabase::at(int serial) {
  auto it = events_.find(serial);
  if (it == events_.end())
    throw SimError(Errc::InvalidArgument, "unknown serial " + std::to_string(serial));
  return it->second;
}

const TraceEvent& TraceDatabase::at(int serial) const {
  return const_cast<TraceDatabase*>(this)->at(serial);
}

std::vector<const TraceEvent*> TraceDatabase::query(const Terms& t) const {
  std::vector<const TraceEvent*> out;
  for (const auto& [serial, ev] : events_) {
    if (t.serial && *t.serial != serial) continue;
    if (t.time_range &&
        (ev.initiated_at < t.time_range->first || ev.initiated_at > t.time_range->second))
      continue;
    if (t.initiator && *t.initiator != ev.initiator) continue;
    out.push_back(&ev);
  }
  return out;
}

TraceConsole::Dispatch TraceConsole::receive_request(const TraceRequest& r, NodeId initiator_node,
                                                     const std::vector<int>& agents,
                                                     SimTime now) {
  TraceEvent ev;
  ev.serial = next_serial_++;
  ev.initiator = r.itm_name;
  ev.initiator_node = initiator_node;
  ev.initiated_at = now;
  ev.request = r;
  ev.instructed_agents = agents;
  db_.open(std::move(ev));

  Dispatch d;
  d.instruction.serial = next_serial_ - 1;
  d.instruction.flow_signature = r.flow_signature;
  d.instruction.issued_at = now;
  d.agents = agents;
  return d;
}

bool TraceConsole::collect(const AgentFeedback& fb) {
  TraceEvent& ev = db_.at(fb.serial);
  ev.feedback.push_back(fb);
  return ev.feedback.size() >= ev.instructed_agents.size();
}

bool TraceConsole::concluded(int serial) const { return db_.at(serial).concluded; }

const RebuiltPath& TraceConsole::conclude(int serial, SimTime now) {
  TraceEvent& ev = db_.at(serial);
  if (!ev.concluded) {
    ev.conclusion = rebuild_path(serial, ev.initiator_node, ev.feedback, now);
    ev.concluded = true;
  }
  return ev.conclusion;
}

AgentFeedback agent_analyze(Monitor& agent, const TraceInstruction& ins, const Topology& topo,
                            SimTime now) {
  AgentFeedback fb;
  fb.agent_id = agent.id();
  fb.serial = ins.serial;
  fb.agent_node = agent.attachment();

  const FlowSignature& sig = ins.flow_signature;
  // Expired means nothing inside the asked-for window can still be held.
  fb.window_expired = agent.window_expired(sig.window_to, now);
  fb.matched_records =
      agent.match_window(sig.dst, sig.flood_type, sig.window_from, sig.window_to, now);
  if (fb.matched_records.empty()) return fb;

  fb.first_seen = fb.matched_records.front().seen_at;
  std::set<LinkId> up, down;
  for (const PacketRecord& r : fb.matched_records) {
    fb.first_seen = std::min(fb.first_seen, r.seen_at);
    (r.direction == Direction::Incoming ? up : down).insert(r.link);
  }
  fb.incoming_match = !up.empty();
  fb.outgoing_match = !down.empty();

  auto describe = [&](LinkId l) {
    const NodeId peer = topo.peer(l, fb.agent_node);
    return LinkObservation{l, peer, topo.node(peer).kind == NodeKind::Host};
  };
  for (LinkId l : up) {
    const LinkObservation o = describe(l);
    fb.upstream_links.push_back(o);
    // The owner of the flooded address is disqualified: blocking turns
    // in-flight packets around at it, which reads as upstream here.
    if (o.host_facing && topo.node(o.peer).addr != sig.dst) fb.source_candidates.push_back(o.peer);
  }
  for (LinkId l : down) fb.downstream_links.push_back(describe(l));
  std::sort(fb.source_candidates.begin(), fb.source_candidates.end());
  return fb;
}

RebuiltPath rebuild_path(int serial, NodeId initiator_node,
                         const std::vector<AgentFeedback>& feedback, SimTime now) {
  RebuiltPath rp;
  rp.serial = serial;
  rp.concluded_at = now;

  std::set<std::pair<NodeId, NodeId>> edges;
  std::set<NodeId> incoming_positive_nodes;
  for (const AgentFeedback& fb : feedback) {
    if (fb.incoming_match) incoming_positive_nodes.insert(fb.agent_node);
    for (const LinkObservation& o : fb.upstream_links) edges.emplace(o.peer, fb.agent_node);
    for (const LinkObservation& o : fb.downstream_links) edges.emplace(fb.agent_node, o.peer);
  }

  if (edges.empty()) {
    // No positive feedback anywhere: recorded as untraceable.
    rp.untraceable = true;
    rp.confidence = Confidence::Partial;
    return rp;
  }

  std::set<NodeId> sources;
  for (const AgentFeedback& fb : feedback) {
    if (!fb.incoming_match) continue;
    for (NodeId cand : fb.source_candidates) {
      // A host that itself hosts a positively-matching agent is a relay
      // in evidence, not an origin.
      if (!incoming_positive_nodes.count(cand)) sources.insert(cand);
    }
  }

  rp.edges.assign(edges.begin(), edges.end());
  rp.sources.assign(sources.begin(), sources.end());

  // Exact only when every judged source connects to the reporting node
  // through an unbroken directed chain of rebuilt edges.
  std::multimap<NodeId, NodeId> adj;
  for (const auto& e : rp.edges) adj.emplace(e.first, e.second);
  auto reaches_initiator = [&](NodeId from) {
    std::set<NodeId> seen{from};
    std::queue<NodeId> q;
    q.push(from);
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop();
      if (v == initiator_node) return true;
      auto [lo, hi] = adj.equal_range(v);
      for (auto it = lo; it != hi; ++it)
        if (seen.insert(it->second).second) q.push(it->second);
    }
    return false;
  };
  bool exact = !rp.sources.empty();
  for (NodeId s : rp.sources)
    if (!reaches_initiator(s)) exact = false;
  rp.confidence = exact ? Confidence::Exact : Confidence::Partial;
  return rp;
}

}  // namespace itmsim
