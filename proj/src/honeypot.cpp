#include "itmsim/honeypot.hpp"

#include "itmsim/errors.hpp"

namespace itmsim {

Honeypot::Honeypot(std::string name, NodeId node, Address address,
                   std::vector<EntrapFile> entrap_files, std::uint32_t bandwidth_cap,
                   SimTime trigger_delay, SimTime window_back, bool deceive_responses)
    : name_(std::move(name)),
      node_(node),
      address_(address),
      bandwidth_cap_(bandwidth_cap),
      trigger_delay_(trigger_delay),
      window_back_(window_back),
      deceive_responses_(deceive_responses) {
  for (const EntrapFile& f : entrap_files) {
    if (f.selector == 0)
      throw SimError(Errc::ValidationError, "entrap selector 0 is reserved for clean traffic");
    entrap_files_[f.selector] = f.name;
  }
}

Honeypot::CaptureOutcome Honeypot::on_packet(const Packet& p, SimTime now) {
  CaptureOutcome out;
  capture_log_.push_back(
      PacketRecord{now, p.src, p.dst, p.type, p.size, Direction::Incoming, kNoLink});
  if (p.type == FloodType::Legit) ++legit_arrivals_;

  bool entrap_hit = false;
  if (p.selector != 0) {
    auto lure = entrap_files_.find(p.selector);
    if (lure != entrap_files_.end()) {
      entrap_accesses_.emplace_back(now, lure->second);
      entrap_hit = true;
    }
  }

  FlowState& f = flows_[FlowKey{p.dst, p.type}];
  if (f.packets == 0) {
    f.first_seen = now;
    f.first_src = p.src;
  }
  ++f.packets;
  f.bytes += p.size;

  // Two independent sufficient triggers: touching a lure, or any arrival
  // once the data center reported a block. One request per flow.
  if (!f.triggered && (entrap_hit || block_noticed_)) {
    f.triggered = true;
    f.packets_at_trigger = f.packets;
    f.emit_at = now + trigger_delay_;
    out.triggered = true;
    out.emit_at = f.emit_at;
  }

  if (deceive_responses_) {
    Packet resp;
    resp.src = address_;
    resp.dst = p.src;
    resp.size = p.size;
    if (p.type == FloodType::TcpSyn) {
      resp.type = FloodType::TcpAck;
      out.response = resp;
    } else if (p.type == FloodType::IcmpEchoReq) {
      resp.type = FloodType::IcmpEchoReply;
      out.response = resp;
    }
  }
  return out;
}

std::vector<SimTime> Honeypot::note_block(SimTime now) {
  block_noticed_ = true;
  std::vector<SimTime> due;
  for (auto& [key, f] : flows_) {
    if (f.triggered) continue;
    f.triggered = true;
    f.packets_at_trigger = f.packets;
    f.emit_at = now + trigger_delay_;
    due.push_back(f.emit_at);
  }
  return due;
}

std::vector<TraceRequest> Honeypot::emit_due(SimTime now) {
  std::vector<TraceRequest> due;
  for (auto& [key, f] : flows_) {
    if (!f.triggered || f.emitted || f.emit_at != now) continue;
    f.emitted = true;
    TraceRequest r;
    r.itm_name = name_;
    r.flow_size = f.packets;
    r.flow_bytes = f.bytes;
    r.trigger_size = f.packets_at_trigger;
    r.visit_time = f.first_seen;
    r.dst = key.first;
    r.observed_src = f.first_src;
    r.flow_signature.dst = key.first;
    r.flow_signature.flood_type = key.second;
    r.flow_signature.window_from = f.first_seen >= window_back_ ? f.first_seen - window_back_ : 0;
    r.flow_signature.window_to = now;
    due.push_back(std::move(r));
  }
  return due;
}

std::vector<Packet> Honeypot::throttle(std::vector<Packet> outbound, SimTime now) {
  if (sent_this_tick_.first != now) sent_this_tick_ = {now, 0};
  std::vector<Packet> allowed;
  for (Packet& p : outbound) {
    if (sent_this_tick_.second < bandwidth_cap_) {
      ++sent_this_tick_.second;
      allowed.push_back(std::move(p));
    } else {
      ++throttled_dropped_;
    }
  }
  return allowed;
}

}  // namespace itmsim
