#include "itmsim/simulation.hpp"

#include <algorithm>

#include "itmsim/errors.hpp"
#include "itmsim/events.hpp"

namespace itmsim {
namespace {

CommandFlood parse_flood(const std::string& s) {
  if (s == "tcp_syn") return CommandFlood::TcpSyn;
  if (s == "tcp_ack") return CommandFlood::TcpAck;
  if (s == "udp") return CommandFlood::Udp;
  if (s == "icmp_echo") return CommandFlood::IcmpEchoReq;
  if (s == "smurf") return CommandFlood::Smurf;
  throw SimError(Errc::ValidationError, "unknown flood '" + s + "'");
}

}  // namespace

Simulation::Simulation(const Scenario& sc, std::uint64_t seed) : scenario_(sc), seed_(seed) {
  build_topology();
  build_modules();
  engine_->set_handler([this](const Event& ev) { dispatch(ev); });
  schedule_initial();
}

NodeId Simulation::resolve(const std::string& name) const {
  const NodeId id = topo_.node_by_name(name);
  if (id == kNoNode) throw SimError(Errc::ValidationError, "unknown node '" + name + "'");
  return id;
}

Address Simulation::resolve_target(const std::string& target) const {
  const NodeId id = topo_.node_by_name(target);
  if (id != kNoNode) return topo_.node(id).addr;
  return parse_address(target);
}

void Simulation::build_topology() { topo_ = build_scenario_topology(scenario_); }

void Simulation::build_modules() {
  engine_ = std::make_unique<Engine>(seed_);
  net_ = std::make_unique<Network>(topo_);

  for (std::size_t i = 0; i < scenario_.monitors.size(); ++i) {
    const ScenarioMonitor& m = scenario_.monitors[i];
    const NodeId att = resolve(m.attachment);
    monitors_.emplace_back(static_cast<int>(i) + 1, m.name, att, parse_subnet(m.watched_range),
                           m.bucket_width, m.window, m.threshold, m.report_period);
    monitors_at_[att].push_back(i);
  }

  if (scenario_.datacenter) {
    dc_ = std::make_unique<DataCenter>(resolve(scenario_.datacenter->node),
                                       scenario_.detection.global_threshold);
    for (const Monitor& m : monitors_)
      dc_->register_monitor(RegisteredMonitor{m.id(), m.name(), m.attachment(),
                                              m.watched_range(), m.threshold(),
                                              m.bucket_width()});
    // The trace console shares the data center node.
    console_ = std::make_unique<TraceConsole>(dc_->node());
  }

  if (scenario_.honeypot) {
    const ScenarioHoneypot& h = *scenario_.honeypot;
    const NodeId hn = resolve(h.node);
    std::vector<EntrapFile> files;
    for (const ScenarioEntrapFile& f : h.entrap_files)
      files.push_back(EntrapFile{f.selector, f.name});
    honeypot_ = std::make_unique<Honeypot>(h.name, hn, topo_.node(hn).addr, std::move(files),
                                           h.bandwidth_cap, h.trigger_delay,
                                           scenario_.trace.window_back, h.deceive_responses);
  }

  if (scenario_.botnet) {
    const ScenarioBotnet& b = *scenario_.botnet;
    std::vector<NodeId> candidates;
    for (const std::string& c : b.candidates) candidates.push_back(resolve(c));
    botnet_ = std::make_unique<Botnet>(std::move(candidates), b.poll_interval);
    botnet_->channel().ddns_name = b.ddns_name;
    botnet_->channel().static_ip = b.static_ip;
    cnc_node_ = resolve(b.cnc);
    for (const ScenarioCommand& c : b.commands) {
      AttackCommand cmd;
      cmd.flood_type = parse_flood(c.flood);
      cmd.target = resolve_target(c.target);
      cmd.rate = c.rate;
      cmd.duration = c.duration;
      cmd.spoof = c.spoof == "uniform" ? SpoofMode::UniformRandom : SpoofMode::None;
      cmd.size = c.size;
      cmd.selector = c.selector;
      if (!c.amplifier.empty()) cmd.amplifier = parse_subnet(c.amplifier);
      commands_.push_back(cmd);
      command_targets_.push_back(cmd.amplifier ? cmd.amplifier->broadcast() : cmd.target);
    }
  }

  if (!scenario_.victim.empty())
    victim_ = resolve(scenario_.victim);
  else if (!commands_.empty())
    victim_ = topo_.node_by_addr(commands_.front().target);

  for (const ScenarioLegit& g : scenario_.legit) {
    std::vector<NodeId> hosts;
    for (const std::string& h : g.hosts) hosts.push_back(resolve(h));
    std::vector<Address> pool;
    for (const std::string& d : g.dst_pool) pool.push_back(resolve_target(d));
    legit_hosts_.push_back(std::move(hosts));
    legit_pools_.push_back(std::move(pool));
  }

  if (scenario_.baselines.ppm) ppm_ = std::make_unique<PpmCollector>(scenario_.baselines.p);
  if (scenario_.prevention) agent_node_ = resolve(scenario_.prevention->agent);
}

void Simulation::schedule_initial() {
  const SimTime T = scenario_.duration;
  auto timer = [&](SimTime at, NodeId target, TimerKind k, std::int64_t a = 0,
                   std::int64_t b = 0) {
    if (at <= T) engine_->schedule(at, target, TimerFire{k, a, b});
  };

  if (botnet_) {
    const ScenarioBotnet& b = *scenario_.botnet;
    timer(b.scan_start, cnc_node_, TimerKind::ScanTick);
    if (b.establish_at) timer(*b.establish_at, cnc_node_, TimerKind::EstablishBotnet);
    for (std::size_t i = 0; i < b.commands.size(); ++i)
      timer(b.commands[i].at, cnc_node_, TimerKind::CommandIssue, static_cast<std::int64_t>(i));
  }

  for (std::size_t g = 0; g < scenario_.legit.size(); ++g)
    timer(1, kNoNode, TimerKind::LegitTick, static_cast<std::int64_t>(g));

  for (const Monitor& m : monitors_) {
    timer(m.bucket_width(), m.attachment(), TimerKind::BucketClose, m.id(), 0);
    timer(m.report_period(), m.attachment(), TimerKind::ReportSubmit, m.id());
  }

  for (std::size_t q = 0; q < scenario_.queries.size(); ++q)
    timer(scenario_.queries[q].at, dc_ ? dc_->node() : kNoNode, TimerKind::QueryArrive,
          static_cast<std::int64_t>(q));

  if (scenario_.prevention) {
    if (scenario_.prevention->infiltrate_at)
      timer(*scenario_.prevention->infiltrate_at, agent_node_, TimerKind::AgentInfiltrate);
    if (scenario_.prevention->shutdown_at)
      timer(*scenario_.prevention->shutdown_at, cnc_node_, TimerKind::CncShutdown);
  }
}

RunSummary Simulation::run() {
  if (ran_) throw SimError(Errc::InvalidArgument, "simulation already ran");
  ran_ = true;
  RunSummary s = engine_->run(scenario_.duration);
  engine_->finish();
  return s;
}

std::uint64_t Simulation::in_flight() const {
  std::uint64_t n = 0;
  engine_->for_each_pending([&](const Event& ev) {
    if (std::holds_alternative<PacketArrival>(ev.payload)) ++n;
  });
  return n;
}

const Monitor* Simulation::monitor_by_name(const std::string& name) const {
  for (const Monitor& m : monitors_)
    if (m.name() == name) return &m;
  return nullptr;
}

void Simulation::dispatch(const Event& ev) {
  if (std::holds_alternative<PacketArrival>(ev.payload))
    on_packet_event(ev);
  else if (std::holds_alternative<InjectDue>(ev.payload))
    on_inject_due(ev);
  else if (std::holds_alternative<TimerFire>(ev.payload))
    on_timer(ev);
  else
    on_control(ev);
}

// ---------------------------------------------------------------- data plane

void Simulation::inject_and_route(Packet proto, NodeId origin) {
  Packet p = net_->inject(std::move(proto), origin, engine_->now());
  process_packet(std::move(p), origin, kNoLink, true);
}

void Simulation::on_inject_due(const Event& ev) {
  inject_and_route(std::get<InjectDue>(ev.payload).proto, ev.target);
}

void Simulation::on_packet_event(const Event& ev) {
  const PacketArrival& pa = std::get<PacketArrival>(ev.payload);
  process_packet(pa.packet, ev.target, pa.via, false);
}

void Simulation::process_packet(Packet p, NodeId at, LinkId via, bool injected_here) {
  const SimTime now = engine_->now();

  // Marking mutates the packet before anything downstream copies it.
  if (ppm_ && topo_.node(at).kind == NodeKind::Router)
    ppm_mark(p, topo_.node(at).addr, ppm_->p(), engine_->rng());

  // Injection already logged the origin as the first path entry.
  if (!injected_here) {
    net_->arrive(p, at);
    observe(at, p, Direction::Incoming, via);
  }

  const HopResult r = net_->step(p, at, now);
  switch (r.kind) {
    case HopResult::Kind::Dropped:
      return;
    case HopResult::Kind::Delivered:
      deliver_packet(p, at, r.redirected);
      return;
    case HopResult::Kind::BroadcastFanout: {
      // Every subnet member answers the echo request at its own node.
      for (NodeId member : r.responders) {
        Packet reply;
        reply.src = topo_.node(member).addr;
        reply.dst = p.src;
        reply.type = FloodType::IcmpEchoReply;
        reply.size = p.size;
        reply.selector = p.selector;
        engine_->schedule(r.arrive_at - now, member, InjectDue{std::move(reply)});
      }
      return;
    }
    case HopResult::Kind::Forwarded:
      observe(at, p, Direction::Outgoing, r.via_out);
      engine_->schedule(r.arrive_at - now, r.next, PacketArrival{std::move(p), r.via_out});
      return;
  }
}

void Simulation::observe(NodeId at, const Packet& p, Direction d, LinkId link) {
  auto it = monitors_at_.find(at);
  if (it == monitors_at_.end()) return;
  for (std::size_t ix : it->second) monitors_[ix].record_traffic(p, d, link, engine_->now());
}

void Simulation::deliver_packet(const Packet& p, NodeId at, bool redirected) {
  const SimTime now = engine_->now();
  if (at == victim_) {
    ++victim_series_[now];
    if (ppm_ && p.type != FloodType::Legit) ppm_->observe(p, now);
  }
  if (honeypot_ && at == honeypot_->node()) {
    ++honeypot_series_[now];
    auto out = honeypot_->on_packet(p, now);
    if (out.triggered)
      engine_->schedule(out.emit_at - now, honeypot_->node(), TimerFire{TimerKind::HoneypotEmit});
    if (out.response) {
      for (Packet& resp : honeypot_->throttle({*out.response}, now)) {
        ++deceive_sent_;
        inject_and_route(std::move(resp), honeypot_->node());
      }
    }
  }
  (void)redirected;
}

// ------------------------------------------------------------- control plane

SimTime Simulation::control_latency(NodeId from, NodeId to) const {
  const std::int64_t lat = net_->routing().path_latency(topo_, from, to);
  return lat < 0 ? 0 : static_cast<SimTime>(lat);
}

void Simulation::send_control(NodeId from, NodeId to, ControlMessage msg) {
  // Control traffic rides routed latency but consumes no link capacity
  // and is invisible to monitors.
  const std::int64_t lat = net_->routing().path_latency(topo_, from, to);
  if (lat < 0) return;
  engine_->schedule(static_cast<SimTime>(lat), to, std::move(msg));
}

void Simulation::on_timer(const Event& ev) {
  const TimerFire& t = std::get<TimerFire>(ev.payload);
  const SimTime now = engine_->now();
  const SimTime T = scenario_.duration;
  auto again = [&](SimTime delay, TimerKind k, std::int64_t a = 0, std::int64_t b = 0) {
    if (now + delay <= T) engine_->schedule(delay, ev.target, TimerFire{k, a, b});
  };

  switch (t.kind) {
    case TimerKind::ScanTick: {
      const ScenarioBotnet& b = *scenario_.botnet;
      botnet_->scan_tick(b.scan_rate, b.vulnerability_prob, engine_->rng(), now);
      if (!botnet_->scan_done())
        again(1, TimerKind::ScanTick);
      else if (!b.establish_at)
        again(1, TimerKind::EstablishBotnet);
      break;
    }

    case TimerKind::EstablishBotnet: {
      try {
        botnet_->establish(cnc_node_, resolve(scenario_.botnet->botmaster), now);
      } catch (const SimError&) {
        establish_failed_ = true;
        break;
      }
      for (NodeId member : botnet_->channel().members)
        if (now + botnet_->bot(member).poll_interval <= T)
          engine_->schedule(botnet_->bot(member).poll_interval, member,
                            TimerFire{TimerKind::BotPoll, member});
      break;
    }

    case TimerKind::CommandIssue: {
      const auto ci = static_cast<std::size_t>(t.a);
      try {
        const std::size_t logged = botnet_->issue(commands_[ci], now);
        for (NodeId member : botnet_->channel().members) {
          send_control(cnc_node_, member, ControlMessage{CncCommandMsg{logged, member}});
          ++msg_stats_.cnc_commands;
        }
      } catch (const SimError&) {
        ++commands_rejected_;
      }
      break;
    }

    case TimerKind::BotFloodTick: {
      const NodeId bot = static_cast<NodeId>(t.a);
      const auto ci = static_cast<std::size_t>(t.b);
      if (botnet_->bot(bot).phase != BotPhase::Attacking) break;
      const AttackCommand& cmd = botnet_->channel().command_log[ci].second;
      const Address bcast = cmd.amplifier ? cmd.amplifier->broadcast() : Address{};
      for (Packet& pk : generate_flood_tick(cmd, topo_.node(bot).addr, bcast, engine_->rng())) {
        ++attack_injected_;
        inject_and_route(std::move(pk), bot);
      }
      break;
    }

    case TimerKind::AttackEnd: {
      const NodeId bot = static_cast<NodeId>(t.a);
      if (botnet_->bot(bot).phase == BotPhase::Attacking) botnet_->end_attack(bot, now);
      break;
    }

    case TimerKind::BotPoll: {
      const NodeId bot = static_cast<NodeId>(t.a);
      if (botnet_->bot(bot).phase == BotPhase::Disabled) break;
      const bool died = botnet_->poll(bot, now);
      if (!died) again(botnet_->bot(bot).poll_interval, TimerKind::BotPoll, bot);
      break;
    }

    case TimerKind::LegitTick: {
      const auto gi = static_cast<std::size_t>(t.a);
      const ScenarioLegit& g = scenario_.legit[gi];
      for (NodeId host : legit_hosts_[gi])
        for (Packet& pk :
             generate_legit_tick(topo_.node(host).addr, g.rate, legit_pools_[gi], g.size,
                                 engine_->rng()))
          inject_and_route(std::move(pk), host);
      again(1, TimerKind::LegitTick, t.a);
      break;
    }

    case TimerKind::BucketClose: {
      Monitor& m = monitors_[static_cast<std::size_t>(t.a) - 1];
      const SimTime start = static_cast<SimTime>(t.b);
      const Bucket b = m.close_bucket(start);
      if (scenario_.detection.mode == "distributed" && m.status() == MonitorStatus::Active &&
          m.over_threshold(b)) {
        m.set_status(MonitorStatus::Attacked);
        if (dc_) {
          send_control(m.attachment(), dc_->node(),
                       ControlMessage{MonitorAttackedMsg{m.id(), b.start, b.count}});
          ++msg_stats_.attacked_notices;
        }
      }
      again(m.bucket_width(), TimerKind::BucketClose, t.a,
            static_cast<std::int64_t>(start + m.bucket_width()));
      break;
    }

    case TimerKind::ReportSubmit: {
      Monitor& m = monitors_[static_cast<std::size_t>(t.a) - 1];
      std::vector<Bucket> buckets = m.unsent_buckets();
      if (!buckets.empty() && dc_) {
        m.mark_submitted(buckets.back().start + 1);
        send_control(m.attachment(), dc_->node(),
                     ControlMessage{LogSubmissionMsg{m.id(), std::move(buckets)}});
        ++msg_stats_.log_submissions;
      }
      again(m.report_period(), TimerKind::ReportSubmit, t.a);
      break;
    }

    case TimerKind::QueryArrive: {
      const ScenarioQuery& q = scenario_.queries[static_cast<std::size_t>(t.a)];
      const Monitor* m = monitor_by_name(q.monitor);
      Query qq;
      qq.id = static_cast<int>(t.a) + 1;
      qq.lane = q.lane == "private" ? QueryLane::Private : QueryLane::Public;
      qq.monitor_id = m->id();
      qq.from = q.from;
      qq.to = q.to;
      qq.enqueued_at = now;
      dc_->enqueue_query(qq);
      if (!query_service_scheduled_ && now + 1 <= T) {
        query_service_scheduled_ = true;
        engine_->schedule(1, dc_->node(), TimerFire{TimerKind::QueryService});
      }
      break;
    }

    case TimerKind::QueryService: {
      dc_->service_queries(scenario_.datacenter->query_service_rate, now);
      if (dc_->pending_queries() > 0 && now + 1 <= T)
        engine_->schedule(1, dc_->node(), TimerFire{TimerKind::QueryService});
      else
        query_service_scheduled_ = false;
      break;
    }

    case TimerKind::HoneypotEmit:
      emit_honeypot_requests();
      break;

    case TimerKind::HoneypotRetry: {
      std::vector<TraceRequest> pending = std::move(retry_queue_);
      retry_queue_.clear();
      for (TraceRequest& r : pending) {
        if (console_ && net_->routing().hop_count(honeypot_->node(), console_->node()) >= 0) {
          send_control(honeypot_->node(), console_->node(),
                       ControlMessage{TraceRequestMsg{std::move(r)}});
          ++msg_stats_.trace_requests;
        } else {
          // Second failure; the console never hears about this flow.
          ++lost_trace_requests_;
        }
      }
      break;
    }

    case TimerKind::TraceDeadline: {
      const int serial = static_cast<int>(t.a);
      if (!console_->concluded(serial)) conclude_trace(serial);
      break;
    }

    case TimerKind::CncShutdown:
      botnet_->shutdown(now);
      break;

    case TimerKind::AgentInfiltrate: {
      try {
        botnet_->infiltrate(agent_node_, now);
        infiltrate_failed_ = false;
      } catch (const SimError&) {
        // Channel not up yet (or already dead): keep knocking.
        infiltrate_failed_ = true;
        again(1, TimerKind::AgentInfiltrate);
      }
      break;
    }
  }
}

void Simulation::emit_honeypot_requests() {
  const SimTime now = engine_->now();
  for (TraceRequest& r : honeypot_->emit_due(now)) {
    honeypot_->record_emitted(r);
    const bool reachable =
        console_ && net_->routing().hop_count(honeypot_->node(), console_->node()) >= 0;
    if (reachable) {
      send_control(honeypot_->node(), console_->node(),
                   ControlMessage{TraceRequestMsg{std::move(r)}});
      ++msg_stats_.trace_requests;
    } else {
      honeypot_->record_unreachable();
      retry_queue_.push_back(std::move(r));
      if (now + 1 <= scenario_.duration)
        engine_->schedule(1, honeypot_->node(), TimerFire{TimerKind::HoneypotRetry});
      else
        ++lost_trace_requests_;
    }
  }
}

void Simulation::on_control(const Event& ev) {
  const ControlMessage& cm = std::get<ControlMessage>(ev.payload);
  const SimTime now = engine_->now();
  const SimTime T = scenario_.duration;

  if (const auto* cmd = std::get_if<CncCommandMsg>(&cm.body)) {
    if (!botnet_->deliver(cmd->member, cmd->command_index, now)) return;
    const AttackCommand& ac = botnet_->channel().command_log[cmd->command_index].second;
    for (SimTime k = 0; k < ac.duration; ++k)
      if (now + k <= T)
        engine_->schedule(k, cmd->member,
                          TimerFire{TimerKind::BotFloodTick, cmd->member,
                                    static_cast<std::int64_t>(cmd->command_index)});
    if (now + ac.duration <= T)
      engine_->schedule(ac.duration, cmd->member, TimerFire{TimerKind::AttackEnd, cmd->member});
    return;
  }

  if (const auto* att = std::get_if<MonitorAttackedMsg>(&cm.body)) {
    dc_->note_attacked(att->monitor_id, now);
    dc_->record_alarm(now, att->count);
    decide_block(att->monitor_id);
    return;
  }

  if (const auto* logs = std::get_if<LogSubmissionMsg>(&cm.body)) {
    const SubmitResult res = dc_->accept_logs(logs->monitor_id, logs->buckets, now);
    if (res == SubmitResult::Accepted && scenario_.detection.mode == "centralized")
      for (int mid : dc_->detect_centralized(now)) decide_block(mid);
    return;
  }

  if (const auto* blk = std::get_if<BlockMonitorMsg>(&cm.body)) {
    Monitor& m = monitors_[static_cast<std::size_t>(blk->monitor_id) - 1];
    m.set_status(MonitorStatus::Blocked);
    // The block diverts the whole watched range into the honeypot.
    if (honeypot_) net_->add_redirect(m.watched_range(), honeypot_->node());
    return;
  }

  if (std::get_if<HoneypotBlockNotice>(&cm.body)) {
    for (SimTime emit_at : honeypot_->note_block(now))
      engine_->schedule(emit_at - now, honeypot_->node(), TimerFire{TimerKind::HoneypotEmit});
    return;
  }

  if (const auto* req = std::get_if<TraceRequestMsg>(&cm.body)) {
    handle_trace_request(req->request);
    return;
  }

  if (const auto* ins = std::get_if<TraceInstructionMsg>(&cm.body)) {
    Monitor& m = monitors_[static_cast<std::size_t>(ins->agent_id) - 1];
    AgentFeedback fb = agent_analyze(m, ins->instruction, topo_, now);
    send_control(m.attachment(), console_->node(), ControlMessage{TraceFeedbackMsg{std::move(fb)}});
    ++msg_stats_.trace_feedback;
    return;
  }

  if (const auto* fb = std::get_if<TraceFeedbackMsg>(&cm.body)) {
    if (console_->concluded(fb->feedback.serial)) return;  // past the deadline
    if (console_->collect(fb->feedback)) conclude_trace(fb->feedback.serial);
    return;
  }

  // TraceAdvisoryMsg: informational endpoint, nothing reacts.
}

void Simulation::handle_trace_request(const TraceRequest& req) {
  const SimTime now = engine_->now();
  std::vector<int> agents;
  for (const Monitor& m : monitors_)
    if (!dc_->blocked(m.id())) agents.push_back(m.id());

  const TraceConsole::Dispatch d = console_->receive_request(req, honeypot_->node(), agents, now);

  SimTime max_lat = 0;
  for (int aid : agents) {
    const Monitor& m = monitors_[static_cast<std::size_t>(aid) - 1];
    max_lat = std::max(max_lat, control_latency(console_->node(), m.attachment()));
    send_control(console_->node(), m.attachment(),
                 ControlMessage{TraceInstructionMsg{d.instruction, aid}});
    ++msg_stats_.trace_instructions;
  }

  if (agents.empty()) {
    conclude_trace(d.instruction.serial);
    return;
  }

  // Default deadline: twice the worst instruction round trip.
  SimTime timeout = scenario_.trace.collect_timeout;
  if (timeout == 0) timeout = std::max<SimTime>(1, 4 * max_lat);
  engine_->schedule(timeout, console_->node(),
                    TimerFire{TimerKind::TraceDeadline, d.instruction.serial});
}

void Simulation::conclude_trace(int serial) {
  const RebuiltPath& rp = console_->conclude(serial, engine_->now());
  const TraceEvent& te = console_->db().at(serial);
  send_control(console_->node(), te.initiator_node,
               ControlMessage{TraceAdvisoryMsg{serial, rp.confidence == Confidence::Exact,
                                               rp.untraceable}});
  ++msg_stats_.trace_advisories;
}

void Simulation::decide_block(int monitor_id) {
  const SimTime now = engine_->now();
  const DataCenter::BlockDecision bd = dc_->block(monitor_id, now);
  if (!bd.fresh) return;
  block_log_.emplace_back(monitor_id, now);
  send_control(dc_->node(), bd.attachment, ControlMessage{BlockMonitorMsg{monitor_id}});
  ++msg_stats_.block_orders;
  if (honeypot_) {
    send_control(dc_->node(), honeypot_->node(),
                 ControlMessage{HoneypotBlockNotice{monitor_id, bd.range}});
    ++msg_stats_.block_notices;
  }
}

}  // namespace itmsim
