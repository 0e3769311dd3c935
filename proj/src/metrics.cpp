#include "itmsim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace itmsim {
namespace {

using nlohmann::json;
using Edge = std::pair<NodeId, NodeId>;

json series_json(const std::map<SimTime, std::uint64_t>& s) {
  json a = json::array();
  for (const auto& [tick, n] : s) a.push_back({tick, n});
  return a;
}

double jaccard(const std::set<NodeId>& a, const std::set<NodeId>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (NodeId x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

// Ground truth for one traced flow: who really injected packets of
// (dst, type) sent inside the window, and which directed link hops
// those packets actually took.
struct FlowTruth {
  std::set<NodeId> origins;
  std::set<Edge> edges;
};

FlowTruth flow_truth(const LedgerInspector& led, const FlowSignature& sig) {
  FlowTruth t;
  led.for_each([&](PacketId, const GroundTruthLedger::Entry& e) {
    if (e.dst != sig.dst || e.type != sig.flood_type) return;
    if (e.sent_at < sig.window_from || e.sent_at > sig.window_to) return;
    t.origins.insert(e.true_origin);
    for (std::size_t i = 1; i < e.true_path.size(); ++i)
      t.edges.insert({e.true_path[i - 1], e.true_path[i]});
  });
  return t;
}

json trace_json(const Simulation& sim, const TraceEvent& te) {
  const Topology& topo = sim.topo();
  auto name_of = [&](NodeId n) { return topo.node(n).name; };

  json j;
  j["serial"] = te.serial;
  j["initiator"] = te.initiator;
  j["initiated_at"] = te.initiated_at;
  j["flow"] = {{"dst", format_address(te.request.flow_signature.dst)},
               {"flood_type", flood_type_name(te.request.flow_signature.flood_type)},
               {"window_from", te.request.flow_signature.window_from},
               {"window_to", te.request.flow_signature.window_to}};
  j["request"] = {{"flow_size", te.request.flow_size},
                  {"trigger_size", te.request.trigger_size},
                  {"visit_time", te.request.visit_time},
                  {"observed_src", format_address(te.request.observed_src)}};
  j["instructed"] = te.instructed_agents.size();
  j["feedback"] = te.feedback.size();
  std::size_t expired = 0;
  for (const AgentFeedback& fb : te.feedback) expired += fb.window_expired ? 1 : 0;
  j["expired_agents"] = expired;
  j["concluded"] = te.concluded;
  if (!te.concluded) return j;

  const RebuiltPath& rp = te.conclusion;
  j["concluded_at"] = rp.concluded_at;
  j["untraceable"] = rp.untraceable;
  j["confidence"] = rp.confidence == Confidence::Exact ? "exact" : "partial";
  json edges = json::array();
  for (const Edge& e : rp.edges) edges.push_back({name_of(e.first), name_of(e.second)});
  j["edges"] = edges;
  json sources = json::array();
  for (NodeId s : rp.sources) sources.push_back(name_of(s));
  j["sources"] = sources;

  const FlowTruth truth = flow_truth(sim.net().ledger_for_validation(),
                                     te.request.flow_signature);
  std::set<NodeId> found(rp.sources.begin(), rp.sources.end());
  std::set<Edge> fedges(rp.edges.begin(), rp.edges.end());
  std::size_t inter = 0;
  for (const Edge& e : fedges) inter += truth.edges.count(e);
  json acc;
  json torig = json::array();
  for (NodeId n : truth.origins) torig.push_back(name_of(n));
  acc["true_origins"] = torig;
  acc["origin_exact"] = found == truth.origins;
  acc["source_jaccard"] = jaccard(found, truth.origins);
  acc["edge_precision"] =
      fedges.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(fedges.size());
  acc["edge_recall"] = truth.edges.empty()
                           ? 0.0
                           : static_cast<double>(inter) / static_cast<double>(truth.edges.size());
  j["accuracy"] = acc;
  return j;
}

// The modal true router path behind attack deliveries at the victim,
// nearest router first. This is the evaluation-side knowledge PPM
// reconstruction is judged against.
std::vector<Address> true_router_path(const Simulation& sim) {
  if (sim.victim_node() == kNoNode) return {};
  const LedgerInspector led = sim.net().ledger_for_validation();
  std::map<std::vector<NodeId>, std::uint64_t> paths;
  led.for_each([&](PacketId, const GroundTruthLedger::Entry& e) {
    if (!e.delivered || e.type == FloodType::Legit) return;
    if (e.true_path.empty() || e.true_path.back() != sim.victim_node()) return;
    std::vector<NodeId> routers;
    for (NodeId n : e.true_path)
      if (sim.topo().node(n).kind == NodeKind::Router) routers.push_back(n);
    ++paths[routers];
  });
  std::vector<NodeId> best;
  std::uint64_t best_n = 0;
  for (const auto& [p, n] : paths)
    if (n > best_n) {
      best = p;
      best_n = n;
    }
  std::vector<Address> out;
  for (auto it = best.rbegin(); it != best.rend(); ++it)
    out.push_back(sim.topo().node(*it).addr);
  return out;
}

struct ComparisonRow {
  std::string method;
  bool complete = false;  // the method produced a finished path
  std::uint64_t packets_needed = 0;
  std::uint64_t in_packet_markings = 0;
  std::int64_t traceback_latency = -1;  // -1: method never concluded
  double path_accuracy = 0.0;
};

std::vector<ComparisonRow> comparison_rows(const Simulation& sim) {
  std::vector<ComparisonRow> rows;

  if (sim.console()) {
    const TraceEvent* first = nullptr;
    sim.console()->db().for_each([&](const TraceEvent& te) {
      if (te.concluded && !first) first = &te;
    });
    if (first) {
      const FlowTruth truth = flow_truth(sim.net().ledger_for_validation(),
                                         first->request.flow_signature);
      std::set<NodeId> found(first->conclusion.sources.begin(), first->conclusion.sources.end());
      ComparisonRow r;
      r.method = "single_packet_traceback";
      r.complete = !first->conclusion.untraceable;
      r.packets_needed = first->request.trigger_size;
      r.in_packet_markings = 0;
      r.traceback_latency =
          static_cast<std::int64_t>(first->conclusion.concluded_at - first->request.visit_time);
      r.path_accuracy = jaccard(found, truth.origins);
      rows.push_back(r);
    }
  }

  if (sim.ppm()) {
    const std::vector<Address> troute = true_router_path(sim);
    const auto depth = static_cast<std::uint32_t>(troute.size());
    const PpmReconstruction rec = ppm_reconstruct(sim.ppm()->observations(), depth);
    ComparisonRow r;
    r.method = "ppm";
    r.complete = rec.complete;
    r.packets_needed =
        rec.complete ? rec.packets_consumed : sim.ppm()->observations().size();
    r.in_packet_markings = sim.ppm()->marked_count();
    if (!sim.ppm()->observations().empty()) {
      const SimTime t0 = sim.ppm()->observations().front().seen_at;
      r.traceback_latency = static_cast<std::int64_t>(
          (rec.complete ? rec.completed_at : sim.ppm()->observations().back().seen_at) - t0);
    }
    std::size_t hit = 0;
    for (std::size_t i = 0; i < rec.path.size() && i < troute.size(); ++i)
      if (rec.path[i] == troute[i]) ++hit;
    r.path_accuracy = depth == 0 ? 0.0 : static_cast<double>(hit) / depth;
    rows.push_back(r);
  }

  return rows;
}

json build_report(const Simulation& sim) {
  const Scenario& sc = sim.scenario();
  const NetStats& ns = sim.net().stats();

  json j;
  j["schema"] = 1;
  j["name"] = sc.name;
  j["seed"] = sim.seed();
  j["duration"] = sc.duration;
  j["events_dispatched"] = sim.engine().dispatched_count();

  json by_type;
  for (int t = 0; t < 7; ++t) {
    const auto ix = static_cast<std::size_t>(t);
    by_type[flood_type_name(static_cast<FloodType>(t))] = {
        {"injected", ns.injected_by_type[ix]},
        {"delivered", ns.delivered_by_type[ix]},
        {"dropped", ns.dropped_by_type[ix]}};
  }
  j["traffic"] = {{"injected", ns.injected},
                  {"delivered", ns.delivered},
                  {"forwarded", ns.forwarded},
                  {"dropped_capacity", ns.dropped_capacity},
                  {"dropped_unroutable", ns.dropped_unroutable},
                  {"redirected_delivered", ns.redirected_delivered},
                  {"broadcast_fanouts", ns.broadcast_fanouts},
                  {"in_flight_at_end", sim.in_flight()},
                  {"attack_injected", sim.attack_packets_injected()},
                  {"by_type", by_type}};

  j["series"] = {{"victim", series_json(sim.victim_series())},
                 {"honeypot", series_json(sim.honeypot_series())}};

  json det;
  det["mode"] = sc.detection.mode;
  det["global_threshold"] = sc.detection.global_threshold;
  json dmons = json::array();
  for (const Monitor& m : sim.monitors())
    dmons.push_back({{"id", m.id()},
                     {"name", m.name()},
                     {"attachment", sim.topo().node(m.attachment()).name},
                     {"status", monitor_status_name(m.status())},
                     {"observed_total", m.observed_total()},
                     {"buckets_closed", m.buckets().size()}});
  det["monitors"] = dmons;
  json blocks = json::array();
  for (const auto& [mid, at] : sim.block_log()) blocks.push_back({{"monitor_id", mid}, {"at", at}});
  det["blocks"] = blocks;
  if (sim.datacenter()) {
    const DataCenter& dc = *sim.datacenter();
    json alarms = json::array();
    for (const auto& [at, count] : dc.alarm_events()) alarms.push_back({at, count});
    det["alarms"] = alarms;
    det["rejected_blocked"] = dc.rejected_blocked();
    det["rejected_unregistered"] = dc.rejected_unregistered();
    det["already_blocked_repeats"] = dc.already_blocked_repeats();
    json served = json::array();
    for (const auto& [at, lane, mid] : dc.service_log())
      served.push_back({{"at", at},
                        {"lane", lane == QueryLane::Private ? "private" : "public"},
                        {"monitor_id", mid}});
    det["queries_served"] = served;
    det["reports_published"] = dc.published_reports().size();
    det["queries_pending"] = dc.pending_queries();
  }
  j["detection"] = det;

  if (sim.botnet()) {
    const Botnet& bn = *sim.botnet();
    json b;
    b["candidates"] = bn.candidates().size();
    json phases;
    for (int p = 0; p < 6; ++p) {
      const auto ph = static_cast<BotPhase>(p);
      phases[bot_phase_name(ph)] = bn.bots_in(ph).size();
    }
    b["phases"] = phases;
    b["joined_total"] = bn.channel().members.size();
    b["commands_issued"] = bn.channel().command_log.size();
    b["commands_rejected"] = sim.commands_rejected();
    b["suppressed_deliveries"] = bn.suppressed_deliveries();
    b["ignored_deliveries"] = bn.ignored_deliveries();
    b["channel_active"] = bn.channel().active;
    b["establish_failed"] = sim.establish_failed();
    if (!bn.channel().active) b["shutdown_at"] = bn.channel().shutdown_at;
    if (bn.agent()) {
      b["agent"] = {{"infiltrated", true},
                    {"joined_at", bn.agent()->joined_at},
                    {"observed_commands", bn.agent()->observed_commands.size()}};
    } else if (sim.scenario().prevention) {
      b["agent"] = {{"infiltrated", false}, {"observed_commands", 0}};
    }
    j["botnet"] = b;
  }

  if (sim.honeypot()) {
    const Honeypot& hp = *sim.honeypot();
    json h;
    h["name"] = hp.name();
    h["captures"] = hp.capture_log().size();
    h["legit_arrivals"] = hp.legit_arrivals();
    json lures = json::array();
    for (const auto& [at, lure] : hp.entrap_accesses()) lures.push_back({at, lure});
    h["entrap_accesses"] = lures;
    h["requests_emitted"] = hp.emitted_requests().size();
    h["throttled_dropped"] = hp.throttled_dropped();
    h["console_unreachable"] = hp.console_unreachable();
    h["lost_requests"] = sim.lost_trace_requests();
    h["deceive_sent"] = sim.deceive_sent();
    h["block_noticed"] = hp.block_noticed();
    j["honeypot"] = h;
  }

  json traces = json::array();
  if (sim.console())
    sim.console()->db().for_each([&](const TraceEvent& te) { traces.push_back(trace_json(sim, te)); });
  j["traces"] = traces;

  const MsgStats& ms = sim.msg_stats();
  j["messages"] = {{"cnc_commands", ms.cnc_commands},
                   {"log_submissions", ms.log_submissions},
                   {"attacked_notices", ms.attacked_notices},
                   {"block_orders", ms.block_orders},
                   {"block_notices", ms.block_notices},
                   {"trace_requests", ms.trace_requests},
                   {"trace_instructions", ms.trace_instructions},
                   {"trace_feedback", ms.trace_feedback},
                   {"trace_advisories", ms.trace_advisories}};

  json comparison = json::array();
  for (const ComparisonRow& r : comparison_rows(sim))
    comparison.push_back({{"method", r.method},
                          {"complete", r.complete},
                          {"packets_needed", r.packets_needed},
                          {"in_packet_markings", r.in_packet_markings},
                          {"traceback_latency", r.traceback_latency},
                          {"path_accuracy", r.path_accuracy}});
  j["comparison"] = comparison;

  j["baselines"] = {{"ppm", sc.baselines.ppm}, {"p", sc.baselines.p}};
  return j;
}

}  // namespace

std::string report_json_text(const Simulation& sim) {
  return build_report(sim).dump(2) + "\n";
}

std::string report_csv_text(const Simulation& sim) {
  std::ostringstream out;
  const auto& vs = sim.victim_series();
  const auto& hs = sim.honeypot_series();

  out << "# series\n";
  out << "tick,victim_arrivals,honeypot_arrivals\n";
  for (SimTime t = 0; t <= sim.scenario().duration; ++t) {
    const auto v = vs.find(t);
    const auto h = hs.find(t);
    out << t << ',' << (v == vs.end() ? 0 : v->second) << ','
        << (h == hs.end() ? 0 : h->second) << '\n';
  }

  out << "# comparison\n";
  out << "method,complete,packets_needed,in_packet_markings,traceback_latency,path_accuracy\n";
  for (const ComparisonRow& r : comparison_rows(sim)) {
    char acc[32];
    std::snprintf(acc, sizeof acc, "%.6f", r.path_accuracy);
    out << r.method << ',' << (r.complete ? 1 : 0) << ',' << r.packets_needed << ','
        << r.in_packet_markings << ',' << r.traceback_latency << ',' << acc << '\n';
  }

  const NetStats& ns = sim.net().stats();
  out << "# summary\n";
  out << "injected," << ns.injected << '\n';
  out << "delivered," << ns.delivered << '\n';
  out << "dropped_capacity," << ns.dropped_capacity << '\n';
  out << "dropped_unroutable," << ns.dropped_unroutable << '\n';
  out << "redirected_delivered," << ns.redirected_delivered << '\n';
  out << "in_flight_at_end," << sim.in_flight() << '\n';
  out << "attack_injected," << sim.attack_packets_injected() << '\n';
  out << "blocks," << sim.block_log().size() << '\n';
  out << "traces," << (sim.console() ? sim.console()->db().size() : 0) << '\n';
  return out.str();
}

}  // namespace itmsim
