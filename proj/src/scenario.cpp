#include "itmsim/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "itmsim/errors.hpp"
#include "itmsim/topology.hpp"

namespace itmsim {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw SimError(Errc::ValidationError, msg); }

// Strict object view: every key must be consumed, unknown ones fail the
// load instead of drifting silently.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_ + " must be an object");
  }

  const json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const char* key) {
    const json* v = find(key);
    if (!v) fail(path_ + " is missing required field '" + std::string(key) + "'");
    return *v;
  }

  void done() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail("unknown field '" + path_ + "." + k + "'");
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    fail(path + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

std::uint32_t as_u32(const json& j, const std::string& path) {
  const std::uint64_t v = as_u64(j, path);
  if (v > 0xFFFFFFFFull) fail(path + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path + " must be a number");
  return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path + " must be a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> as_string_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path + " must be an array of strings");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path + " must be an array");
  return j;
}

Subnet parse_cidr(const std::string& text, const std::string& path) {
  try {
    return parse_subnet(text);
  } catch (const SimError& e) {
    fail(path + ": " + e.what());
  }
}

ScenarioTopology parse_topology(const json& j) {
  ScenarioTopology t;
  Obj o(j, "topology");
  const json& nodes = as_array(o.require("nodes"), "topology.nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "topology.nodes[" + std::to_string(i) + "]";
    Obj n(nodes[i], path);
    ScenarioNode sn;
    sn.name = as_string(n.require("name"), path + ".name");
    sn.kind = as_string(n.require("kind"), path + ".kind");
    if (sn.kind != "host" && sn.kind != "router")
      fail(path + ".kind must be 'host' or 'router'");
    if (const json* a = n.find("addr")) sn.addr = as_string(*a, path + ".addr");
    n.done();
    t.nodes.push_back(std::move(sn));
  }
  if (const json* links = o.find("links")) {
    for (std::size_t i = 0; i < as_array(*links, "topology.links").size(); ++i) {
      const std::string path = "topology.links[" + std::to_string(i) + "]";
      Obj l((*links)[i], path);
      ScenarioLink sl;
      sl.a = as_string(l.require("a"), path + ".a");
      sl.b = as_string(l.require("b"), path + ".b");
      if (const json* c = l.find("capacity")) sl.capacity = as_u32(*c, path + ".capacity");
      if (const json* lat = l.find("latency")) sl.latency = as_u64(*lat, path + ".latency");
      l.done();
      t.links.push_back(std::move(sl));
    }
  }
  if (const json* subnets = o.find("subnets")) {
    for (std::size_t i = 0; i < as_array(*subnets, "topology.subnets").size(); ++i) {
      const std::string path = "topology.subnets[" + std::to_string(i) + "]";
      Obj s((*subnets)[i], path);
      ScenarioSubnet ss;
      ss.cidr = as_string(s.require("cidr"), path + ".cidr");
      ss.gateway = as_string(s.require("gateway"), path + ".gateway");
      ss.members = as_string_array(s.require("members"), path + ".members");
      s.done();
      t.subnets.push_back(std::move(ss));
    }
  }
  o.done();
  return t;
}

ScenarioCommand parse_command(const json& j, const std::string& path) {
  Obj c(j, path);
  ScenarioCommand sc;
  sc.at = as_u64(c.require("at"), path + ".at");
  sc.flood = as_string(c.require("flood"), path + ".flood");
  sc.target = as_string(c.require("target"), path + ".target");
  if (const json* v = c.find("rate")) sc.rate = as_u32(*v, path + ".rate");
  if (const json* v = c.find("duration")) sc.duration = as_u64(*v, path + ".duration");
  if (const json* v = c.find("spoof")) sc.spoof = as_string(*v, path + ".spoof");
  if (const json* v = c.find("size")) sc.size = as_u32(*v, path + ".size");
  if (const json* v = c.find("selector")) sc.selector = as_u32(*v, path + ".selector");
  if (const json* v = c.find("amplifier")) sc.amplifier = as_string(*v, path + ".amplifier");
  c.done();
  static const std::set<std::string> kFloods{"tcp_syn", "tcp_ack", "udp", "icmp_echo", "smurf"};
  if (!kFloods.count(sc.flood)) fail(path + ".flood: unknown flood type '" + sc.flood + "'");
  if (sc.spoof != "none" && sc.spoof != "uniform")
    fail(path + ".spoof must be 'none' or 'uniform'");
  if (sc.rate < 1) fail(path + ".rate must be >= 1");
  if (sc.duration < 1) fail(path + ".duration must be >= 1");
  if (sc.flood == "smurf" && sc.amplifier.empty()) fail(path + " (smurf) needs an amplifier");
  if (sc.flood != "smurf" && !sc.amplifier.empty())
    fail(path + ".amplifier only applies to smurf");
  return sc;
}

Scenario parse_document(const json& doc) {
  Scenario s;
  Obj o(doc, "scenario");

  const json& schema = o.require("schema");
  if (!schema.is_number_integer() || schema.get<int>() != 1)
    fail("schema must be the integer 1");
  s.schema = 1;
  s.name = as_string(o.require("name"), "name");
  if (const json* v = o.find("seed")) s.seed = as_u64(*v, "seed");
  s.duration = as_u64(o.require("duration"), "duration");
  if (s.duration < 1) fail("duration must be >= 1");

  s.topology = parse_topology(o.require("topology"));

  if (const json* monitors = o.find("monitors")) {
    for (std::size_t i = 0; i < as_array(*monitors, "monitors").size(); ++i) {
      const std::string path = "monitors[" + std::to_string(i) + "]";
      Obj m((*monitors)[i], path);
      ScenarioMonitor sm;
      sm.name = as_string(m.require("name"), path + ".name");
      sm.attachment = as_string(m.require("attachment"), path + ".attachment");
      sm.watched_range = as_string(m.require("watched_range"), path + ".watched_range");
      if (const json* v = m.find("bucket_width")) sm.bucket_width = as_u64(*v, path + ".bucket_width");
      if (const json* v = m.find("window")) sm.window = as_u64(*v, path + ".window");
      if (const json* v = m.find("threshold")) sm.threshold = as_u64(*v, path + ".threshold");
      if (const json* v = m.find("report_period"))
        sm.report_period = as_u64(*v, path + ".report_period");
      m.done();
      if (sm.bucket_width < 1) fail(path + ".bucket_width must be >= 1");
      if (sm.report_period < 1) fail(path + ".report_period must be >= 1");
      s.monitors.push_back(std::move(sm));
    }
  }

  if (const json* det = o.find("detection")) {
    Obj d(*det, "detection");
    if (const json* v = d.find("mode")) s.detection.mode = as_string(*v, "detection.mode");
    if (const json* v = d.find("global_threshold"))
      s.detection.global_threshold = as_u64(*v, "detection.global_threshold");
    d.done();
    if (s.detection.mode != "centralized" && s.detection.mode != "distributed")
      fail("detection.mode must be 'centralized' or 'distributed'");
  }

  if (const json* dc = o.find("datacenter")) {
    Obj d(*dc, "datacenter");
    ScenarioDatacenter sd;
    sd.node = as_string(d.require("node"), "datacenter.node");
    if (const json* v = d.find("query_service_rate"))
      sd.query_service_rate = as_u32(*v, "datacenter.query_service_rate");
    d.done();
    if (sd.query_service_rate < 1) fail("datacenter.query_service_rate must be >= 1");
    s.datacenter = std::move(sd);
  }

  if (const json* hp = o.find("honeypot")) {
    Obj h(*hp, "honeypot");
    ScenarioHoneypot sh;
    if (const json* v = h.find("name")) sh.name = as_string(*v, "honeypot.name");
    sh.node = as_string(h.require("node"), "honeypot.node");
    if (const json* files = h.find("entrap_files")) {
      for (std::size_t i = 0; i < as_array(*files, "honeypot.entrap_files").size(); ++i) {
        const std::string path = "honeypot.entrap_files[" + std::to_string(i) + "]";
        Obj f((*files)[i], path);
        ScenarioEntrapFile ef;
        ef.selector = as_u32(f.require("selector"), path + ".selector");
        ef.name = as_string(f.require("name"), path + ".name");
        f.done();
        if (ef.selector == 0) fail(path + ".selector 0 is reserved");
        sh.entrap_files.push_back(std::move(ef));
      }
    }
    if (const json* v = h.find("bandwidth_cap"))
      sh.bandwidth_cap = as_u32(*v, "honeypot.bandwidth_cap");
    if (const json* v = h.find("trigger_delay"))
      sh.trigger_delay = as_u64(*v, "honeypot.trigger_delay");
    if (const json* v = h.find("deceive_responses"))
      sh.deceive_responses = as_bool(*v, "honeypot.deceive_responses");
    h.done();
    s.honeypot = std::move(sh);
  }

  if (const json* bn = o.find("botnet")) {
    Obj b(*bn, "botnet");
    ScenarioBotnet sb;
    sb.candidates = as_string_array(b.require("candidates"), "botnet.candidates");
    if (const json* v = b.find("vulnerability_prob"))
      sb.vulnerability_prob = as_double(*v, "botnet.vulnerability_prob");
    if (const json* v = b.find("scan_rate")) sb.scan_rate = as_u32(*v, "botnet.scan_rate");
    if (const json* v = b.find("scan_start")) sb.scan_start = as_u64(*v, "botnet.scan_start");
    if (const json* v = b.find("establish_at"))
      sb.establish_at = as_u64(*v, "botnet.establish_at");
    sb.cnc = as_string(b.require("cnc"), "botnet.cnc");
    sb.botmaster = as_string(b.require("botmaster"), "botnet.botmaster");
    if (const json* v = b.find("poll_interval"))
      sb.poll_interval = as_u64(*v, "botnet.poll_interval");
    if (const json* v = b.find("ddns_name")) sb.ddns_name = as_string(*v, "botnet.ddns_name");
    if (const json* v = b.find("static_ip")) sb.static_ip = as_string(*v, "botnet.static_ip");
    if (const json* cmds = b.find("commands")) {
      for (std::size_t i = 0; i < as_array(*cmds, "botnet.commands").size(); ++i)
        sb.commands.push_back(
            parse_command((*cmds)[i], "botnet.commands[" + std::to_string(i) + "]"));
    }
    b.done();
    if (sb.vulnerability_prob < 0.0 || sb.vulnerability_prob > 1.0)
      fail("botnet.vulnerability_prob must be in [0,1]");
    if (sb.scan_rate < 1) fail("botnet.scan_rate must be >= 1");
    if (sb.poll_interval < 1) fail("botnet.poll_interval must be >= 1");
    if (sb.candidates.empty()) fail("botnet.candidates must not be empty");
    s.botnet = std::move(sb);
  }

  if (const json* lg = o.find("legit")) {
    for (std::size_t i = 0; i < as_array(*lg, "legit").size(); ++i) {
      const std::string path = "legit[" + std::to_string(i) + "]";
      Obj g((*lg)[i], path);
      ScenarioLegit sl;
      sl.hosts = as_string_array(g.require("hosts"), path + ".hosts");
      sl.rate = as_double(g.require("rate"), path + ".rate");
      sl.dst_pool = as_string_array(g.require("dst_pool"), path + ".dst_pool");
      if (const json* v = g.find("size")) sl.size = as_u32(*v, path + ".size");
      g.done();
      if (sl.rate < 0.0) fail(path + ".rate must be >= 0");
      if (sl.rate > 0.0 && sl.dst_pool.empty()) fail(path + ".dst_pool must not be empty");
      s.legit.push_back(std::move(sl));
    }
  }

  if (const json* pv = o.find("prevention")) {
    Obj p(*pv, "prevention");
    ScenarioPrevention sp;
    sp.agent = as_string(p.require("agent"), "prevention.agent");
    if (const json* v = p.find("infiltrate_at"))
      sp.infiltrate_at = as_u64(*v, "prevention.infiltrate_at");
    if (const json* v = p.find("shutdown_at"))
      sp.shutdown_at = as_u64(*v, "prevention.shutdown_at");
    p.done();
    s.prevention = std::move(sp);
  }

  if (const json* bl = o.find("baselines")) {
    Obj b(*bl, "baselines");
    if (const json* v = b.find("ppm")) s.baselines.ppm = as_bool(*v, "baselines.ppm");
    if (const json* v = b.find("p")) s.baselines.p = as_double(*v, "baselines.p");
    b.done();
    if (s.baselines.ppm && (s.baselines.p <= 0.0 || s.baselines.p > 1.0))
      fail("baselines.p must be in (0,1] when ppm is on");
  }

  if (const json* tr = o.find("trace")) {
    Obj t(*tr, "trace");
    if (const json* v = t.find("window_back")) s.trace.window_back = as_u64(*v, "trace.window_back");
    if (const json* v = t.find("collect_timeout"))
      s.trace.collect_timeout = as_u64(*v, "trace.collect_timeout");
    t.done();
  }

  if (const json* qs = o.find("queries")) {
    for (std::size_t i = 0; i < as_array(*qs, "queries").size(); ++i) {
      const std::string path = "queries[" + std::to_string(i) + "]";
      Obj q((*qs)[i], path);
      ScenarioQuery sq;
      sq.at = as_u64(q.require("at"), path + ".at");
      if (const json* v = q.find("lane")) sq.lane = as_string(*v, path + ".lane");
      sq.monitor = as_string(q.require("monitor"), path + ".monitor");
      if (const json* v = q.find("from")) sq.from = as_u64(*v, path + ".from");
      if (const json* v = q.find("to")) sq.to = as_u64(*v, path + ".to");
      q.done();
      if (sq.lane != "private" && sq.lane != "public")
        fail(path + ".lane must be 'private' or 'public'");
      s.queries.push_back(std::move(sq));
    }
  }

  if (const json* v = o.find("victim")) s.victim = as_string(*v, "victim");
  o.done();
  return s;
}

// Cross-reference pass. Building the real topology here keeps loading
// and simulation on one code path, so anything that loads also builds.
void validate(const Scenario& s) {
  Topology topo;
  try {
    topo = build_scenario_topology(s);
  } catch (const SimError& e) {
    if (e.code() == Errc::ValidationError) throw;
    fail(std::string("topology: ") + e.what());
  }

  auto need_host = [&](const std::string& name, const std::string& what) {
    const NodeId id = topo.node_by_name(name);
    if (id == kNoNode) fail(what + ": unknown node '" + name + "'");
    if (topo.node(id).kind != NodeKind::Host) fail(what + ": '" + name + "' must be a host");
    return id;
  };
  auto need_node = [&](const std::string& name, const std::string& what) {
    const NodeId id = topo.node_by_name(name);
    if (id == kNoNode) fail(what + ": unknown node '" + name + "'");
    return id;
  };
  auto resolve_addr = [&](const std::string& text, const std::string& what) -> Address {
    const NodeId id = topo.node_by_name(text);
    if (id != kNoNode) return topo.node(id).addr;
    try {
      return parse_address(text);
    } catch (const SimError&) {
      fail(what + ": '" + text + "' is neither a node nor an address");
    }
  };

  std::set<std::string> monitor_names;
  for (std::size_t i = 0; i < s.monitors.size(); ++i) {
    const ScenarioMonitor& m = s.monitors[i];
    const std::string path = "monitors[" + std::to_string(i) + "]";
    need_node(m.attachment, path + ".attachment");
    parse_cidr(m.watched_range, path + ".watched_range");
    if (!monitor_names.insert(m.name).second)
      fail(path + ": monitor name '" + m.name + "' reused");
  }
  if (!s.monitors.empty() && !s.datacenter)
    fail("monitors are declared but there is no datacenter to report to");
  if (s.detection.mode == "centralized" && s.monitors.size() > 1) {
    for (const ScenarioMonitor& m : s.monitors)
      if (m.bucket_width != s.monitors.front().bucket_width)
        fail("centralized detection needs equal bucket_width across monitors");
  }
  if (s.datacenter) need_node(s.datacenter->node, "datacenter.node");

  Address honeypot_addr{};
  if (s.honeypot) {
    need_host(s.honeypot->node, "honeypot.node");
    honeypot_addr = topo.node(topo.node_by_name(s.honeypot->node)).addr;
    std::set<std::uint32_t> sel;
    for (const ScenarioEntrapFile& f : s.honeypot->entrap_files)
      if (!sel.insert(f.selector).second)
        fail("honeypot.entrap_files: selector " + std::to_string(f.selector) + " reused");
  }

  if (s.botnet) {
    const ScenarioBotnet& b = *s.botnet;
    std::set<std::string> cands;
    for (const std::string& c : b.candidates) {
      need_host(c, "botnet.candidates");
      if (!cands.insert(c).second) fail("botnet.candidates: '" + c + "' listed twice");
    }
    need_host(b.cnc, "botnet.cnc");
    need_host(b.botmaster, "botnet.botmaster");
    for (std::size_t i = 0; i < b.commands.size(); ++i) {
      const ScenarioCommand& c = b.commands[i];
      const std::string path = "botnet.commands[" + std::to_string(i) + "]";
      resolve_addr(c.target, path + ".target");
      if (!c.amplifier.empty()) {
        const Subnet amp = parse_cidr(c.amplifier, path + ".amplifier");
        bool found = false;
        for (const SubnetDecl& sd : topo.subnets())
          if (sd.subnet == amp) found = true;
        if (!found) fail(path + ".amplifier: no declared subnet " + c.amplifier);
      }
    }
  }

  for (std::size_t i = 0; i < s.legit.size(); ++i) {
    const ScenarioLegit& g = s.legit[i];
    const std::string path = "legit[" + std::to_string(i) + "]";
    for (const std::string& h : g.hosts) need_host(h, path + ".hosts");
    for (const std::string& d : g.dst_pool) {
      const Address a = resolve_addr(d, path + ".dst_pool");
      // A honeypot with ordinary callers would stop being evidence.
      if (s.honeypot && a == honeypot_addr)
        fail(path + ".dst_pool contains the honeypot address");
    }
  }

  if (s.prevention) {
    if (!s.botnet) fail("prevention without a botnet has nothing to infiltrate");
    need_host(s.prevention->agent, "prevention.agent");
  }

  for (std::size_t i = 0; i < s.queries.size(); ++i) {
    const ScenarioQuery& q = s.queries[i];
    const std::string path = "queries[" + std::to_string(i) + "]";
    if (!monitor_names.count(q.monitor))
      fail(path + ".monitor: unknown monitor '" + q.monitor + "'");
    if (q.from > q.to) fail(path + ": from > to");
    if (!s.datacenter) fail(path + ": queries need a datacenter");
  }

  if (!s.victim.empty()) need_node(s.victim, "victim");
}

json command_to_json(const ScenarioCommand& c) {
  json j;
  j["at"] = c.at;
  j["flood"] = c.flood;
  j["target"] = c.target;
  j["rate"] = c.rate;
  j["duration"] = c.duration;
  j["spoof"] = c.spoof;
  j["size"] = c.size;
  j["selector"] = c.selector;
  if (!c.amplifier.empty()) j["amplifier"] = c.amplifier;
  return j;
}

}  // namespace

Topology build_scenario_topology(const Scenario& s) {
  const ScenarioTopology& t = s.topology;

  std::set<std::string> names;
  for (const ScenarioNode& n : t.nodes)
    if (!names.insert(n.name).second)
      throw SimError(Errc::DuplicateNodeId, "node name '" + n.name + "' reused");

  // Address plan: explicit first, then subnet members by host number,
  // then a flat pool for the rest. All passes walk declaration order.
  std::map<std::string, Address> plan;
  std::set<std::uint32_t> taken;
  auto claim = [&](const std::string& name, Address a) {
    if (!taken.insert(a.value).second)
      throw SimError(Errc::AddressCollision, "address " + format_address(a) + " assigned twice");
    plan[name] = a;
  };

  for (const ScenarioNode& n : t.nodes)
    if (!n.addr.empty()) claim(n.name, parse_address(n.addr));

  std::vector<Subnet> parsed_subnets;
  for (const ScenarioSubnet& sn : t.subnets) {
    const Subnet sub = parse_cidr(sn.cidr, "topology.subnets");
    parsed_subnets.push_back(sub);
    taken.insert(sub.broadcast().value);
    std::uint32_t host = 1;
    for (const std::string& m : sn.members) {
      if (!names.count(m)) fail("topology.subnets: unknown member '" + m + "'");
      auto it = plan.find(m);
      if (it != plan.end()) {
        if (!sub.contains(it->second))
          fail("topology.subnets: member '" + m + "' address outside " + sn.cidr);
        continue;
      }
      Address cand{sub.prefix | host};
      while (taken.count(cand.value) || cand == sub.broadcast()) cand.value = sub.prefix | ++host;
      claim(m, cand);
      ++host;
    }
  }

  std::uint32_t pool = (172u << 24) | (16u << 16);
  for (const ScenarioNode& n : t.nodes) {
    if (plan.count(n.name)) continue;
    Address cand{pool + 1};
    while (taken.count(cand.value)) ++cand.value;
    pool = cand.value;
    claim(n.name, cand);
  }

  Topology topo;
  for (const ScenarioNode& n : t.nodes)
    topo.add_node(n.name, n.kind == "router" ? NodeKind::Router : NodeKind::Host, plan[n.name]);

  for (const ScenarioLink& l : t.links) {
    const NodeId a = topo.node_by_name(l.a);
    const NodeId b = topo.node_by_name(l.b);
    if (a == kNoNode) fail("topology.links: unknown endpoint '" + l.a + "'");
    if (b == kNoNode) fail("topology.links: unknown endpoint '" + l.b + "'");
    topo.add_link(a, b, l.capacity, l.latency);
  }

  for (std::size_t i = 0; i < t.subnets.size(); ++i) {
    const ScenarioSubnet& sn = t.subnets[i];
    const NodeId gw = topo.node_by_name(sn.gateway);
    if (gw == kNoNode) fail("topology.subnets: unknown gateway '" + sn.gateway + "'");
    std::vector<NodeId> members;
    for (const std::string& m : sn.members) members.push_back(topo.node_by_name(m));
    topo.add_subnet(parsed_subnets[i], gw, std::move(members));
  }
  return topo;
}

Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SimError(Errc::ParseError, e.what());
  }
  Scenario s = parse_document(doc);
  validate(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError(Errc::ParseError, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string scenario_to_json_text(const Scenario& s) {
  json j;
  j["schema"] = s.schema;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["duration"] = s.duration;

  json nodes = json::array();
  for (const ScenarioNode& n : s.topology.nodes) {
    json jn;
    jn["name"] = n.name;
    jn["kind"] = n.kind;
    if (!n.addr.empty()) jn["addr"] = n.addr;
    nodes.push_back(jn);
  }
  json links = json::array();
  for (const ScenarioLink& l : s.topology.links)
    links.push_back({{"a", l.a}, {"b", l.b}, {"capacity", l.capacity}, {"latency", l.latency}});
  json subnets = json::array();
  for (const ScenarioSubnet& sn : s.topology.subnets)
    subnets.push_back({{"cidr", sn.cidr}, {"gateway", sn.gateway}, {"members", sn.members}});
  j["topology"] = {{"nodes", nodes}, {"links", links}, {"subnets", subnets}};

  json monitors = json::array();
  for (const ScenarioMonitor& m : s.monitors)
    monitors.push_back({{"name", m.name},
                        {"attachment", m.attachment},
                        {"watched_range", m.watched_range},
                        {"bucket_width", m.bucket_width},
                        {"window", m.window},
                        {"threshold", m.threshold},
                        {"report_period", m.report_period}});
  j["monitors"] = monitors;

  j["detection"] = {{"mode", s.detection.mode},
                    {"global_threshold", s.detection.global_threshold}};

  if (s.datacenter)
    j["datacenter"] = {{"node", s.datacenter->node},
                       {"query_service_rate", s.datacenter->query_service_rate}};

  if (s.honeypot) {
    json files = json::array();
    for (const ScenarioEntrapFile& f : s.honeypot->entrap_files)
      files.push_back({{"selector", f.selector}, {"name", f.name}});
    j["honeypot"] = {{"name", s.honeypot->name},
                     {"node", s.honeypot->node},
                     {"entrap_files", files},
                     {"bandwidth_cap", s.honeypot->bandwidth_cap},
                     {"trigger_delay", s.honeypot->trigger_delay},
                     {"deceive_responses", s.honeypot->deceive_responses}};
  }

  if (s.botnet) {
    const ScenarioBotnet& b = *s.botnet;
    json jb;
    jb["candidates"] = b.candidates;
    jb["vulnerability_prob"] = b.vulnerability_prob;
    jb["scan_rate"] = b.scan_rate;
    jb["scan_start"] = b.scan_start;
    if (b.establish_at) jb["establish_at"] = *b.establish_at;
    jb["cnc"] = b.cnc;
    jb["botmaster"] = b.botmaster;
    jb["poll_interval"] = b.poll_interval;
    if (!b.ddns_name.empty()) jb["ddns_name"] = b.ddns_name;
    if (!b.static_ip.empty()) jb["static_ip"] = b.static_ip;
    json cmds = json::array();
    for (const ScenarioCommand& c : b.commands) cmds.push_back(command_to_json(c));
    jb["commands"] = cmds;
    j["botnet"] = jb;
  }

  json legit = json::array();
  for (const ScenarioLegit& g : s.legit)
    legit.push_back(
        {{"hosts", g.hosts}, {"rate", g.rate}, {"dst_pool", g.dst_pool}, {"size", g.size}});
  j["legit"] = legit;

  if (s.prevention) {
    json jp;
    jp["agent"] = s.prevention->agent;
    if (s.prevention->infiltrate_at) jp["infiltrate_at"] = *s.prevention->infiltrate_at;
    if (s.prevention->shutdown_at) jp["shutdown_at"] = *s.prevention->shutdown_at;
    j["prevention"] = jp;
  }

  j["baselines"] = {{"ppm", s.baselines.ppm}, {"p", s.baselines.p}};
  j["trace"] = {{"window_back", s.trace.window_back},
                {"collect_timeout", s.trace.collect_timeout}};

  json queries = json::array();
  for (const ScenarioQuery& q : s.queries)
    queries.push_back(
        {{"at", q.at}, {"lane", q.lane}, {"monitor", q.monitor}, {"from", q.from}, {"to", q.to}});
  j["queries"] = queries;

  j["victim"] = s.victim;
  return j.dump(2) + "\n";
}

}  // namespace itmsim
