#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "builders.hpp"
#include "itmsim/errors.hpp"
#include "itmsim/ppm.hpp"
#include "itmsim/traceback.hpp"
#include "oracles.hpp"

using namespace itmsim;

namespace {

TraceEvent make_event(int serial, const std::string& initiator, SimTime at) {
  TraceEvent ev;
  ev.serial = serial;
  ev.initiator = initiator;
  ev.initiated_at = at;
  return ev;
}

bool reaches(const std::set<std::pair<NodeId, NodeId>>& edges, NodeId from, NodeId to) {
  std::set<NodeId> seen{from};
  std::queue<NodeId> q;
  q.push(from);
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    if (v == to) return true;
    for (const auto& e : edges)
      if (e.first == v && seen.insert(e.second).second) q.push(e.second);
  }
  return false;
}

}  // namespace

TEST_CASE("trace database rejects serial reuse and filters queries by all terms") {
  TraceDatabase db;
  db.open(make_event(1, "hp1", 5));
  db.open(make_event(2, "m2", 9));
  CHECK_THROWS_AS(db.open(make_event(1, "dup", 1)), SimError);
  CHECK_THROWS_AS(db.at(3), SimError);
  CHECK(db.at(2).initiator == "m2");
  CHECK(db.size() == 2);

  CHECK(db.query({}).size() == 2);
  TraceDatabase::Terms t;
  t.serial = 1;
  REQUIRE(db.query(t).size() == 1);
  CHECK(db.query(t)[0]->initiator == "hp1");

  TraceDatabase::Terms byname;
  byname.initiator = "m2";
  REQUIRE(db.query(byname).size() == 1);
  CHECK(db.query(byname)[0]->serial == 2);

  TraceDatabase::Terms range;
  range.time_range = {6, 10};
  REQUIRE(db.query(range).size() == 1);
  CHECK(db.query(range)[0]->serial == 2);

  TraceDatabase::Terms both;
  both.serial = 2;
  both.initiator = "hp1";  // contradictory terms match nothing
  CHECK(db.query(both).empty());
}

TEST_CASE("console: serial assignment, feedback quorum, idempotent conclusion") {
  TraceConsole con(7);
  TraceRequest r;
  r.itm_name = "hp1";
  r.flow_signature.dst = parse_address("10.1.0.10");
  r.flow_signature.flood_type = FloodType::TcpSyn;

  const auto d = con.receive_request(r, 3, {0, 1}, 10);
  CHECK(d.instruction.serial == 1);
  CHECK(d.instruction.issued_at == 10);
  CHECK(d.agents == std::vector<int>{0, 1});
  CHECK(con.db().has(1));
  CHECK(con.last_serial() == 1);

  AgentFeedback f0;
  f0.serial = 1;
  f0.agent_id = 0;
  CHECK(!con.collect(f0));  // one of two
  AgentFeedback f1;
  f1.serial = 1;
  f1.agent_id = 1;
  CHECK(con.collect(f1));  // quorum reached

  const RebuiltPath& rp = con.conclude(1, 20);
  CHECK(rp.untraceable);  // nobody matched anything
  CHECK(rp.concluded_at == 20);
  CHECK(con.concluded(1));
  const RebuiltPath& again = con.conclude(1, 99);
  CHECK(again.concluded_at == 20);  // first conclusion sticks

  CHECK(con.receive_request(r, 3, {0}, 11).instruction.serial == 2);
}

TEST_CASE("agent matching splits directions and disqualifies the flooded address owner") {
  Topology topo;
  const NodeId bot = topo.add_node("bot", NodeKind::Host, parse_address("10.7.0.1"));
  const NodeId victim = topo.add_node("victim", NodeKind::Host, parse_address("10.1.0.10"));
  const NodeId r2 = topo.add_node("r2", NodeKind::Router, parse_address("10.0.1.2"));
  const NodeId r = topo.add_node("r", NodeKind::Router, parse_address("10.0.1.1"));
  const LinkId l1 = topo.add_link(bot, r, 0, 1);
  const LinkId l2 = topo.add_link(r, r2, 0, 1);
  const LinkId l3 = topo.add_link(victim, r, 0, 1);

  Monitor agent(0, "s0", r, parse_subnet("10.250.0.0/16"), 10, 100, 5, 50);
  Packet flood;
  flood.dst = parse_address("10.1.0.10");
  flood.type = FloodType::TcpSyn;
  agent.record_traffic(flood, Direction::Incoming, l1, 10);   // from the bot side
  agent.record_traffic(flood, Direction::Outgoing, l2, 11);   // toward the honeypot
  agent.record_traffic(flood, Direction::Incoming, l3, 12);   // bounced off the victim
  Packet noise = flood;
  noise.type = FloodType::Udp;
  agent.record_traffic(noise, Direction::Incoming, l1, 10);   // wrong type
  Packet other;
  other.dst = parse_address("10.2.0.2");
  other.type = FloodType::TcpSyn;
  agent.record_traffic(other, Direction::Incoming, l1, 11);   // wrong dst
  agent.record_traffic(flood, Direction::Incoming, l1, 30);   // outside the window

  TraceInstruction ins;
  ins.serial = 1;
  ins.flow_signature = FlowSignature{flood.dst, FloodType::TcpSyn, 5, 15};
  ins.issued_at = 16;

  const AgentFeedback fb = agent_analyze(agent, ins, topo, 20);
  CHECK(fb.agent_node == r);
  CHECK(!fb.window_expired);
  CHECK(fb.matched_records.size() == 3);
  CHECK(fb.first_seen == 10);
  CHECK(fb.incoming_match);
  CHECK(fb.outgoing_match);

  std::set<NodeId> up;
  for (const LinkObservation& o : fb.upstream_links) up.insert(o.peer);
  CHECK(up == std::set<NodeId>{bot, victim});
  REQUIRE(fb.downstream_links.size() == 1);
  CHECK(fb.downstream_links[0].peer == r2);
  CHECK(!fb.downstream_links[0].host_facing);
  // The victim faces the agent as a host but owns the flooded address.
  CHECK(fb.source_candidates == std::vector<NodeId>{bot});

  const AgentFeedback stale = agent_analyze(agent, ins, topo, 200);
  CHECK(stale.window_expired);
  CHECK(stale.matched_records.empty());
  CHECK(!stale.incoming_match);
}

TEST_CASE("rebuild: exact needs an unbroken directed chain to the initiator") {
  const NodeId bot = 0, r = 1, hp = 2;

  AgentFeedback fb;
  fb.serial = 4;
  fb.agent_node = r;
  fb.incoming_match = true;
  fb.outgoing_match = true;
  fb.upstream_links = {LinkObservation{0, bot, true}};
  fb.downstream_links = {LinkObservation{1, hp, true}};
  fb.source_candidates = {bot};

  const RebuiltPath exact = rebuild_path(4, hp, {fb}, 30);
  CHECK(!exact.untraceable);
  CHECK(exact.confidence == Confidence::Exact);
  CHECK(exact.sources == std::vector<NodeId>{bot});
  CHECK(exact.edges ==
        std::vector<std::pair<NodeId, NodeId>>{{bot, r}, {r, hp}});
  CHECK(exact.concluded_at == 30);

  AgentFeedback broken = fb;
  broken.downstream_links.clear();  // chain toward the initiator missing
  broken.outgoing_match = false;
  const RebuiltPath partial = rebuild_path(5, hp, {broken}, 31);
  CHECK(partial.confidence == Confidence::Partial);
  CHECK(partial.sources == std::vector<NodeId>{bot});

  const RebuiltPath empty = rebuild_path(6, hp, {}, 32);
  CHECK(empty.untraceable);
  CHECK(empty.confidence == Confidence::Partial);
  CHECK(empty.edges.empty());
  CHECK(empty.sources.empty());
}

TEST_CASE("rebuild: a host with a positively matching agent is a relay, not a source") {
  const NodeId bot = 0, m = 1, r = 2, hp = 3;

  AgentFeedback at_r;
  at_r.agent_node = r;
  at_r.incoming_match = true;
  at_r.outgoing_match = true;
  at_r.upstream_links = {LinkObservation{0, m, true}};
  at_r.downstream_links = {LinkObservation{1, hp, true}};
  at_r.source_candidates = {m};

  AgentFeedback at_m;
  at_m.agent_node = m;
  at_m.incoming_match = true;
  at_m.upstream_links = {LinkObservation{2, bot, true}};
  at_m.source_candidates = {bot};

  const RebuiltPath rp = rebuild_path(1, hp, {at_r, at_m}, 40);
  CHECK(rp.sources == std::vector<NodeId>{bot});
  CHECK(rp.confidence == Confidence::Exact);  // bot -> m -> r -> hp
}

TEST_CASE("rebuild fuzz: agrees with a brute-force second implementation") {
  std::mt19937_64 g(321);
  for (int rep = 0; rep < 150; ++rep) {
    std::uniform_int_distribution<NodeId> node(0, 9);
    std::vector<AgentFeedback> feedback;
    const int agents = std::uniform_int_distribution<int>(1, 4)(g);
    LinkId next_link = 0;
    for (int a = 0; a < agents; ++a) {
      AgentFeedback fb;
      fb.agent_node = node(g);
      const int ups = std::uniform_int_distribution<int>(0, 2)(g);
      const int downs = std::uniform_int_distribution<int>(0, 2)(g);
      for (int u = 0; u < ups; ++u) {
        NodeId peer = node(g);
        while (peer == fb.agent_node) peer = node(g);
        const bool host = std::bernoulli_distribution(0.6)(g);
        fb.upstream_links.push_back({next_link++, peer, host});
        if (host) fb.source_candidates.push_back(peer);
      }
      for (int d = 0; d < downs; ++d) {
        NodeId peer = node(g);
        while (peer == fb.agent_node) peer = node(g);
        fb.downstream_links.push_back({next_link++, peer, std::bernoulli_distribution(0.6)(g)});
      }
      fb.incoming_match = !fb.upstream_links.empty();
      fb.outgoing_match = !fb.downstream_links.empty();
      std::sort(fb.source_candidates.begin(), fb.source_candidates.end());
      feedback.push_back(fb);
    }
    const NodeId initiator = node(g);

    const RebuiltPath rp = rebuild_path(rep, initiator, feedback, 50);

    std::set<std::pair<NodeId, NodeId>> edges;
    std::set<NodeId> positive;
    for (const AgentFeedback& fb : feedback) {
      if (fb.incoming_match) positive.insert(fb.agent_node);
      for (const LinkObservation& o : fb.upstream_links) edges.insert({o.peer, fb.agent_node});
      for (const LinkObservation& o : fb.downstream_links) edges.insert({fb.agent_node, o.peer});
    }
    std::set<NodeId> sources;
    for (const AgentFeedback& fb : feedback)
      if (fb.incoming_match)
        for (const NodeId c : fb.source_candidates)
          if (!positive.count(c)) sources.insert(c);

    CHECK(rp.untraceable == edges.empty());
    CHECK(std::set<std::pair<NodeId, NodeId>>(rp.edges.begin(), rp.edges.end()) == edges);
    CHECK(std::set<NodeId>(rp.sources.begin(), rp.sources.end()) == sources);
    if (edges.empty()) continue;
    bool exact = !sources.empty();
    for (const NodeId s : sources) exact = exact && reaches(edges, s, initiator);
    CHECK((rp.confidence == Confidence::Exact) == exact);
  }
}

TEST_CASE("an unreachable console loses the request and counts it") {
  using nlohmann::json;
  json doc;
  doc["schema"] = 1;
  doc["name"] = "island";
  doc["seed"] = 5;
  doc["duration"] = 120;
  doc["topology"] = {
      {"nodes", json::array({builders::jnode("rA", "router"), builders::jnode("rB", "router"),
                             builders::jnode("honeypot", "host", "10.9.0.9"),
                             builders::jnode("bot", "host", "10.7.0.11"),
                             builders::jnode("cnc", "host", "10.4.0.4"),
                             builders::jnode("master", "host", "10.4.0.5"),
                             builders::jnode("dchost", "host", "10.3.0.3")})},
      {"links", json::array({builders::jlink("honeypot", "rA"), builders::jlink("bot", "rA"),
                             builders::jlink("cnc", "rA"), builders::jlink("master", "rA"),
                             builders::jlink("dchost", "rB")})}};
  doc["monitors"] = json::array({builders::jmonitor("mB", "rB", "10.200.0.0/16", 1000000)});
  doc["detection"] = {{"mode", "distributed"}, {"global_threshold", 0}};
  doc["datacenter"] = {{"node", "dchost"}};
  doc["honeypot"] = {{"node", "honeypot"},
                     {"entrap_files", json::array({{{"selector", 7}, {"name", "lure"}}})}};
  doc["botnet"] = {{"candidates", json::array({"bot"})},
                   {"scan_rate", 4},
                   {"scan_start", 2},
                   {"cnc", "cnc"},
                   {"botmaster", "master"},
                   {"commands", json::array({{{"at", 10},
                                              {"flood", "tcp_syn"},
                                              {"target", "honeypot"},
                                              {"rate", 1},
                                              {"duration", 3},
                                              {"selector", 7}}})}};
  doc["trace"] = {{"window_back", 20}};
  doc["victim"] = "honeypot";

  const json rep = builders::run_report_doc(doc);
  CHECK(builders::conserved(rep));
  CHECK(rep.at("traffic").at("attack_injected").get<std::uint64_t>() == 3);
  CHECK(rep.at("honeypot").at("captures").get<std::uint64_t>() == 3);
  CHECK(rep.at("honeypot").at("requests_emitted").get<std::uint64_t>() == 1);
  CHECK(rep.at("honeypot").at("console_unreachable").get<std::uint64_t>() >= 1);
  CHECK(rep.at("honeypot").at("lost_requests").get<std::uint64_t>() >= 1);
  CHECK(rep.at("traces").empty());
  CHECK(rep.at("detection").at("blocks").empty());
}

TEST_CASE("ppm marking distances decay geometrically, router identity is truthful") {
  const int d = 5;
  const double p = 0.3;
  std::vector<Address> chain;  // traversal order, farthest router first
  for (int i = 0; i < d; ++i) chain.push_back(parse_address("10.0.1." + std::to_string(i + 1)));

  Rng rng(17);
  const int n = 20000;
  std::vector<int> by_distance(static_cast<std::size_t>(d), 0);
  int unmarked = 0;
  for (int i = 0; i < n; ++i) {
    Packet pkt;
    for (const Address& router : chain) ppm_mark(pkt, router, p, rng);
    if (!pkt.mark) {
      ++unmarked;
      continue;
    }
    REQUIRE(pkt.mark->distance < static_cast<std::uint32_t>(d));
    ++by_distance[pkt.mark->distance];
    // distance k means k routers came after the marker
    CHECK(pkt.mark->router ==
          chain[static_cast<std::size_t>(d) - 1 - pkt.mark->distance]);
  }

  const double q_none = std::pow(1.0 - p, d);
  CHECK(std::abs(unmarked - n * q_none) < 3.5 * oracle::binom_sigma(n, q_none));
  for (int k = 0; k < d; ++k) {
    const double pk = p * std::pow(1.0 - p, k);
    CHECK(std::abs(by_distance[static_cast<std::size_t>(k)] - n * pk) <
          3.5 * oracle::binom_sigma(n, pk));
  }
}

TEST_CASE("ppm reconstruction: majority vote, small-address ties, completion point") {
  const Address a = parse_address("10.0.1.1");
  const Address b = parse_address("10.0.1.2");

  auto obs = [](SimTime t, std::optional<PpmMark> m) { return PpmObservation{t, m}; };

  SUBCASE("majority and tie-break") {
    std::vector<PpmObservation> o = {
        obs(1, PpmMark{b, 0}), obs(2, PpmMark{a, 0}), obs(3, PpmMark{b, 0}),
        obs(4, PpmMark{a, 1}), obs(5, PpmMark{b, 1})};  // distance 1 tied
    const PpmReconstruction r = ppm_reconstruct(o, 2);
    CHECK(r.complete);
    REQUIRE(r.path.size() == 2);
    CHECK(r.path[0] == b);  // two b's beat one a
    CHECK(r.path[1] == a);  // tie resolves to the smaller address
    CHECK(r.packets_consumed == 4);  // distance 1 first appears on the 4th
    CHECK(r.completed_at == 4);
    CHECK(r.marked_seen == 5);
  }

  SUBCASE("incomplete when a distance never shows") {
    std::vector<PpmObservation> o = {obs(1, PpmMark{a, 0}), obs(2, std::nullopt),
                                     obs(3, PpmMark{b, 2})};
    const PpmReconstruction r = ppm_reconstruct(o, 3);
    CHECK(!r.complete);
    CHECK(r.packets_consumed == 3);  // everything scanned, never done
    CHECK(r.path.size() == 1);       // stops at the first missing distance
  }

  SUBCASE("zero expected depth is trivially complete") {
    const PpmReconstruction r = ppm_reconstruct({obs(1, std::nullopt)}, 0);
    CHECK(r.complete);
    CHECK(r.packets_consumed == 0);
    CHECK(r.path.empty());
  }

  SUBCASE("marks beyond the expected depth never complete the path") {
    std::vector<PpmObservation> o = {obs(1, PpmMark{a, 5}), obs(2, PpmMark{b, 7})};
    const PpmReconstruction r = ppm_reconstruct(o, 1);
    CHECK(!r.complete);
  }
}

TEST_CASE("ppm end to end on a chain recovers the exact router order") {
  const int d = 4;
  std::vector<Address> chain;
  for (int i = 0; i < d; ++i) chain.push_back(parse_address("10.0.2." + std::to_string(i + 1)));

  Rng rng(23);
  PpmCollector col(0.15);
  for (int i = 0; i < 2000; ++i) {
    Packet pkt;
    for (const Address& router : chain) ppm_mark(pkt, router, 0.15, rng);
    col.observe(pkt, static_cast<SimTime>(i));
  }

  const PpmReconstruction r = ppm_reconstruct(col.observations(), d);
  REQUIRE(r.complete);
  REQUIRE(r.path.size() == d);
  for (int k = 0; k < d; ++k)
    CHECK(r.path[static_cast<std::size_t>(k)] ==
          chain[static_cast<std::size_t>(d) - 1 - k]);
  CHECK(r.marked_seen == col.marked_count());
  CHECK(r.packets_consumed <= col.observations().size());
}
