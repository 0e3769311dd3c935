#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "itmsim/datacenter.hpp"
#include "itmsim/errors.hpp"
#include "itmsim/monitor.hpp"
#include "oracles.hpp"

using namespace itmsim;

namespace {

Packet make_packet(const std::string& dst, FloodType t, std::uint32_t size = 64) {
  Packet p;
  p.dst = parse_address(dst);
  p.type = t;
  p.size = size;
  return p;
}

}  // namespace

TEST_CASE("buckets count only incoming traffic addressed into the watched range") {
  Monitor m(0, "m", 0, parse_subnet("10.1.0.0/16"), 10, 1000, 5, 50);

  m.record_traffic(make_packet("10.1.0.10", FloodType::TcpSyn), Direction::Incoming, 0, 3);
  m.record_traffic(make_packet("10.1.4.2", FloodType::Udp, 100), Direction::Incoming, 0, 7);
  m.record_traffic(make_packet("10.2.0.1", FloodType::TcpSyn), Direction::Incoming, 0, 8);  // range miss
  m.record_traffic(make_packet("10.1.0.10", FloodType::TcpSyn), Direction::Outgoing, 0, 9);  // wrong way
  m.record_traffic(make_packet("10.1.0.10", FloodType::Legit), Direction::Incoming, 0, 14);

  CHECK(m.observed_total() == 5);  // the window sees everything

  const Bucket b0 = m.close_bucket(0);
  CHECK(b0.count == 2);
  CHECK(b0.bytes == 164);
  CHECK(b0.count_by_type[static_cast<std::size_t>(FloodType::TcpSyn)] == 1);
  CHECK(b0.count_by_type[static_cast<std::size_t>(FloodType::Udp)] == 1);

  const Bucket b1 = m.close_bucket(10);
  CHECK(b1.count == 1);
  const Bucket quiet = m.close_bucket(500);  // quiet interval materializes empty
  CHECK(quiet.start == 500);
  CHECK(quiet.count == 0);

  CHECK(!m.over_threshold(b0));  // 2 <= 5
  Bucket fake;
  fake.count = 5;
  CHECK(!m.over_threshold(fake));  // equality does not trip
  fake.count = 6;
  CHECK(m.over_threshold(fake));

  CHECK_THROWS_AS(Monitor(1, "bad", 0, parse_subnet("10.1.0.0/16"), 0, 100, 5, 50), SimError);
}

TEST_CASE("randomized traces: bucket alarms agree with a linear-scan oracle") {
  std::mt19937_64 g(505);
  for (int rep = 0; rep < 200; ++rep) {
    const auto width = static_cast<SimTime>(std::uniform_int_distribution<int>(1, 20)(g));
    const auto threshold = static_cast<std::uint64_t>(std::uniform_int_distribution<int>(0, 30)(g));
    const Subnet range = parse_subnet("10.1.0.0/16");
    Monitor m(0, "m", 0, range, width, 100000, threshold, 50);

    const int packets = std::uniform_int_distribution<int>(0, 300)(g);
    std::vector<SimTime> times;
    for (int i = 0; i < packets; ++i)
      times.push_back(static_cast<SimTime>(std::uniform_int_distribution<int>(0, 199)(g)));
    std::sort(times.begin(), times.end());  // arrivals reach a monitor in time order

    std::vector<PacketRecord> stream;
    for (const SimTime t : times) {
      Packet p;
      const bool in_range = std::bernoulli_distribution(0.5)(g);
      p.dst = in_range ? Address{parse_address("10.1.0.0").value +
                                 std::uniform_int_distribution<std::uint32_t>(0, 65535)(g)}
                       : parse_address("172.16.0.1");
      p.type = std::bernoulli_distribution(0.5)(g) ? FloodType::TcpSyn : FloodType::Udp;
      const Direction d =
          std::bernoulli_distribution(0.8)(g) ? Direction::Incoming : Direction::Outgoing;
      m.record_traffic(p, d, 0, t);
      stream.push_back(PacketRecord{t, p.src, p.dst, p.type, p.size, d, 0});
    }

    std::set<SimTime> tripped;
    for (SimTime start = 0; start < 200; start += width)
      if (m.over_threshold(m.close_bucket(start))) tripped.insert(start);

    CHECK(tripped == oracle::bucket_trips(stream, range, width, threshold));
  }
}

TEST_CASE("blocked monitors observe nothing and status moves forward only") {
  Monitor m(0, "m", 0, parse_subnet("10.1.0.0/16"), 10, 100, 5, 50);
  m.record_traffic(make_packet("10.1.0.1", FloodType::Udp), Direction::Incoming, 0, 1);
  CHECK(m.status() == MonitorStatus::Active);

  m.set_status(MonitorStatus::Blocked);
  CHECK(m.status() == MonitorStatus::Blocked);
  m.record_traffic(make_packet("10.1.0.1", FloodType::Udp), Direction::Incoming, 0, 2);
  CHECK(m.observed_total() == 1);
  CHECK(m.close_bucket(0).count == 1);

  m.set_status(MonitorStatus::Active);  // never walks back
  CHECK(m.status() == MonitorStatus::Blocked);

  Monitor n(1, "n", 0, parse_subnet("10.1.0.0/16"), 10, 100, 5, 50);
  n.set_status(MonitorStatus::Attacked);
  CHECK(n.status() == MonitorStatus::Attacked);
}

TEST_CASE("sliding window matches flows and reports honest expiry") {
  Monitor m(0, "m", 0, parse_subnet("10.1.0.0/16"), 10, 50, 5, 50);
  const Address dst = parse_address("10.1.0.10");

  for (SimTime t = 0; t <= 100; t += 10)
    m.record_traffic(make_packet("10.1.0.10", FloodType::TcpSyn), Direction::Incoming, 3, t);
  m.record_traffic(make_packet("10.1.0.10", FloodType::Udp), Direction::Incoming, 3, 100);
  m.record_traffic(make_packet("10.1.0.99", FloodType::TcpSyn), Direction::Incoming, 3, 100);

  // At now=100 the window floor is 50; older records are gone.
  const auto hits = m.match_window(dst, FloodType::TcpSyn, 0, 100, 100);
  REQUIRE(hits.size() == 6);  // t = 50..100
  for (const PacketRecord& r : hits) {
    CHECK(r.seen_at >= 50);
    CHECK(r.dst == dst);
    CHECK(r.flood_type == FloodType::TcpSyn);
    CHECK(r.link == 3);
  }

  CHECK(m.match_window(dst, FloodType::TcpSyn, 60, 70, 100).size() == 2);
  CHECK(m.match_window(dst, FloodType::TcpSyn, 0, 30, 100).empty());
  CHECK(m.window_expired(30, 100));
  CHECK(!m.window_expired(50, 100));  // floor itself still present
  CHECK(!m.window_expired(90, 100));
}

TEST_CASE("unsent buckets hand off exactly once") {
  Monitor m(0, "m", 0, parse_subnet("10.1.0.0/16"), 10, 1000, 5, 50);
  for (const SimTime t : {1, 11, 21})
    m.record_traffic(make_packet("10.1.0.1", FloodType::Udp), Direction::Incoming, 0, t);
  m.close_bucket(0);
  m.close_bucket(10);
  m.close_bucket(20);

  CHECK(m.unsent_buckets().size() == 3);
  m.mark_submitted(20);
  const auto rest = m.unsent_buckets();
  REQUIRE(rest.size() == 1);
  CHECK(rest[0].start == 20);
  m.mark_submitted(10);  // never moves backwards
  CHECK(m.unsent_buckets().size() == 1);
  m.mark_submitted(30);
  CHECK(m.unsent_buckets().empty());
}

TEST_CASE("data center registration, rejection, and idempotent blocking") {
  DataCenter dc(0, 100);
  RegisteredMonitor m1{1, "m1", 5, parse_subnet("10.1.0.0/16"), 10, 10};
  RegisteredMonitor m2{2, "m2", 6, parse_subnet("10.2.0.0/16"), 20, 10};
  dc.register_monitor(m1);
  dc.register_monitor(m2);
  CHECK_THROWS_AS(dc.register_monitor(m1), SimError);
  CHECK_THROWS_AS(dc.info(9), SimError);
  CHECK(dc.registered_ids() == std::vector<int>{1, 2});

  Bucket b;
  b.start = 0;
  b.count = 50;
  CHECK(dc.accept_logs(1, {b}, 5) == SubmitResult::Accepted);
  CHECK(dc.accept_logs(9, {b}, 5) == SubmitResult::RejectedUnregistered);
  CHECK(dc.rejected_unregistered() == 1);

  const auto d1 = dc.block(1, 6);
  CHECK(d1.fresh);
  CHECK(d1.attachment == 5);
  CHECK(d1.range == parse_subnet("10.1.0.0/16"));
  CHECK(dc.published_status(1) == MonitorStatus::Blocked);

  const auto d2 = dc.block(1, 7);
  CHECK(!d2.fresh);
  CHECK(dc.already_blocked_repeats() == 1);

  CHECK(dc.accept_logs(1, {b}, 8) == SubmitResult::RejectedBlocked);
  CHECK(dc.rejected_blocked() == 1);
  CHECK(dc.published_status(2) == MonitorStatus::Active);
}

TEST_CASE("centralized detection needs every active monitor and trips strictly") {
  DataCenter dc(0, 25);
  dc.register_monitor(RegisteredMonitor{1, "m1", 5, parse_subnet("10.1.0.0/16"), 10, 10});
  dc.register_monitor(RegisteredMonitor{2, "m2", 6, parse_subnet("10.1.0.0/16"), 20, 10});

  auto bucket = [](SimTime start, std::uint64_t count) {
    Bucket b;
    b.start = start;
    b.count = count;
    return b;
  };

  dc.accept_logs(1, {bucket(0, 15)}, 1);
  CHECK(dc.detect_centralized(1).empty());  // interval incomplete without m2

  dc.accept_logs(2, {bucket(0, 11)}, 2);
  const auto hit = dc.detect_centralized(2);  // 26 > 25, only m1 over its own bar
  CHECK(hit == std::vector<int>{1});
  CHECK(dc.alarm_events().size() == 1);
  CHECK(dc.published_status(1) == MonitorStatus::Attacked);
  CHECK(dc.published_status(2) == MonitorStatus::Active);

  CHECK(dc.detect_centralized(3).empty());  // evaluated intervals never re-fire

  dc.accept_logs(1, {bucket(10, 13)}, 11);
  dc.accept_logs(2, {bucket(10, 12)}, 11);
  CHECK(dc.detect_centralized(11).empty());  // aggregate == threshold stays quiet
  CHECK(dc.alarm_events().size() == 1);

  // Once a monitor is blocked, completeness is judged without it.
  dc.block(2, 12);
  dc.accept_logs(1, {bucket(20, 40)}, 21);
  const auto solo = dc.detect_centralized(21);
  CHECK(solo == std::vector<int>{1});
  CHECK(dc.alarm_events().size() == 2);
}

TEST_CASE("query service: private lane drains first, queued queries wait a tick") {
  DataCenter dc(0, 100);
  dc.register_monitor(RegisteredMonitor{1, "m1", 5, parse_subnet("10.1.0.0/16"), 10, 10});
  Bucket b;
  b.start = 10;
  b.count = 4;
  dc.accept_logs(1, {b}, 11);

  CHECK_THROWS_AS(dc.enqueue_query(Query{1, QueryLane::Public, 99, 0, 50, 5}), SimError);

  dc.enqueue_query(Query{1, QueryLane::Public, 1, 0, 50, 5});
  dc.enqueue_query(Query{2, QueryLane::Private, 1, 0, 5, 5});
  CHECK(dc.service_queries(4, 5).empty());  // same-tick queries are not yet visible

  const auto first = dc.service_queries(1, 6);
  REQUIRE(first.size() == 1);
  CHECK(first[0].query_id == 2);  // private beats the earlier public query
  CHECK(first[0].slice.empty());  // bucket 10 outside [0,5]

  const auto second = dc.service_queries(1, 7);
  REQUIRE(second.size() == 1);
  CHECK(second[0].query_id == 1);
  REQUIRE(second[0].slice.size() == 1);
  CHECK(second[0].slice[0].count == 4);
  CHECK(second[0].status == MonitorStatus::Active);

  CHECK(dc.pending_queries() == 0);
  CHECK(dc.published_reports().size() == 2);
}
