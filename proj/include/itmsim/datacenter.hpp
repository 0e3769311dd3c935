#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "itmsim/monitor.hpp"

namespace itmsim {

enum class QueryLane : std::uint8_t { Private, Public };

struct Query {
  int id = 0;
  QueryLane lane = QueryLane::Public;
  int monitor_id = 0;
  SimTime from = 0;
  SimTime to = 0;
  SimTime enqueued_at = 0;
};

struct Report {
  int query_id = 0;
  int monitor_id = 0;
  MonitorStatus status = MonitorStatus::Active;
  std::vector<Bucket> slice;
  SimTime served_at = 0;
};

struct RegisteredMonitor {
  int id = 0;
  std::string name;
  NodeId attachment = kNoNode;
  Subnet watched_range{};
  std::uint64_t threshold = 0;
  SimTime bucket_width = 1;
};

enum class SubmitResult : std::uint8_t { Accepted, RejectedBlocked, RejectedUnregistered };

// Data center: collects monitor logs, runs the aggregate detection pass,
// decides blocks, and answers prioritized status queries. One node's
// state machine; transport is the caller's concern.
class DataCenter {
 public:
  DataCenter(NodeId node, std::uint64_t global_threshold);

  void register_monitor(const RegisteredMonitor& m);
  bool registered(int monitor_id) const;
  const RegisteredMonitor& info(int monitor_id) const;

  SubmitResult accept_logs(int monitor_id, const std::vector<Bucket>& buckets, SimTime now);

  /// Centralized pass: evaluates intervals that became complete (every
  /// non-blocked registered monitor submitted that bucket). An interval
  /// alarms when the aggregate count is strictly over the global
  /// threshold; returns the monitors whose own buckets are strictly over
  /// their own thresholds there.
  std::vector<int> detect_centralized(SimTime now);

  /// Distributed-mode notification landed. Marks the monitor Attacked.
  void note_attacked(int monitor_id, SimTime now);

  struct BlockDecision {
    int monitor_id = 0;
    bool fresh = false;  // false when the monitor was already blocked
    Subnet range{};
    NodeId attachment = kNoNode;
  };
  /// Adds to the block list and publishes status Blocked. Idempotent;
  /// repeats only bump a counter.
  BlockDecision block(int monitor_id, SimTime now);
  bool blocked(int monitor_id) const { return block_list_.count(monitor_id) != 0; }

  /// Throws UnknownMonitor for a query naming no registered monitor.
  void enqueue_query(const Query& q);

  /// Serves up to `service_rate` queries enqueued strictly before `now`.
  /// The private lane is drained before the public lane is touched.
  std::vector<Report> service_queries(std::uint32_t service_rate, SimTime now);

  MonitorStatus published_status(int monitor_id) const;

  /// Alarm bookkeeping shared by both detection modes: centralized
  /// appends when an interval trips, distributed when a notice lands.
  void record_alarm(SimTime at, std::uint64_t count) {
    alarm_events_.emplace_back(at, count);
    ++alarms_raised_;
  }
  const std::vector<std::pair<SimTime, std::uint64_t>>& alarm_events() const {
    return alarm_events_;
  }

  NodeId node() const { return node_; }
  std::uint64_t global_threshold() const { return global_threshold_; }
  const std::map<int, std::vector<Bucket>>& collected_logs() const { return collected_logs_; }
  const std::vector<Report>& published_reports() const { return published_reports_; }
  const std::vector<std::tuple<SimTime, QueryLane, int>>& service_log() const {
    return service_log_;
  }
  const std::unordered_set<int>& block_list() const { return block_list_; }
  std::vector<int> registered_ids() const;  // ascending

  std::uint64_t rejected_blocked() const { return rejected_blocked_; }
  std::uint64_t rejected_unregistered() const { return rejected_unregistered_; }
  std::uint64_t already_blocked_repeats() const { return already_blocked_repeats_; }
  std::uint64_t alarms_raised() const { return alarms_raised_; }
  std::uint64_t pending_queries() const { return private_q_.size() + public_q_.size(); }

 private:
  NodeId node_;
  std::uint64_t global_threshold_;
  std::map<int, RegisteredMonitor> monitors_;
  std::map<int, std::vector<Bucket>> collected_logs_;
  std::map<int, MonitorStatus> status_;
  std::unordered_set<int> block_list_;
  std::vector<Report> published_reports_;

  // interval start -> per-monitor bucket, for the centralized pass
  std::map<SimTime, std::map<int, Bucket>> intervals_;
  std::unordered_set<SimTime> evaluated_;

  std::deque<Query> private_q_;
  std::deque<Query> public_q_;
  std::vector<std::tuple<SimTime, QueryLane, int>> service_log_;
  std::vector<std::pair<SimTime, std::uint64_t>> alarm_events_;

  std::uint64_t rejected_blocked_ = 0;
  std::uint64_t rejected_unregistered_ = 0;
  std::uint64_t already_blocked_repeats_ = 0;
  std::uint64_t alarms_raised_ = 0;
};

}  // namespace itmsim
