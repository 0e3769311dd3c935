#include "itmsim/datacenter.hpp"

#include <algorithm>

#include "itmsim/errors.hpp"

namespace itmsim {

DataCenter::DataCenter(NodeId node, std::uint64_t global_threshold)
    : node_(node), global_threshold_(global_threshold) {}

void DataCenter::register_monitor(const RegisteredMonitor& m) {
  if (monitors_.count(m.id))
    throw SimError(Errc::DuplicateNodeId, "monitor id " + std::to_string(m.id) + " reused");
  monitors_[m.id] = m;
  status_[m.id] = MonitorStatus::Active;
}

bool DataCenter::registered(int monitor_id) const { return monitors_.count(monitor_id) != 0; }

const RegisteredMonitor& DataCenter::info(int monitor_id) const {
  auto it = monitors_.find(monitor_id);
  if (it == monitors_.end())
    throw SimError(Errc::UnknownMonitor, "monitor " + std::to_string(monitor_id));
  return it->second;
}

SubmitResult DataCenter::accept_logs(int monitor_id, const std::vector<Bucket>& buckets,
                                     SimTime) {
  if (!registered(monitor_id)) {
    ++rejected_unregistered_;
    return SubmitResult::RejectedUnregistered;
  }
  if (blocked(monitor_id)) {
    ++rejected_blocked_;
    return SubmitResult::RejectedBlocked;
  }
  auto& series = collected_logs_[monitor_id];
  for (const Bucket& b : buckets) {
    series.push_back(b);
    intervals_[b.start][monitor_id] = b;
  }
  return SubmitResult::Accepted;
}

std::vector<int> DataCenter::detect_centralized(SimTime now) {
  std::vector<int> attacked;
  for (auto& [start, per_monitor] : intervals_) {
    if (evaluated_.count(start)) continue;
    bool complete = true;
    for (const auto& [id, m] : monitors_) {
      if (!blocked(id) && !per_monitor.count(id)) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;
    evaluated_.insert(start);
    std::uint64_t aggregate = 0;
    for (const auto& [id, b] : per_monitor) aggregate += b.count;
    if (aggregate <= global_threshold_) continue;  // strictly greater trips
    record_alarm(now, aggregate);
    for (const auto& [id, b] : per_monitor) {
      if (blocked(id)) continue;
      if (b.count > monitors_.at(id).threshold) {
        note_attacked(id, now);
        attacked.push_back(id);
      }
    }
  }
  std::sort(attacked.begin(), attacked.end());
  return attacked;
}

void DataCenter::note_attacked(int monitor_id, SimTime) {
  auto it = status_.find(monitor_id);
  if (it == status_.end()) return;
  if (it->second == MonitorStatus::Active) it->second = MonitorStatus::Attacked;
}

DataCenter::BlockDecision DataCenter::block(int monitor_id, SimTime) {
  BlockDecision d;
  d.monitor_id = monitor_id;
  const RegisteredMonitor& m = info(monitor_id);
  d.range = m.watched_range;
  d.attachment = m.attachment;
  if (blocked(monitor_id)) {
    ++already_blocked_repeats_;
    d.fresh = false;
    return d;
  }
  block_list_.insert(monitor_id);
  status_[monitor_id] = MonitorStatus::Blocked;
  d.fresh = true;
  return d;
}

void DataCenter::enqueue_query(const Query& q) {
  if (!registered(q.monitor_id))
    throw SimError(Errc::UnknownMonitor,
                   "query names unknown monitor " + std::to_string(q.monitor_id));
  (q.lane == QueryLane::Private ? private_q_ : public_q_).push_back(q);
}

std::vector<Report> DataCenter::service_queries(std::uint32_t service_rate, SimTime now) {
  std::vector<Report> served;
  auto serve_from = [&](std::deque<Query>& lane) {
    while (served.size() < service_rate && !lane.empty() && lane.front().enqueued_at < now) {
      const Query q = lane.front();
      lane.pop_front();
      Report r;
      r.query_id = q.id;
      r.monitor_id = q.monitor_id;
      r.status = published_status(q.monitor_id);
      r.served_at = now;
      auto logs = collected_logs_.find(q.monitor_id);
      if (logs != collected_logs_.end()) {
        for (const Bucket& b : logs->second)
          if (b.start >= q.from && b.start <= q.to) r.slice.push_back(b);
      }
      service_log_.emplace_back(now, q.lane, q.id);
      published_reports_.push_back(r);
      served.push_back(std::move(r));
    }
  };
  // Private region first, always; the public lane waits until it drains.
  serve_from(private_q_);
  if (private_q_.empty()) serve_from(public_q_);
  return served;
}

MonitorStatus DataCenter::published_status(int monitor_id) const {
  auto it = status_.find(monitor_id);
  if (it == status_.end())
    throw SimError(Errc::UnknownMonitor, "monitor " + std::to_string(monitor_id));
  return it->second;
}

std::vector<int> DataCenter::registered_ids() const {
  std::vector<int> out;
  out.reserve(monitors_.size());
  for (const auto& [id, m] : monitors_) out.push_back(id);
  return out;
}

}  // namespace itmsim
