#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "itmsim/address.hpp"
#include "itmsim/packet.hpp"
#include "itmsim/types.hpp"

namespace itmsim {

enum class Direction : std::uint8_t { Incoming, Outgoing };

enum class MonitorStatus : std::uint8_t { Active, Attacked, Blocked };

inline const char* monitor_status_name(MonitorStatus s) {
  switch (s) {
    case MonitorStatus::Active: return "active";
    case MonitorStatus::Attacked: return "attacked";
    case MonitorStatus::Blocked: return "blocked";
  }
  return "?";
}

struct PacketRecord {
  SimTime seen_at = 0;
  Address src{};
  Address dst{};
  FloodType flood_type = FloodType::Legit;
  std::uint32_t size = 0;
  Direction direction = Direction::Incoming;
  LinkId link = kNoLink;
};

// Fixed-width detection bucket. Counts cover only Incoming records whose
// dst falls in the watched range; the sliding window keeps everything.
struct Bucket {
  SimTime start = 0;
  std::array<std::uint64_t, 7> count_by_type{};  // FloodType index
  std::uint64_t count = 0;
  std::uint64_t bytes = 0;
};

// One Internet threat monitor: watches all traffic through its
// attachment node, buckets the slice addressed into its range, and keeps
// a sliding window of full records for trace agents.
class Monitor {
 public:
  Monitor(int id, std::string name, NodeId attachment, Subnet watched_range, SimTime bucket_width,
          SimTime window, std::uint64_t threshold, SimTime report_period);

  /// Observes one packet transiting the attachment node. Blocked
  /// monitors observe nothing. Evicts window records older than W.
  void record_traffic(const Packet& p, Direction d, LinkId link, SimTime now);

  /// Closes the bucket covering [bucket_start, bucket_start+width) and
  /// returns it. In distributed mode the caller checks the threshold.
  Bucket close_bucket(SimTime bucket_start);

  /// Strict comparison: a bucket trips only when count > threshold.
  bool over_threshold(const Bucket& b) const { return b.count > threshold_; }

  /// Buckets not yet handed to the data center; caller marks them sent.
  std::vector<Bucket> unsent_buckets() const;
  void mark_submitted(SimTime up_to_start);

  void set_status(MonitorStatus s);  // forward-only, never reversed

  /// Window records matching (dst, flood_type) inside [from, to].
  std::vector<PacketRecord> match_window(Address dst, FloodType t, SimTime from, SimTime to,
                                         SimTime now);
  /// True when records up to `to` have already been evicted.
  bool window_expired(SimTime to, SimTime now) const;

  int id() const { return id_; }
  const std::string& name() const { return name_; }
  NodeId attachment() const { return attachment_; }
  const Subnet& watched_range() const { return watched_range_; }
  MonitorStatus status() const { return status_; }
  SimTime bucket_width() const { return bucket_width_; }
  SimTime report_period() const { return report_period_; }
  std::uint64_t threshold() const { return threshold_; }
  SimTime window() const { return window_; }
  std::uint64_t observed_total() const { return observed_total_; }
  const std::deque<PacketRecord>& window_records() const { return records_; }
  const std::map<SimTime, Bucket>& buckets() const { return buckets_; }

 private:
  void evict(SimTime now);

  int id_;
  std::string name_;
  NodeId attachment_;
  Subnet watched_range_;
  SimTime bucket_width_;
  SimTime window_;
  std::uint64_t threshold_;
  SimTime report_period_;
  MonitorStatus status_ = MonitorStatus::Active;
  std::deque<PacketRecord> records_;     // sliding window, seen_at ascending
  std::map<SimTime, Bucket> buckets_;    // keyed by bucket start
  SimTime submitted_up_to_ = 0;          // bucket starts below this were sent
  std::uint64_t observed_total_ = 0;
};

}  // namespace itmsim
