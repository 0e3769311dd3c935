#include "itmsim/monitor.hpp"

#include "itmsim/errors.hpp"

namespace itmsim {

Monitor::Monitor(int id, std::string name, NodeId attachment, Subnet watched_range,
                 SimTime bucket_width, SimTime window, std::uint64_t threshold,
                 SimTime report_period)
    : id_(id),
      name_(std::move(name)),
      attachment_(attachment),
      watched_range_(watched_range),
      bucket_width_(bucket_width),
      window_(window),
      threshold_(threshold),
      report_period_(report_period) {
  if (bucket_width_ < 1) throw SimError(Errc::InvalidArgument, "bucket_width must be >= 1");
  if (report_period_ < 1) throw SimError(Errc::InvalidArgument, "report_period must be >= 1");
}

void Monitor::evict(SimTime now) {
  const SimTime floor = now >= window_ ? now - window_ : 0;
  while (!records_.empty() && records_.front().seen_at < floor) records_.pop_front();
}

void Monitor::record_traffic(const Packet& p, Direction d, LinkId link, SimTime now) {
  if (status_ == MonitorStatus::Blocked) return;  // observes nothing once cut off
  evict(now);
  records_.push_back(PacketRecord{now, p.src, p.dst, p.type, p.size, d, link});
  ++observed_total_;
  // Detection buckets cover only traffic addressed into the watched
  // range; the full window above feeds trace matching.
  if (d == Direction::Incoming && watched_range_.contains(p.dst)) {
    const SimTime start = (now / bucket_width_) * bucket_width_;
    Bucket& b = buckets_[start];
    b.start = start;
    ++b.count_by_type[static_cast<std::size_t>(p.type)];
    ++b.count;
    b.bytes += p.size;
  }
}

Bucket Monitor::close_bucket(SimTime bucket_start) {
  Bucket& b = buckets_[bucket_start];  // materializes an empty bucket on quiet intervals
  b.start = bucket_start;
  return b;
}

std::vector<Bucket> Monitor::unsent_buckets() const {
  std::vector<Bucket> out;
  for (const auto& [start, b] : buckets_)
    if (start >= submitted_up_to_) out.push_back(b);
  return out;
}

void Monitor::mark_submitted(SimTime up_to_start) {
  if (up_to_start > submitted_up_to_) submitted_up_to_ = up_to_start;
}

void Monitor::set_status(MonitorStatus s) {
  // Forward-only; a blocked monitor first passes through Attacked so
  // recorded histories always follow Active -> Attacked -> Blocked.
  while (static_cast<int>(status_) < static_cast<int>(s))
    status_ = static_cast<MonitorStatus>(static_cast<int>(status_) + 1);
}

std::vector<PacketRecord> Monitor::match_window(Address dst, FloodType t, SimTime from,
                                                SimTime to, SimTime now) {
  evict(now);
  std::vector<PacketRecord> out;
  for (const PacketRecord& r : records_) {
    if (r.seen_at < from || r.seen_at > to) continue;
    if (r.dst == dst && r.flood_type == t) out.push_back(r);
  }
  return out;
}

bool Monitor::window_expired(SimTime to, SimTime now) const {
  const SimTime floor = now >= window_ ? now - window_ : 0;
  return to < floor;
}

}  // namespace itmsim
