#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "itmsim/packet.hpp"
#include "itmsim/rng.hpp"

namespace itmsim {

/// One probabilistic-marking step at a router: with probability p the
/// mark is overwritten with (router, 0); otherwise an existing mark's
/// distance grows by one.
void ppm_mark(Packet& p, Address router_addr, double prob, Rng& rng);

struct PpmObservation {
  SimTime seen_at = 0;
  std::optional<PpmMark> mark;
};

// Victim-side mark collection over attack packets.
class PpmCollector {
 public:
  explicit PpmCollector(double p) : p_(p) {}

  void observe(const Packet& pkt, SimTime now) {
    observations_.push_back({now, pkt.mark});
    if (pkt.mark) ++marked_;
  }

  double p() const { return p_; }
  const std::vector<PpmObservation>& observations() const { return observations_; }
  std::uint64_t marked_count() const { return marked_; }

 private:
  double p_;
  std::vector<PpmObservation> observations_;
  std::uint64_t marked_ = 0;
};

struct PpmReconstruction {
  bool complete = false;
  // path[k] = router judged to sit k router-hops before the victim,
  // majority vote over all observations, ties to the smaller address.
  std::vector<Address> path;
  // Observations processed until every distance 0..depth-1 was first
  // witnessed; equals observations.size() when never complete.
  std::uint64_t packets_consumed = 0;
  std::uint64_t marked_seen = 0;
  SimTime completed_at = 0;
};

/// Rebuilds the router path from collected marks. The victim cannot know
/// the path depth from the marks alone, so the expected depth is an
/// input supplied by the evaluation layer.
PpmReconstruction ppm_reconstruct(const std::vector<PpmObservation>& observations,
                                  std::uint32_t expected_depth);

}  // namespace itmsim
