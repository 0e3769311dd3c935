#include "itmsim/ppm.hpp"

#include <map>

namespace itmsim {

void ppm_mark(Packet& p, Address router_addr, double prob, Rng& rng) {
  if (rng.bernoulli(prob)) {
    p.mark = PpmMark{router_addr, 0};
  } else if (p.mark) {
    ++p.mark->distance;
  }
}

PpmReconstruction ppm_reconstruct(const std::vector<PpmObservation>& observations,
                                  std::uint32_t expected_depth) {
  PpmReconstruction out;
  // counts[k][addr] = how often addr was reported at distance k
  std::map<std::uint32_t, std::map<std::uint32_t, std::uint64_t>> counts;
  std::uint32_t witnessed = 0;

  std::uint64_t processed = 0;
  for (const PpmObservation& o : observations) {
    ++processed;
    if (o.mark) {
      ++out.marked_seen;
      auto& slot = counts[o.mark->distance];
      if (o.mark->distance < expected_depth && slot.empty()) ++witnessed;
      ++slot[o.mark->router.value];
    }
    if (!out.complete && witnessed == expected_depth) {
      out.complete = true;
      out.packets_consumed = processed;
      out.completed_at = o.seen_at;
    }
  }
  if (!out.complete) out.packets_consumed = processed;
  if (expected_depth == 0) {
    out.complete = true;
    out.packets_consumed = 0;
  }

  // Majority vote per position over everything seen; ties break to the
  // smaller address so the result is seed-stable.
  out.path.reserve(expected_depth);
  for (std::uint32_t k = 0; k < expected_depth; ++k) {
    auto it = counts.find(k);
    if (it == counts.end() || it->second.empty()) break;
    std::uint32_t best = 0;
    std::uint64_t best_n = 0;
    for (const auto& [addr, n] : it->second) {
      if (n > best_n) {
        best = addr;
        best_n = n;
      }
    }
    out.path.push_back(Address{best});
  }
  return out;
}

}  // namespace itmsim
