#pragma once

// Independent reference implementations used to check simulator output.
// Everything here is written against different primitives than the
// library under test: std::mt19937_64 for randomness and plain linear
// scans for search, so agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "itmsim/address.hpp"
#include "itmsim/monitor.hpp"
#include "itmsim/types.hpp"

namespace oracle {

// Hop counts from `from` over an undirected adjacency list; -1 unreachable.
inline std::vector<int> bfs_hops(const std::vector<std::vector<int>>& adj, int from) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(from)] = 0;
  q.push(from);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

// Bucket starts whose Incoming-into-range packet count strictly exceeds
// the threshold. Pure linear scan over the raw stream.
inline std::set<itmsim::SimTime> bucket_trips(const std::vector<itmsim::PacketRecord>& stream,
                                              const itmsim::Subnet& range, itmsim::SimTime width,
                                              std::uint64_t threshold) {
  std::map<itmsim::SimTime, std::uint64_t> counts;
  for (const itmsim::PacketRecord& r : stream) {
    if (r.direction != itmsim::Direction::Incoming) continue;
    if (!range.contains(r.dst)) continue;
    ++counts[(r.seen_at / width) * width];
  }
  std::set<itmsim::SimTime> trips;
  for (const auto& [start, n] : counts)
    if (n > threshold) trips.insert(start);
  return trips;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

// Monte-Carlo estimate of how many of n packets end up carrying a mark
// after d independent marking chances at probability p each.
inline MeanSd mc_marked(std::uint64_t n, int d, double p, int reps, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::bernoulli_distribution coin(p);
  std::vector<double> totals;
  totals.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    std::uint64_t marked = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      bool hit = false;
      for (int hop = 0; hop < d && !hit; ++hop) hit = coin(g);
      if (hit) ++marked;
    }
    totals.push_back(static_cast<double>(marked));
  }
  MeanSd out;
  for (double t : totals) out.mean += t;
  out.mean /= static_cast<double>(reps);
  double var = 0.0;
  for (double t : totals) var += (t - out.mean) * (t - out.mean);
  out.sd = std::sqrt(var / static_cast<double>(reps > 1 ? reps - 1 : 1));
  return out;
}

// Standard deviation of a Binomial(n, p) count.
inline double binom_sigma(double n, double p) { return std::sqrt(n * p * (1.0 - p)); }

struct CollectStats {
  double mean_complete = 0.0;     // packets until every distance 0..d-1 was seen
  double mean_weakest_hop = 0.0;  // packets until distance d-1 first appeared
};

// Simulates the overwrite-marking walk along a chain of d routers,
// farthest router first, nearest last. A router marks with probability
// p (resetting distance to 0); every later router increments a carried
// mark. Returns mean packets until full reconstruction and until the
// rarest mark (the farthest router, final distance d-1) first shows up.
inline CollectStats mc_collect(int d, double p, int trials, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::bernoulli_distribution coin(p);
  CollectStats out;
  for (int t = 0; t < trials; ++t) {
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    int have = 0;
    std::uint64_t packets = 0;
    std::uint64_t weakest_at = 0;
    while (have < d) {
      ++packets;
      int dist = -1;
      for (int hop = 0; hop < d; ++hop) {
        if (coin(g))
          dist = 0;
        else if (dist >= 0)
          ++dist;
      }
      if (dist >= 0 && !seen[static_cast<std::size_t>(dist)]) {
        seen[static_cast<std::size_t>(dist)] = true;
        ++have;
        if (dist == d - 1) weakest_at = packets;
      }
      if (packets > 5'000'000) break;  // runaway guard, never expected
    }
    out.mean_complete += static_cast<double>(packets);
    out.mean_weakest_hop += static_cast<double>(weakest_at);
  }
  out.mean_complete /= static_cast<double>(trials);
  out.mean_weakest_hop /= static_cast<double>(trials);
  return out;
}

// Classic packets-to-reconstruct bound for marking probability p over
// path length d: ln(d) / (p (1-p)^{d-1}).
inline double marking_bound(int d, double p) {
  return std::log(static_cast<double>(d)) / (p * std::pow(1.0 - p, d - 1));
}

// Mean of a sample, for 3-sigma comparisons against analytic values.
inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace oracle
