// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "ngsim/block.hpp"
#include "ngsim/rng.hpp"

namespace ngsim {

// Discrete latency distribution loaded from a plain text file with one
// "latency_seconds probability" pair per line; '#' starts a comment.
struct LatencyHistogram {
  std::vector<std::pair<double, double>> buckets;  // (latency, mass)

  static LatencyHistogram from_file(const std::string& path);
  static LatencyHistogram parse(const std::string& text,
                                const std::string& origin = "<string>");
  // Synthetic log-normal-like shape, median ~100 ms (vantage-point pings).
  static LatencyHistogram default_internet();
  // Heavier effective miner-to-miner delays (worker distribution included),
  // median ~2.5 s.
  static LatencyHistogram miner_effective();

  void validate(const std::string& origin) const;
  double sample(Rng& rng) const;
};

struct Topology {
  std::uint32_t n = 0;
  double bandwidth_bps = 0.0;
  // Neighbor lists sorted ascending; latencies_[u][k] belongs to the edge
  // (u, neighbors_[u][k]) and is symmetric.
  std::vector<std::vector<std::uint32_t>> neighbors;
  std::vector<std::vector<double>> latencies;

  static Topology generate(std::uint32_t n, std::uint32_t min_degree,
                           const LatencyHistogram& histogram,
                           double bandwidth_bps, std::uint64_t seed,
                           std::uint32_t max_attempts = 100);
  static Topology from_edges(
      std::uint32_t n,
      const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges,
      double bandwidth_bps);

  double latency(std::uint32_t u, std::uint32_t v) const;
  std::uint32_t degree(std::uint32_t u) const {
    return static_cast<std::uint32_t>(neighbors[u].size());
  }
  bool connected() const;
  std::uint32_t min_degree() const;
  std::string describe() const;  // adjacency + latency dump for inspection
};

// Link delay for a payload of the given size: propagation latency plus
// serialization at the link bandwidth plus per-byte verification at the
// receiver.
inline double transfer_delay(std::uint64_t size_bytes, double latency_sec,
                             double bandwidth_bps,
                             double verify_sec_per_byte = 0.0) {
  return latency_sec +
         8.0 * static_cast<double>(size_bytes) / bandwidth_bps +
         verify_sec_per_byte * static_cast<double>(size_bytes);
}

enum class EventKind : std::uint8_t { MineTrigger, MicroblockTimer, MessageArrival };

struct SimEvent {
  double time = 0.0;
  std::uint64_t seq = 0;  // FIFO tiebreak at equal timestamps
  EventKind kind = EventKind::MineTrigger;
  std::uint32_t node = 0;  // receiver / timer owner / elected miner
  std::uint32_t from = 0;  // sender, for arrivals
  BlockId block = kNoBlock;
  std::uint64_t token = 0;  // leadership epoch token for timers
};

class EventQueue {
 public:
  void push(SimEvent ev) {
    ev.seq = next_seq_++;
    heap_.push(ev);
  }
  SimEvent pop() {
    SimEvent ev = heap_.top();
    heap_.pop();
    return ev;
  }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

// Pure flooding of one payload from an origin; returns per-node first-arrival
// times (origin gets 0). Used by tests as a propagation oracle surface.
std::vector<double> flood_arrival_times(const Topology& topo,
                                        std::uint32_t origin,
                                        std::uint64_t size_bytes,
                                        double verify_sec_per_byte = 0.0);

}  // namespace ngsim
