// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ngsim/block_tree.hpp"
#include "ngsim/event_log.hpp"
#include "ngsim/mining.hpp"

namespace ngsim {

struct MetricsOptions {
  double epsilon = 0.9;          // fraction of nodes that must agree
  double delta = 0.9;            // percentile for delay metrics
  double warmup_fraction = 0.0;  // simulated-time prefix excluded from metrics
  double grid_step_sec = 1.0;    // consensus-delay sampling grid spacing
};

struct MetricsReport {
  double consensus_delay = 0.0;
  double fairness = 0.0;
  double mining_power_utilization = 1.0;
  std::optional<double> time_to_prune;  // empty when nothing was pruned
  double time_to_win = 0.0;
  double throughput_tps = 0.0;

  std::uint64_t blocks_total = 0;
  std::uint64_t pow_total = 0;
  std::uint64_t pow_main = 0;
  std::uint64_t main_chain_txs = 0;
  std::uint64_t prune_samples = 0;
  double window_start = 0.0;
  double window_end = 0.0;

  std::string to_text() const;  // flat key-value block
  static std::string csv_header();
  std::string to_csv_row() const;
};

// Reconstruction of per-node history from an event log: global block tree
// from the generate records and per-node tip timelines from the replay rule
// (generate adopts, receive adopts iff it extends the tip, switch adopts).
// All metrics are pure functions of this state.
class LogAnalysis {
 public:
  LogAnalysis(const EventLog& log, std::uint32_t n_nodes);

  const BlockTree& tree() const { return tree_; }
  Protocol protocol() const { return protocol_; }
  double end_time() const { return end_time_; }
  std::uint32_t n_nodes() const { return n_nodes_; }

  // Final main chain under the metric convention: maximal weight, ties to the
  // earliest-created then lowest-id leaf.
  BlockId main_leaf() const;

  BlockId tip_at(std::uint32_t node, double t) const;

  // Smallest look-back delta at which an epsilon fraction of nodes report an
  // identical main-chain prefix of all transitions timestamped <= t - delta.
  // Cut points are block creation times (and t itself).
  double point_consensus_delay(double t, double epsilon) const;

  double consensus_delay(const MetricsOptions& opts) const;
  double fairness(const std::vector<MinerPower>& powers,
                  const MetricsOptions& opts) const;
  double mining_power_utilization(const MetricsOptions& opts) const;
  std::optional<double> time_to_prune(const MetricsOptions& opts) const;
  double time_to_win(const MetricsOptions& opts) const;
  double throughput_tps(const MetricsOptions& opts) const;

  MetricsReport full_report(const std::vector<MinerPower>& powers,
                            const MetricsOptions& opts) const;

  double window_start(const MetricsOptions& opts) const {
    return opts.warmup_fraction * end_time_;
  }
  double first_learn(std::uint32_t node, BlockId block) const;  // +inf if never

 private:
  bool full_agreement(const std::vector<BlockId>& tips, std::size_t needed) const;
  bool agree_at_cut(const std::vector<BlockId>& tips, double cut,
                    std::size_t needed) const;
  std::size_t agreement_threshold(double epsilon) const;

  std::uint32_t n_nodes_;
  Protocol protocol_ = Protocol::Bitcoin;
  BlockTree tree_;
  double end_time_ = 0.0;
  std::vector<std::vector<std::pair<double, BlockId>>> timelines_;
  std::vector<double> candidates_;    // sorted unique block creation times
  std::vector<double> record_times_;  // sorted unique record timestamps
  std::vector<std::pair<std::uint64_t, double>> learn_;  // (node<<40|block, t)
};

// Operation-shaped wrappers over LogAnalysis for one-shot use.
double point_consensus_delay(const EventLog& log, std::uint32_t n_nodes,
                             double t, double epsilon);
double consensus_delay(const EventLog& log, std::uint32_t n_nodes,
                       const MetricsOptions& opts);
double fairness(const EventLog& log, std::uint32_t n_nodes,
                const std::vector<MinerPower>& powers,
                const MetricsOptions& opts = {});
double mining_power_utilization(const EventLog& log, std::uint32_t n_nodes,
                                const MetricsOptions& opts = {});
std::optional<double> time_to_prune(const EventLog& log, std::uint32_t n_nodes,
                                    const MetricsOptions& opts = {});
double time_to_win(const EventLog& log, std::uint32_t n_nodes,
                   const MetricsOptions& opts = {});

// Nearest-rank percentile; delta in (0, 1].
double nearest_rank_percentile(std::vector<double> samples, double delta);

}  // namespace ngsim
