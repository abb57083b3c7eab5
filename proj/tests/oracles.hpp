// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

// Brute-force reference implementations of every metric, kept deliberately
// naive and independent of the production code paths: raw record scans,
// explicit parent walks instead of cached depths and jump tables, subset
// enumeration instead of incremental grouping. Test-only.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ngsim/event_log.hpp"
#include "ngsim/metrics.hpp"
#include "ngsim/mining.hpp"

namespace ngsim::oracle {

struct FlatBlock {
  BlockId id = kNoBlock;
  BlockId parent = kNoBlock;
  BlockKind kind = BlockKind::Genesis;
  MinerId miner = kNoMiner;
  double created = 0.0;
  std::uint32_t txs = 0;
};

// Raw-map view of a log: blocks by id, plus the untouched record list.
struct FlatLog {
  std::map<BlockId, FlatBlock> blocks;
  std::vector<LogRecord> records;
  std::uint32_t n_nodes = 0;
  double end_time = 0.0;

  static FlatLog build(const EventLog& log, std::uint32_t n_nodes);

  std::vector<BlockId> chain_of(BlockId tip) const;  // genesis..tip
  std::uint64_t weight_of(BlockId id, bool count_all_kinds) const;
  bool is_descendant(BlockId maybe_descendant, BlockId ancestor) const;
  bool protocol_is_ng() const;
  BlockId tip_of(std::uint32_t node, double t) const;  // replay by scan
  double first_learn(std::uint32_t node, BlockId block) const;
  BlockId main_leaf() const;
};

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

double percentile_sort_index(std::vector<double> samples, double delta);

}  // namespace ngsim::oracle
