// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ngsim/config.hpp"
#include "ngsim/event_log.hpp"
#include "ngsim/ledger.hpp"
#include "ngsim/metrics.hpp"
#include "ngsim/mining.hpp"
#include "ngsim/netsim.hpp"
#include "ngsim/nodes.hpp"

namespace ngsim {

struct RunResult {
  EventLog log;
  MetricsReport report;
  LedgerReport ledger;  // meaningful for NG runs
  std::vector<MinerPower> powers;
  std::uint64_t blocks_generated = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t duplicates_dropped = 0;
  std::uint64_t invalid_dropped = 0;
  BlockId final_main_leaf = kNoBlock;
  std::vector<BlockId> final_tips;  // per node, at quiescence
};

// One deterministic discrete-event run, single-threaded, driven entirely by
// the event queue. Generation stops once run_length blocks of the counted
// kind exist; the run then drains all in-flight messages.
class Simulation : public INodeHost {
 public:
  explicit Simulation(const SimConfig& cfg);

  RunResult run();

  const Topology& topology() const { return topology_; }
  const std::vector<MinerPower>& powers() const { return powers_; }
  const NodeBase& node(std::uint32_t i) const { return *nodes_[i]; }

  // INodeHost
  BlockId allocate_block_id() override { return next_block_id_++; }
  void broadcast(std::uint32_t node, const Block& b, double now) override;
  void relay(std::uint32_t node, std::uint32_t from, const Block& b,
             double now) override;
  void send_to_neighbor(std::uint32_t node, std::uint32_t ordinal,
                        const Block& b, double now) override;
  void arm_microblock_timer(std::uint32_t node, double at,
                            std::uint64_t token) override;
  bool consume_budget(BlockKind kind) override;
  std::uint32_t neighbor_count(std::uint32_t node) const override {
    return topology_.degree(node);
  }

 private:
  void send(std::uint32_t from, std::uint32_t to, std::size_t edge_index,
            const Block& b, double now);
  void verify_log_replay(double now);

  SimConfig cfg_;
  LatencyHistogram histogram_;
  Topology topology_;
  std::vector<MinerPower> powers_;
  std::unique_ptr<MineSchedule> schedule_;
  EventQueue queue_;
  EventLog log_;
  std::vector<std::unique_ptr<NodeBase>> nodes_;
  std::vector<Block> blocks_;  // id-indexed store for in-flight payloads
  std::vector<double> link_busy_until_;  // serialized queueing, per direction
  std::vector<std::size_t> link_offset_;
  BlockId next_block_id_ = kGenesisId + 1;
  std::uint64_t budget_left_ = 0;
  std::uint64_t messages_delivered_ = 0;
  std::vector<BlockId> replay_tips_;
  std::size_t replay_cursor_ = 0;
};

LatencyHistogram load_histogram(const std::string& path_or_builtin);

RunResult run_simulation(const SimConfig& cfg,
                         const std::string& log_path = "");

// Sweeps over block frequency or size, re-running the base config per axis
// value and seed. With constant_payload the per-block transaction count is
// rescaled so the configured payload rate stays fixed across the axis.
enum class SweepAxis : std::uint8_t { BlockFrequency, BlockSize };

struct SweepSpec {
  SimConfig base;
  SweepAxis axis = SweepAxis::BlockFrequency;
  std::vector<double> values;  // intervals in seconds, or sizes in bytes
  std::vector<std::uint64_t> seeds;
  bool constant_payload = true;
  std::uint32_t max_parallel = 4;
};

struct SweepCell {
  double axis_value = 0.0;
  std::string metric;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::uint32_t samples = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<std::string> failures;  // "<axis value>/<seed>: error"

  std::string to_csv() const;
  const SweepCell* find(double axis_value, const std::string& metric) const;
};

SimConfig config_for_axis_value(const SweepSpec& spec, double value);
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace ngsim
