// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "ngsim/sim.hpp"

namespace ngsim {

namespace {

constexpr std::uint64_t kTagTopology = 0x746f706fULL;
constexpr std::uint64_t kTagMining = 0x6d696e65ULL;
constexpr std::uint64_t kTagTiebreak = 0x74696562ULL;
constexpr std::uint64_t kTagSkew = 0x736b6577ULL;

}  // namespace

LatencyHistogram load_histogram(const std::string& path_or_builtin) {
  if (path_or_builtin.empty() || path_or_builtin == "builtin:default")
    return LatencyHistogram::default_internet();
  if (path_or_builtin == "builtin:miner")
    return LatencyHistogram::miner_effective();
  return LatencyHistogram::from_file(resolve_config_path(path_or_builtin));
}

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  histogram_ = load_histogram(cfg_.latency_histogram_path);
  topology_ = Topology::generate(cfg_.n_nodes, cfg_.min_degree, histogram_,
                                 cfg_.bandwidth_bits_per_sec, cfg_.seed);
  powers_ = assign_powers(cfg_.n_nodes, cfg_.power_exponent);
  schedule_ = std::make_unique<MineSchedule>(
      cfg_.protocol == Protocol::Bitcoin ? cfg_.block_interval_sec
                                         : cfg_.key_interval_sec,
      Rng::derive(cfg_.seed, kTagMining), powers_);
  budget_left_ = cfg_.run_length_blocks;

  Rng skew_rng(Rng::derive(cfg_.seed, kTagSkew));
  for (std::uint32_t i = 0; i < cfg_.n_nodes; ++i) {
    std::uint64_t tb = Rng::derive(cfg_.seed, kTagTiebreak, i);
    std::unique_ptr<NodeBase> node;
    if (cfg_.protocol == Protocol::Bitcoin) {
      node = std::make_unique<BitcoinNode>(i, cfg_, *this, log_, tb);
    } else if (cfg_.adversary_node == static_cast<std::int32_t>(i) &&
               cfg_.adversary_fork_count >= 2) {
      node = std::make_unique<ForkingLeaderAdversary>(
          i, cfg_, *this, log_, tb, cfg_.adversary_fork_count);
    } else {
      node = std::make_unique<NgNode>(i, cfg_, *this, log_, tb);
    }
    if (cfg_.max_clock_skew_sec > 0.0)
      node->set_clock_skew((2.0 * skew_rng.uniform01() - 1.0) *
                           cfg_.max_clock_skew_sec);
    nodes_.push_back(std::move(node));
  }

  // Per-direction link cursors for the serialized queueing mode.
  link_offset_.resize(cfg_.n_nodes + 1, 0);
  std::size_t total = 0;
  for (std::uint32_t u = 0; u < cfg_.n_nodes; ++u) {
    link_offset_[u] = total;
    total += topology_.neighbors[u].size();
  }
  link_offset_[cfg_.n_nodes] = total;
  link_busy_until_.assign(total, 0.0);

  blocks_.push_back(Block::genesis());
  for (auto& node : nodes_) node->bootstrap(blocks_[0]);
  replay_tips_.assign(cfg_.n_nodes, kGenesisId);
}

bool Simulation::consume_budget(BlockKind kind) {
  bool counted = (cfg_.protocol == Protocol::Bitcoin &&
                  kind == BlockKind::BitcoinBlock) ||
                 (cfg_.protocol == Protocol::NG &&
                  kind == BlockKind::Microblock);
  if (!counted) return true;
  if (budget_left_ == 0) return false;
  --budget_left_;
  return true;
}

void Simulation::send(std::uint32_t from, std::uint32_t to,
                      std::size_t edge_index, const Block& b, double now) {
  double latency = topology_.latencies[from][edge_index];
  double serialization =
      8.0 * static_cast<double>(b.size_bytes) / topology_.bandwidth_bps;
  double departure = now;
  if (cfg_.link_queueing == LinkQueueing::Serialized) {
    double& busy = link_busy_until_[link_offset_[from] + edge_index];
    departure = std::max(now, busy);
    busy = departure + serialization;
  }
  double arrival = departure + serialization + latency +
                   cfg_.verification_delay_sec_per_byte *
                       static_cast<double>(b.size_bytes);
  SimEvent ev;
  ev.time = arrival;
  ev.kind = EventKind::MessageArrival;
  ev.node = to;
  ev.from = from;
  ev.block = b.id;
  queue_.push(ev);
}

void Simulation::broadcast(std::uint32_t node, const Block& b, double now) {
  if (b.id >= blocks_.size()) blocks_.resize(b.id + 1);
  blocks_[b.id] = b;
  const auto& nb = topology_.neighbors[node];
  for (std::size_t k = 0; k < nb.size(); ++k) send(node, nb[k], k, b, now);
}

void Simulation::relay(std::uint32_t node, std::uint32_t from, const Block& b,
                       double now) {
  const auto& nb = topology_.neighbors[node];
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (nb[k] == from) continue;
    send(node, nb[k], k, b, now);
  }
}

void Simulation::send_to_neighbor(std::uint32_t node, std::uint32_t ordinal,
                                  const Block& b, double now) {
  if (b.id >= blocks_.size()) blocks_.resize(b.id + 1);
  blocks_[b.id] = b;
  send(node, topology_.neighbors[node][ordinal], ordinal, b, now);
}

void Simulation::arm_microblock_timer(std::uint32_t node, double at,
                                      std::uint64_t token) {
  SimEvent ev;
  ev.time = at;
  ev.kind = EventKind::MicroblockTimer;
  ev.node = node;
  ev.token = token;
  queue_.push(ev);
}

void Simulation::verify_log_replay(double now) {
  // The event log must replay to the same tips the nodes actually hold;
  // metrics depend on exactly this reconstruction.
  const auto& records = log_.records();
  for (; replay_cursor_ < records.size(); ++replay_cursor_) {
    const LogRecord& r = records[replay_cursor_];
    switch (r.action) {
      case Action::Generate:
        replay_tips_[r.node] = r.block;
        break;
      case Action::Receive:
        if (replay_tips_[r.node] == r.parent) replay_tips_[r.node] = r.block;
        break;
      case Action::MainChainSwitch:
        replay_tips_[r.node] = r.block;
        break;
    }
  }
  (void)now;
  for (std::uint32_t u = 0; u < cfg_.n_nodes; ++u) {
    if (replay_tips_[u] != nodes_[u]->tip())
      throw std::logic_error("event log replay diverged from node state");
  }
}

RunResult Simulation::run() {
  // Seed the race for the first proof-of-work block.
  MineEvent first = schedule_->next(0.0);
  SimEvent ev;
  ev.time = first.time;
  ev.kind = EventKind::MineTrigger;
  ev.node = first.miner;
  queue_.push(ev);

  double now = 0.0;
  while (!queue_.empty()) {
    SimEvent e = queue_.pop();
    assert(e.time >= now);
    now = e.time;
    switch (e.kind) {
      case EventKind::MineTrigger: {
        if (budget_left_ == 0) break;  // run over: stop electing miners
        nodes_[e.node]->on_mine_trigger(now);
        if (cfg_.protocol == Protocol::Bitcoin) --budget_left_;
        if (budget_left_ > 0) {
          MineEvent next = schedule_->next(now);
          SimEvent trigger;
          trigger.time = next.time;
          trigger.kind = EventKind::MineTrigger;
          trigger.node = next.miner;
          queue_.push(trigger);
        }
        break;
      }
      case EventKind::MicroblockTimer:
        nodes_[e.node]->on_microblock_timer(now, e.token);
        break;
      case EventKind::MessageArrival:
        ++messages_delivered_;
        nodes_[e.node]->on_block_arrival(blocks_[e.block], e.from, now);
        break;
    }
    verify_log_replay(now);
  }

  // Quiescence: every connected node holds every delivered block, and no
  // orphan waits on a parent (unless invalid blocks were dropped upstream).
  std::uint64_t invalid = 0, duplicates = 0;
  for (const auto& node : nodes_) {
    invalid += node->stats().invalid_dropped;
    duplicates += node->stats().duplicates_dropped;
  }
  for (const auto& node : nodes_) {
    if (node->orphan_count() != 0 && invalid == 0)
      throw std::logic_error("undrained orphan buffer at quiescence");
  }

  RunResult result;
  result.log = log_;
  result.powers = powers_;
  result.blocks_generated = next_block_id_ - 1;
  result.messages_delivered = messages_delivered_;
  result.duplicates_dropped = duplicates;
  result.invalid_dropped = invalid;
  for (const auto& node : nodes_) result.final_tips.push_back(node->tip());

  MetricsOptions opts;
  opts.epsilon = cfg_.epsilon;
  opts.delta = cfg_.delta;
  opts.warmup_fraction = cfg_.warmup_fraction;
  LogAnalysis analysis(log_, cfg_.n_nodes);
  result.report = analysis.full_report(powers_, opts);
  result.final_main_leaf = analysis.main_leaf();

  if (cfg_.protocol == Protocol::NG) {
    LedgerParams params;
    params.fee_current_percent = cfg_.fee_current_percent;
    params.fee_next_percent = cfg_.fee_next_percent;
    params.poisoner_percent = cfg_.poisoner_percent;
    params.maturity_depth = cfg_.maturity_depth;
    // The union tree lives in the analysis; every node converges to it.
    result.ledger =
        settle_main_chain(analysis.tree(), result.final_main_leaf, params);
  }
  return result;
}

RunResult run_simulation(const SimConfig& cfg, const std::string& log_path) {
  Simulation sim(cfg);
  RunResult result = sim.run();
  if (!log_path.empty()) result.log.write(log_path);
  return result;
}

}  // namespace ngsim
