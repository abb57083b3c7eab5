// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ngsim {

namespace {

std::uint64_t learn_key(std::uint32_t node, BlockId block) {
  return (static_cast<std::uint64_t>(node) << 40) | block;
}

}  // namespace

double nearest_rank_percentile(std::vector<double> samples, double delta) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("delta must be in (0, 1]");
  std::sort(samples.begin(), samples.end());
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(delta * static_cast<double>(samples.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  return samples[rank - 1];
}

LogAnalysis::LogAnalysis(const EventLog& log, std::uint32_t n_nodes)
    : n_nodes_(n_nodes) {
  tree_.insert(Block::genesis());
  timelines_.assign(n_nodes_, {});
  for (auto& tl : timelines_) tl.emplace_back(0.0, kGenesisId);

  std::vector<double> last_time(n_nodes_, 0.0);
  for (const LogRecord& r : log.records()) {
    if (r.node >= n_nodes_) throw std::runtime_error("record node out of range");
    if (r.time < last_time[r.node])
      throw std::runtime_error("per-node times must be non-decreasing");
    last_time[r.node] = r.time;
    end_time_ = std::max(end_time_, r.time);

    if (r.action == Action::Generate) {
      Block b;
      b.id = r.block;
      b.parent = r.parent;
      b.kind = r.kind;
      b.miner = r.miner;
      b.created_at = r.time;
      b.size_bytes = r.size_bytes;
      b.tx_count = r.tx_count;
      if (tree_.insert(b) != InsertResult::Inserted)
        throw std::runtime_error(
            "generate record for unknown parent or duplicate block");
      if (r.kind != BlockKind::BitcoinBlock) protocol_ = Protocol::NG;
    } else if (!tree_.contains(r.block)) {
      throw std::runtime_error("record references a block never generated");
    }

    if (r.action == Action::Generate || r.action == Action::Receive)
      learn_.emplace_back(learn_key(r.node, r.block), r.time);

    // Tip replay: a generate adopts the new block, a receive adopts it iff
    // it extends the current tip, a switch adopts explicitly.
    auto& tl = timelines_[r.node];
    switch (r.action) {
      case Action::Generate:
        tl.emplace_back(r.time, r.block);
        break;
      case Action::Receive:
        if (tl.back().second == r.parent) tl.emplace_back(r.time, r.block);
        break;
      case Action::MainChainSwitch:
        tl.emplace_back(r.time, r.block);
        break;
    }
  }

  std::sort(learn_.begin(), learn_.end(),
            [](const auto& a, const auto& b) {
              return a.first < b.first ||
                     (a.first == b.first && a.second < b.second);
            });
  learn_.erase(std::unique(learn_.begin(), learn_.end(),
                           [](const auto& a, const auto& b) {
                             return a.first == b.first;
                           }),
               learn_.end());

  candidates_.reserve(tree_.size());
  for (std::size_t i = 0; i < tree_.size(); ++i)
    candidates_.push_back(tree_.block_by_index(i).created_at);
  std::sort(candidates_.begin(), candidates_.end());
  candidates_.erase(std::unique(candidates_.begin(), candidates_.end()),
                    candidates_.end());

  record_times_.reserve(log.size());
  for (const LogRecord& r : log.records()) record_times_.push_back(r.time);
  std::sort(record_times_.begin(), record_times_.end());
  record_times_.erase(std::unique(record_times_.begin(), record_times_.end()),
                      record_times_.end());
}

double LogAnalysis::first_learn(std::uint32_t node, BlockId block) const {
  std::uint64_t key = learn_key(node, block);
  auto it = std::lower_bound(
      learn_.begin(), learn_.end(), key,
      [](const auto& entry, std::uint64_t k) { return entry.first < k; });
  if (it == learn_.end() || it->first != key)
    return std::numeric_limits<double>::infinity();
  return it->second;
}

BlockId LogAnalysis::main_leaf() const {
  BlockId best = kNoBlock;
  ChainWeight best_w{0};
  for (BlockId leaf : tree_.leaves()) {
    ChainWeight w = tree_.chain_weight(leaf, protocol_);
    bool better;
    if (best == kNoBlock) {
      better = true;
    } else if (w != best_w) {
      better = w > best_w;
    } else {
      const Block& a = tree_.block(leaf);
      const Block& b = tree_.block(best);
      better = a.created_at < b.created_at ||
               (a.created_at == b.created_at && leaf < best);
    }
    if (better) {
      best = leaf;
      best_w = w;
    }
  }
  return best;
}

BlockId LogAnalysis::tip_at(std::uint32_t node, double t) const {
  const auto& tl = timelines_[node];
  auto it = std::upper_bound(
      tl.begin(), tl.end(), t,
      [](double v, const auto& entry) { return v < entry.first; });
  return std::prev(it)->second;
}

std::size_t LogAnalysis::agreement_threshold(double epsilon) const {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must be in (0, 1]");
  auto needed = static_cast<std::size_t>(
      std::ceil(epsilon * static_cast<double>(n_nodes_) - 1e-9));
  return std::max<std::size_t>(needed, 1);
}

bool LogAnalysis::full_agreement(const std::vector<BlockId>& tips,
                                 std::size_t needed) const {
  std::unordered_map<std::uint64_t, std::size_t> groups;
  for (BlockId tip : tips)
    if (++groups[tree_.path_hash(tip)] >= needed) return true;
  return false;
}

bool LogAnalysis::agree_at_cut(const std::vector<BlockId>& tips, double cut,
                               std::size_t needed) const {
  std::unordered_map<std::uint64_t, std::size_t> groups;
  for (BlockId tip : tips) {
    BlockId anc = tree_.ancestor_at_time(tip, cut);
    if (anc == kNoBlock) continue;
    if (++groups[tree_.path_hash(anc)] >= needed) return true;
  }
  return false;
}

double LogAnalysis::point_consensus_delay(double t, double epsilon) const {
  std::size_t needed = agreement_threshold(epsilon);
  std::vector<BlockId> tips(n_nodes_);
  for (std::uint32_t u = 0; u < n_nodes_; ++u) tips[u] = tip_at(u, t);
  if (full_agreement(tips, needed)) return 0.0;
  // Agreement at a cut implies agreement at every earlier cut: binary search
  // for the largest agreeing block-creation time.
  auto hi_it = std::upper_bound(candidates_.begin(), candidates_.end(), t);
  std::size_t lo = 0;  // candidates_[0] is genesis time: always agrees
  std::size_t hi = static_cast<std::size_t>(hi_it - candidates_.begin());
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (agree_at_cut(tips, candidates_[mid], needed))
      lo = mid;
    else
      hi = mid;
  }
  return t - candidates_[lo];
}

double LogAnalysis::consensus_delay(const MetricsOptions& opts) const {
  std::size_t needed = agreement_threshold(opts.epsilon);
  double start = window_start(opts);
  double end = end_time_;
  if (end <= start) return 0.0;

  // Sampling grid: every record timestamp in the window plus a uniform grid.
  std::vector<double> samples;
  for (double g = start; g < end; g += opts.grid_step_sec) samples.push_back(g);
  samples.push_back(end);
  for (double t : record_times_)
    if (t >= start && t <= end) samples.push_back(t);
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

  // Between tip changes the best agreeing cut is constant, so each sample is
  // either 0 (full agreement) or t - c_star.
  std::vector<BlockId> tips(n_nodes_, kGenesisId);
  std::vector<std::size_t> cursor(n_nodes_, 0);
  std::vector<std::pair<double, std::uint32_t>> changes;
  for (std::uint32_t u = 0; u < n_nodes_; ++u)
    for (const auto& [time, tip] : timelines_[u]) changes.emplace_back(time, u);
  std::sort(changes.begin(), changes.end());

  std::vector<double> delays;
  delays.reserve(samples.size());
  std::size_t ci = 0;
  bool dirty = true, full = false;
  double c_star = 0.0;

  for (double t : samples) {
    while (ci < changes.size() && changes[ci].first <= t) {
      std::uint32_t u = changes[ci].second;
      auto& k = cursor[u];
      const auto& tl = timelines_[u];
      while (k + 1 < tl.size() && tl[k + 1].first <= t) ++k;
      if (tips[u] != tl[k].second) {
        tips[u] = tl[k].second;
        dirty = true;
      }
      ++ci;
    }
    if (dirty) {
      full = full_agreement(tips, needed);
      if (!full) {
        auto hi_it = std::upper_bound(candidates_.begin(), candidates_.end(), t);
        std::size_t lo = 0;
        std::size_t hi = static_cast<std::size_t>(hi_it - candidates_.begin());
        while (hi - lo > 1) {
          std::size_t mid = lo + (hi - lo) / 2;
          if (agree_at_cut(tips, candidates_[mid], needed))
            lo = mid;
          else
            hi = mid;
        }
        c_star = candidates_[lo];
      }
      dirty = false;
    }
    delays.push_back(full ? 0.0 : t - c_star);
  }
  return nearest_rank_percentile(std::move(delays), opts.delta);
}

double LogAnalysis::fairness(const std::vector<MinerPower>& powers,
                             const MetricsOptions& opts) const {
  double total_power = 0.0, largest_power = -1.0;
  MinerId largest = kNoMiner;
  for (const MinerPower& mp : powers) {
    total_power += mp.power;
    if (mp.power > largest_power) {
      largest_power = mp.power;
      largest = mp.miner;
    }
  }
  if (total_power <= 0.0 || largest_power >= total_power)
    throw std::domain_error("largest miner owns all mining power");

  double start = window_start(opts);
  std::uint64_t main_pow = 0, main_largest = 0;
  for (BlockId id : tree_.path_from_genesis(main_leaf())) {
    const Block& b = tree_.block(id);
    if (!is_pow(b.kind) || b.created_at < start) continue;
    ++main_pow;
    if (b.miner == largest) ++main_largest;
  }
  if (main_pow == 0) return 1.0;  // nothing decided inside the window
  double block_ratio = static_cast<double>(main_pow - main_largest) /
                       static_cast<double>(main_pow);
  double power_ratio = (total_power - largest_power) / total_power;
  return block_ratio / power_ratio;
}

double LogAnalysis::mining_power_utilization(const MetricsOptions& opts) const {
  double start = window_start(opts);
  std::unordered_set<BlockId> on_main;
  for (BlockId id : tree_.path_from_genesis(main_leaf())) on_main.insert(id);
  std::uint64_t total = 0, main = 0;
  for (std::size_t i = 0; i < tree_.size(); ++i) {
    const Block& b = tree_.block_by_index(i);
    if (!is_pow(b.kind) || b.created_at < start) continue;
    ++total;
    if (on_main.count(b.id)) ++main;
  }
  if (total == 0) return 1.0;  // no work, no waste
  return static_cast<double>(main) / static_cast<double>(total);
}

std::optional<double> LogAnalysis::time_to_prune(const MetricsOptions& opts) const {
  double start = window_start(opts);
  std::vector<BlockId> path = tree_.path_from_genesis(main_leaf());
  std::unordered_set<BlockId> on_main(path.begin(), path.end());

  std::vector<BlockId> roots;
  for (BlockId id : path)
    for (BlockId child : tree_.children(id))
      if (!on_main.count(child)) roots.push_back(child);
  if (roots.empty()) return std::nullopt;

  std::vector<double> samples;
  for (BlockId root : roots) {
    // The branch is the whole subtree under the root; its weight is the
    // weight of its heaviest leaf.
    std::vector<BlockId> branch{root};
    ChainWeight branch_w = tree_.chain_weight(root, protocol_);
    for (std::size_t i = 0; i < branch.size(); ++i) {
      for (BlockId child : tree_.children(branch[i])) {
        branch.push_back(child);
        branch_w = std::max(branch_w, tree_.chain_weight(child, protocol_));
      }
    }
    std::vector<BlockId> deciders;  // main blocks strictly heavier than it
    for (BlockId id : path)
      if (tree_.chain_weight(id, protocol_) > branch_w) deciders.push_back(id);

    for (std::uint32_t node = 0; node < n_nodes_; ++node) {
      double learn = std::numeric_limits<double>::infinity();
      for (BlockId b : branch) learn = std::min(learn, first_learn(node, b));
      if (!std::isfinite(learn) || learn < start) continue;
      double prune = std::numeric_limits<double>::infinity();
      for (BlockId d : deciders) prune = std::min(prune, first_learn(node, d));
      if (!std::isfinite(prune)) continue;  // branch unresolved at this node
      samples.push_back(std::max(0.0, prune - learn));
    }
  }
  if (samples.empty()) return std::nullopt;
  return nearest_rank_percentile(std::move(samples), opts.delta);
}

double LogAnalysis::time_to_win(const MetricsOptions& opts) const {
  double start = window_start(opts);
  std::vector<BlockId> path = tree_.path_from_genesis(main_leaf());
  std::vector<double> samples;
  for (BlockId id : path) {
    const Block& b = tree_.block(id);
    if (b.kind == BlockKind::Genesis || b.created_at < start) continue;
    double last_disagree = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tree_.size(); ++i) {
      const Block& x = tree_.block_by_index(i);
      if (x.kind == BlockKind::Genesis || x.miner == b.miner) continue;
      if (tree_.is_ancestor(id, x.id)) continue;  // descendants agree with b
      last_disagree = std::max(last_disagree, x.created_at);
    }
    samples.push_back(std::max(0.0, last_disagree - b.created_at));
  }
  if (samples.empty()) return 0.0;
  return nearest_rank_percentile(std::move(samples), opts.delta);
}

double LogAnalysis::throughput_tps(const MetricsOptions& opts) const {
  double start = window_start(opts);
  double span = end_time_ - start;
  if (span <= 0.0) return 0.0;
  std::uint64_t txs = 0;
  for (BlockId id : tree_.path_from_genesis(main_leaf())) {
    const Block& b = tree_.block(id);
    if (b.created_at >= start) txs += b.tx_count;
  }
  return static_cast<double>(txs) / span;
}

MetricsReport LogAnalysis::full_report(const std::vector<MinerPower>& powers,
                                       const MetricsOptions& opts) const {
  MetricsReport rep;
  rep.consensus_delay = consensus_delay(opts);
  rep.fairness = fairness(powers, opts);
  rep.mining_power_utilization = mining_power_utilization(opts);
  rep.time_to_prune = time_to_prune(opts);
  rep.time_to_win = time_to_win(opts);
  rep.throughput_tps = throughput_tps(opts);
  rep.window_start = window_start(opts);
  rep.window_end = end_time_;

  double start = rep.window_start;
  std::unordered_set<BlockId> on_main;
  for (BlockId id : tree_.path_from_genesis(main_leaf())) on_main.insert(id);
  for (std::size_t i = 0; i < tree_.size(); ++i) {
    const Block& b = tree_.block_by_index(i);
    if (b.kind == BlockKind::Genesis || b.created_at < start) continue;
    ++rep.blocks_total;
    if (is_pow(b.kind)) {
      ++rep.pow_total;
      if (on_main.count(b.id)) ++rep.pow_main;
    }
    if (on_main.count(b.id)) rep.main_chain_txs += b.tx_count;
  }
  return rep;
}

std::string MetricsReport::to_text() const {
  char buf[640];
  std::snprintf(
      buf, sizeof(buf),
      "consensus_delay = %.6f\n"
      "fairness = %.6f\n"
      "mining_power_utilization = %.6f\n"
      "time_to_prune = %s\n"
      "time_to_win = %.6f\n"
      "throughput_tps = %.6f\n"
      "blocks_total = %llu\n"
      "pow_total = %llu\n"
      "pow_main = %llu\n"
      "main_chain_txs = %llu\n"
      "window_start = %.3f\n"
      "window_end = %.3f\n",
      consensus_delay, fairness, mining_power_utilization,
      time_to_prune ? std::to_string(*time_to_prune).c_str() : "none",
      time_to_win, throughput_tps,
      static_cast<unsigned long long>(blocks_total),
      static_cast<unsigned long long>(pow_total),
      static_cast<unsigned long long>(pow_main),
      static_cast<unsigned long long>(main_chain_txs), window_start,
      window_end);
  return buf;
}

std::string MetricsReport::csv_header() {
  return "consensus_delay,fairness,mining_power_utilization,time_to_prune,"
         "time_to_win,throughput_tps,blocks_total,pow_total,pow_main,"
         "main_chain_txs";
}

std::string MetricsReport::to_csv_row() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%s,%.9g,%.9g,%llu,%llu,%llu,%llu",
                consensus_delay, fairness, mining_power_utilization,
                time_to_prune ? std::to_string(*time_to_prune).c_str() : "",
                time_to_win, throughput_tps,
                static_cast<unsigned long long>(blocks_total),
                static_cast<unsigned long long>(pow_total),
                static_cast<unsigned long long>(pow_main),
                static_cast<unsigned long long>(main_chain_txs));
  return buf;
}

double point_consensus_delay(const EventLog& log, std::uint32_t n_nodes,
                             double t, double epsilon) {
  return LogAnalysis(log, n_nodes).point_consensus_delay(t, epsilon);
}

double consensus_delay(const EventLog& log, std::uint32_t n_nodes,
                       const MetricsOptions& opts) {
  return LogAnalysis(log, n_nodes).consensus_delay(opts);
}

double fairness(const EventLog& log, std::uint32_t n_nodes,
                const std::vector<MinerPower>& powers,
                const MetricsOptions& opts) {
  return LogAnalysis(log, n_nodes).fairness(powers, opts);
}

double mining_power_utilization(const EventLog& log, std::uint32_t n_nodes,
                                const MetricsOptions& opts) {
  return LogAnalysis(log, n_nodes).mining_power_utilization(opts);
}

std::optional<double> time_to_prune(const EventLog& log, std::uint32_t n_nodes,
                                    const MetricsOptions& opts) {
  return LogAnalysis(log, n_nodes).time_to_prune(opts);
}

double time_to_win(const EventLog& log, std::uint32_t n_nodes,
                   const MetricsOptions& opts) {
  return LogAnalysis(log, n_nodes).time_to_win(opts);
}

}  // namespace ngsim
