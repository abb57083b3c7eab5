// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <algorithm>
#include <cassert>

#include "ngsim/nodes.hpp"

namespace ngsim {

InvalidReason validate_microblock(const BlockTree& tree, const Block& mb,
                                  double local_clock, double min_interval,
                                  std::uint64_t size_limit) {
  const Block& parent = tree.block(mb.parent);
  BlockId epoch = tree.epoch_key(mb.parent);
  if (epoch == kGenesisId) return InvalidReason::BadSignature;  // no leader yet
  KeyHandle pubkey = tree.block(epoch).leader_pubkey;
  if (mb.signature != sign_header(pubkey, mb.id, mb.parent, mb.created_at))
    return InvalidReason::BadSignature;
  if (mb.created_at > local_clock + 1e-9) return InvalidReason::FutureTimestamp;
  // Closed boundary: a gap of exactly min_interval is valid. The epsilon
  // absorbs float accumulation in timer arithmetic.
  if (mb.created_at - parent.created_at < min_interval - 1e-9)
    return InvalidReason::RateExceeded;
  if (mb.size_bytes > size_limit) return InvalidReason::Oversize;
  for (const PoisonTransaction& p : mb.poisons) {
    if (p.cheater == kNoMiner || p.evidence_header == kNoBlock)
      return InvalidReason::BadEntries;
  }
  return InvalidReason::None;
}

std::optional<PoisonTransaction> detect_equivocation(
    const BlockTree& tree, BlockId header_a, BlockId header_b,
    std::uint32_t poisoner_percent) {
  if (header_a == header_b) return std::nullopt;
  const Block& a = tree.block(header_a);
  const Block& b = tree.block(header_b);
  if (a.parent != b.parent) return std::nullopt;
  BlockId epoch_a = tree.epoch_key(header_a);
  if (a.kind != BlockKind::Microblock || b.kind != BlockKind::Microblock)
    return std::nullopt;
  if (epoch_a != tree.epoch_key(header_b) || epoch_a == kGenesisId)
    return std::nullopt;
  PoisonTransaction poison;
  poison.cheater = tree.block(epoch_a).miner;
  poison.evidence_header = header_b;
  poison.placed_after = epoch_a;
  poison.poisoner_percent = poisoner_percent;
  return poison;
}

NgNode::NgNode(std::uint32_t id, const SimConfig& cfg, INodeHost& host,
               EventLog& log, std::uint64_t tiebreak_seed)
    : NodeBase(id, cfg, host, log, tiebreak_seed) {}

InvalidReason NgNode::validate(const Block& b, double now) {
  if (b.kind != BlockKind::Microblock) return InvalidReason::None;
  return validate_microblock(tree_, b, clock(now),
                             cfg_.microblock_min_interval_sec,
                             cfg_.microblock_size_bytes);
}

void NgNode::block_inserted(const Block& b, double now) {
  (void)now;
  if (b.kind != BlockKind::Microblock) return;
  // Fraud index: one leader signing two different blocks on the same parent
  // is equivocation.
  BlockId epoch = tree_.epoch_key(b.parent);
  auto key = std::make_pair(epoch, b.parent);
  auto [it, fresh] = fraud_index_.emplace(key, b.id);
  if (fresh || it->second == b.id) return;
  MinerId cheater = tree_.block(epoch).miner;
  if (cheater == id_ || pending_poisons_.count(cheater)) return;
  // Evidence is the header off our main chain (the to-be-pruned branch).
  BlockId first = it->second, second = b.id;
  BlockId evidence = tree_.is_ancestor(second, tip_) ? first : second;
  auto poison =
      detect_equivocation(tree_, evidence == second ? first : second,
                          evidence, cfg_.poisoner_percent);
  if (poison) pending_poisons_.emplace(cheater, *poison);
}

void NgNode::tip_changed(BlockId, double now) {
  BlockId epoch = tree_.epoch_key(tip_);
  if (epoch == epoch_key_) return;  // same leader, nothing to re-arm
  epoch_key_ = epoch;
  ++epoch_token_;  // invalidates any pending timer
  const Block& kb = tree_.block(epoch);
  bool lead = epoch != kGenesisId && kb.miner == id_;
  is_leader_ = lead;
  if (lead) {
    leader_key_ = kb.leader_pubkey;
    host_.arm_microblock_timer(id_, now + cfg_.microblock_interval_sec,
                               epoch_token_);
  }
}

std::vector<PoisonTransaction> NgNode::placeable_poisons() const {
  std::vector<PoisonTransaction> out;
  if (pending_poisons_.empty()) return out;
  // Skip poisons already placed on our branch and those outside the window:
  // a poison lands strictly after the cheater's epoch key block and before
  // the revenue matures.
  std::uint64_t now_keys = tree_.pow_weight(tip_);
  std::vector<MinerId> placed;
  for (BlockId cur = tip_;;) {
    const Block& blk = tree_.block(cur);
    for (const PoisonTransaction& p : blk.poisons) placed.push_back(p.cheater);
    if (cur == kGenesisId) break;
    cur = blk.parent;
  }
  for (const auto& [cheater, poison] : pending_poisons_) {
    if (std::find(placed.begin(), placed.end(), cheater) != placed.end())
      continue;
    if (!tree_.contains(poison.placed_after)) continue;
    std::uint64_t cheater_keys = tree_.pow_weight(poison.placed_after);
    if (now_keys <= cheater_keys) continue;  // subsequent key block not there yet
    if (now_keys - cheater_keys > cfg_.maturity_depth) continue;  // too late
    out.push_back(poison);
  }
  return out;
}

Block NgNode::build_microblock(double now) {
  Block b;
  b.id = host_.allocate_block_id();
  b.parent = tip_;
  b.kind = BlockKind::Microblock;
  b.miner = id_;
  b.created_at = now;
  b.first_tx = mempool_cursor(tip_);
  std::uint64_t available = cfg_.mempool_prefill_count > b.first_tx
                                ? cfg_.mempool_prefill_count - b.first_tx
                                : 0;
  b.tx_count = static_cast<std::uint32_t>(std::min<std::uint64_t>(
      cfg_.txs_per_block(cfg_.microblock_size_bytes), available));
  b.size_bytes = cfg_.block_header_bytes + b.tx_count * cfg_.tx_size_bytes;
  b.fees = cfg_.fee_per_tx_micro * b.tx_count;
  b.poisons = placeable_poisons();
  b.signature = sign_header(leader_key_, b.id, b.parent, b.created_at);
  return b;
}

Block NgNode::build_key_block(double now) {
  Block b;
  b.id = host_.allocate_block_id();
  b.parent = tip_;
  b.kind = BlockKind::KeyBlock;
  b.miner = id_;
  b.created_at = now;
  b.size_bytes = cfg_.key_block_size_bytes;
  b.leader_pubkey = derive_leader_key(id_, b.id);
  // Close the epoch below us: its fees split between the leader who placed
  // them and this block's miner.
  BlockId prev_epoch = tree_.epoch_key(tip_);
  Amount fees = 0;
  for (BlockId cur = tip_; cur != prev_epoch;) {
    const Block& blk = tree_.block(cur);
    if (blk.kind == BlockKind::Microblock) fees += blk.fees;
    cur = blk.parent;
  }
  b.coinbase.subsidy = cfg_.subsidy_micro;
  b.coinbase.fee_to_previous = fees * cfg_.fee_current_percent / 100;
  b.coinbase.fee_to_miner = fees - b.coinbase.fee_to_previous;
  b.coinbase.previous_leader =
      prev_epoch == kGenesisId ? kNoMiner : tree_.block(prev_epoch).miner;
  return b;
}

void NgNode::on_mine_trigger(double now) {
  accept_own_block(build_key_block(now), now);
}

void NgNode::on_microblock_timer(double now, std::uint64_t token) {
  if (token != epoch_token_ || !is_leader_) return;  // leadership lost
  if (!host_.consume_budget(BlockKind::Microblock)) return;
  accept_own_block(build_microblock(now), now);
  host_.arm_microblock_timer(id_, now + cfg_.microblock_interval_sec, token);
}

ForkingLeaderAdversary::ForkingLeaderAdversary(std::uint32_t id,
                                               const SimConfig& cfg,
                                               INodeHost& host, EventLog& log,
                                               std::uint64_t tiebreak_seed,
                                               std::uint32_t fork_count)
    : NgNode(id, cfg, host, log, tiebreak_seed), fork_count_(fork_count) {}

void ForkingLeaderAdversary::on_microblock_timer(double now,
                                                 std::uint64_t token) {
  if (forked_once_ || fork_count_ < 2) {
    NgNode::on_microblock_timer(now, token);
    return;
  }
  if (token != epoch_token_ || !is_leader_) return;
  forked_once_ = true;

  std::vector<Block> forks;
  BlockId parent = tip_;
  for (std::uint32_t i = 0; i < fork_count_; ++i) {
    if (!host_.consume_budget(BlockKind::Microblock)) break;
    Block b = build_microblock(now);
    b.parent = parent;  // all branches share the pre-fork tip
    b.signature = sign_header(leader_key_, b.id, b.parent, b.created_at);
    forks.push_back(std::move(b));
  }
  if (forks.empty()) return;

  // All branches enter our tree; the lowest-id one is kept and extended.
  // Its record goes last so the log replays to the adopted tip.
  for (std::size_t i = 1; i < forks.size(); ++i)
    register_own_block(forks[i], now);
  register_own_block(forks[0], now);
  reselect(forks[0], now);

  // Disjoint neighbor subsets see different branches.
  std::uint32_t peers = host_.neighbor_count(id_);
  for (std::uint32_t j = 0; j < peers; ++j)
    host_.send_to_neighbor(id_, j, forks[j % forks.size()], now);

  host_.arm_microblock_timer(id_, now + cfg_.microblock_interval_sec, token);
}

}  // namespace ngsim
