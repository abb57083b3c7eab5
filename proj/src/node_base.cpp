// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <cassert>
#include <deque>

#include "ngsim/nodes.hpp"

namespace ngsim {

const char* invalid_reason_name(InvalidReason r) {
  switch (r) {
    case InvalidReason::None: return "none";
    case InvalidReason::BadSignature: return "bad_signature";
    case InvalidReason::FutureTimestamp: return "future_timestamp";
    case InvalidReason::RateExceeded: return "rate_exceeded";
    case InvalidReason::Oversize: return "oversize";
    case InvalidReason::BadEntries: return "bad_entries";
  }
  return "?";
}

NodeBase::NodeBase(std::uint32_t id, const SimConfig& cfg, INodeHost& host,
                   EventLog& log, std::uint64_t tiebreak_seed)
    : id_(id), cfg_(cfg), host_(host), log_(log), rng_(tiebreak_seed) {}

void NodeBase::bootstrap(const Block& genesis) {
  InsertResult r = tree_.insert(genesis);
  assert(r == InsertResult::Inserted);
  (void)r;
  known_.insert(genesis.id);
  tip_ = genesis.id;
}

void NodeBase::on_block_arrival(const Block& b, std::uint32_t from, double now) {
  if (known_.count(b.id)) {
    ++stats_.duplicates_dropped;
    return;
  }
  known_.insert(b.id);
  host_.relay(id_, from, b, now);
  if (tree_.contains(b.parent)) {
    insert_and_process(b, now);
  } else {
    orphans_[b.parent].push_back(b);
    ++orphan_total_;
  }
}

InvalidReason NodeBase::validate(const Block&, double) {
  return InvalidReason::None;
}

void NodeBase::block_inserted(const Block&, double) {}
void NodeBase::tip_changed(BlockId, double) {}

void NodeBase::insert_and_process(const Block& first, double now) {
  std::deque<Block> pending{first};
  while (!pending.empty()) {
    Block b = std::move(pending.front());
    pending.pop_front();

    InvalidReason why = validate(b, now);
    if (why != InvalidReason::None) {
      ++stats_.invalid_dropped;
      ++stats_.drops_by_reason[why];
      continue;  // dropped; buffered children of it stay unreachable
    }
    InsertResult res = tree_.insert(b);
    if (res != InsertResult::Inserted) continue;  // duplicate: idempotent no-op

    log_.append(LogRecord{now, id_, Action::Receive, b.id, b.parent, b.kind,
                          b.miner, b.size_bytes, b.tx_count, kNoBlock});
    reselect(b, now);
    block_inserted(b, now);

    auto it = orphans_.find(b.id);
    if (it != orphans_.end()) {
      for (Block& child : it->second) pending.push_back(std::move(child));
      orphan_total_ -= it->second.size();
      orphans_.erase(it);
    }
  }
}

void NodeBase::register_own_block(const Block& b, double now) {
  known_.insert(b.id);
  log_.append(LogRecord{now, id_, Action::Generate, b.id, b.parent, b.kind,
                        b.miner, b.size_bytes, b.tx_count, kNoBlock});
  InsertResult res = tree_.insert(b);
  assert(res == InsertResult::Inserted);
  (void)res;
}

void NodeBase::accept_own_block(const Block& b, double now) {
  register_own_block(b, now);
  reselect(b, now);
  assert(tip_ == b.id);  // a node always mines on its own tip
  block_inserted(b, now);
  host_.broadcast(id_, b, now);
}

void NodeBase::adopt(BlockId new_tip, bool branch_change, const Block& cause,
                     double now) {
  BlockId old = tip_;
  tip_ = new_tip;
  if (branch_change) {
    ++stats_.switches;
    const Block& nb = tree_.block(new_tip);
    BlockId pair[2] = {old, new_tip};
    log_.append(LogRecord{now, id_, Action::MainChainSwitch, new_tip, old,
                          nb.kind, nb.miner, nb.size_bytes, nb.tx_count,
                          tree_.common_prefix(pair)});
  }
  (void)cause;
  tip_changed(old, now);
}

void NodeBase::reselect(const Block& b, double now) {
  // Incremental heaviest-chain rule. The inserted block is always a leaf
  // (buffered children are inserted separately), and the previous tip is
  // maximal-weight among previously known leaves, so comparing the new leaf
  // against the tip is sufficient. Log replay relies on exactly this:
  // a record's block becomes the tip iff its parent was the tip, and every
  // other adoption carries an explicit switch record.
  if (b.parent == tip_) {
    adopt(b.id, false, b, now);
    return;
  }
  ChainWeight wb = weight(b.id);
  ChainWeight wt = weight(tip_);
  if (wb > wt) {
    adopt(b.id, true, b, now);
    return;
  }
  if (wb < wt) return;
  if (protocol() == Protocol::NG &&
      tree_.epoch_key(b.id) == tree_.epoch_key(tip_)) {
    // Same leader, competing suffixes: prefer the longest (latest state),
    // ties to the lowest id.
    std::uint64_t db = tree_.depth(b.id), dt = tree_.depth(tip_);
    if (db > dt || (db == dt && b.id < tip_)) adopt(b.id, true, b, now);
    return;
  }
  // Equal-weight fork between distinct branches.
  if (cfg_.tiebreak == Tiebreak::Random && rng_.uniform01() < 0.5)
    adopt(b.id, true, b, now);
}

std::uint64_t NodeBase::mempool_cursor(BlockId tip) const {
  return tree_.cum_txs(tip);
}

void NodeBase::on_microblock_timer(double, std::uint64_t) {}

void BitcoinNode::on_mine_trigger(double now) {
  Block b;
  b.id = host_.allocate_block_id();
  b.parent = tip_;
  b.kind = BlockKind::BitcoinBlock;
  b.miner = id_;
  b.created_at = now;
  b.first_tx = mempool_cursor(tip_);
  std::uint64_t available = cfg_.mempool_prefill_count > b.first_tx
                                ? cfg_.mempool_prefill_count - b.first_tx
                                : 0;
  b.tx_count = static_cast<std::uint32_t>(std::min<std::uint64_t>(
      cfg_.txs_per_block(cfg_.block_size_bytes), available));
  b.size_bytes = cfg_.block_header_bytes + b.tx_count * cfg_.tx_size_bytes;
  b.fees = cfg_.fee_per_tx_micro * b.tx_count;
  b.coinbase.subsidy = cfg_.subsidy_micro;
  b.coinbase.fee_to_miner = b.fees;
  accept_own_block(b, now);
}

}  // namespace ngsim
