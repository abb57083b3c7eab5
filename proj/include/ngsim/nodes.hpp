// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ngsim/block.hpp"
#include "ngsim/block_tree.hpp"
#include "ngsim/config.hpp"
#include "ngsim/event_log.hpp"
#include "ngsim/rng.hpp"

namespace ngsim {

// Services a node needs from the simulation driver.
class INodeHost {
 public:
  virtual ~INodeHost() = default;
  virtual BlockId allocate_block_id() = 0;
  // Gossip a freshly generated block to every neighbor.
  virtual void broadcast(std::uint32_t node, const Block& b, double now) = 0;
  // Forward a first-seen block to every neighbor except the sender.
  virtual void relay(std::uint32_t node, std::uint32_t from, const Block& b,
                     double now) = 0;
  // Targeted delivery to the k-th neighbor; used by the equivocating leader.
  virtual void send_to_neighbor(std::uint32_t node, std::uint32_t ordinal,
                                const Block& b, double now) = 0;
  virtual void arm_microblock_timer(std::uint32_t node, double at,
                                    std::uint64_t token) = 0;
  // False once the run's generation budget is exhausted.
  virtual bool consume_budget(BlockKind kind) = 0;
  virtual std::uint32_t neighbor_count(std::uint32_t node) const = 0;
};

enum class InvalidReason : std::uint8_t {
  None,
  BadSignature,
  FutureTimestamp,
  RateExceeded,
  Oversize,
  BadEntries,
};

const char* invalid_reason_name(InvalidReason r);

struct NodeStats {
  std::uint64_t duplicates_dropped = 0;
  std::uint64_t invalid_dropped = 0;
  std::uint64_t switches = 0;
  std::map<InvalidReason, std::uint64_t> drops_by_reason;
};

// Shared gossip/tree handling: first-receipt dedup and relay, orphan
// buffering until the parent arrives, heaviest-chain tip tracking with
// seeded random tie-breaking, and event logging.
class NodeBase {
 public:
  NodeBase(std::uint32_t id, const SimConfig& cfg, INodeHost& host,
           EventLog& log, std::uint64_t tiebreak_seed);
  virtual ~NodeBase() = default;

  void bootstrap(const Block& genesis);
  void on_block_arrival(const Block& b, std::uint32_t from, double now);
  virtual void on_mine_trigger(double now) = 0;
  virtual void on_microblock_timer(double now, std::uint64_t token);

  std::uint32_t id() const { return id_; }
  BlockId tip() const { return tip_; }
  const BlockTree& tree() const { return tree_; }
  bool knows(BlockId id) const { return known_.count(id) != 0; }
  std::size_t known_count() const { return known_.size(); }
  std::size_t orphan_count() const { return orphan_total_; }
  const NodeStats& stats() const { return stats_; }
  double clock(double now) const { return now + clock_skew_; }
  void set_clock_skew(double skew) { clock_skew_ = skew; }

 protected:
  virtual Protocol protocol() const = 0;
  virtual InvalidReason validate(const Block& b, double now);
  virtual void block_inserted(const Block& b, double now);
  virtual void tip_changed(BlockId old_tip, double now);

  // Generate path: log, insert, adopt, broadcast.
  void accept_own_block(const Block& b, double now);
  // Log + insert a self-generated block without adopting or gossiping.
  void register_own_block(const Block& b, double now);
  void insert_and_process(const Block& b, double now);
  void reselect(const Block& just_inserted, double now);
  ChainWeight weight(BlockId id) const {
    return tree_.chain_weight(id, protocol());
  }
  // Next unconsumed transaction index when mining on the given tip.
  std::uint64_t mempool_cursor(BlockId tip) const;

  const std::uint32_t id_;
  const SimConfig& cfg_;
  INodeHost& host_;
  EventLog& log_;
  BlockTree tree_;
  BlockId tip_ = kNoBlock;
  Rng rng_;

 private:
  void adopt(BlockId new_tip, bool branch_change, const Block& cause, double now);

  std::unordered_set<BlockId> known_;
  std::unordered_map<BlockId, std::vector<Block>> orphans_;
  std::size_t orphan_total_ = 0;
  double clock_skew_ = 0.0;
  NodeStats stats_;
};

// Baseline Nakamoto miner: mine on the heaviest known chain, fill blocks
// from the branch mempool cursor, adopt heavier chains on receipt.
class BitcoinNode : public NodeBase {
 public:
  using NodeBase::NodeBase;
  void on_mine_trigger(double now) override;

 protected:
  Protocol protocol() const override { return Protocol::Bitcoin; }
};

// Free-function form of the microblock validity rule, also used by tests:
// signature against the epoch key, no future timestamp, closed-boundary rate
// limit against the parent, size cap.
InvalidReason validate_microblock(const BlockTree& tree, const Block& mb,
                                  double local_clock, double min_interval,
                                  std::uint64_t size_limit);

// Equivocation check for two headers signed by the same epoch key: same
// parent but different content yields a poison naming that epoch's leader.
std::optional<PoisonTransaction> detect_equivocation(
    const BlockTree& tree, BlockId header_a, BlockId header_b,
    std::uint32_t poisoner_percent);

class NgNode : public NodeBase {
 public:
  NgNode(std::uint32_t id, const SimConfig& cfg, INodeHost& host,
         EventLog& log, std::uint64_t tiebreak_seed);

  void on_mine_trigger(double now) override;  // key block
  void on_microblock_timer(double now, std::uint64_t token) override;

  bool is_leader() const { return is_leader_; }
  std::uint64_t epoch_token() const { return epoch_token_; }
  const std::map<MinerId, PoisonTransaction>& pending_poisons() const {
    return pending_poisons_;
  }

 protected:
  Protocol protocol() const override { return Protocol::NG; }
  InvalidReason validate(const Block& b, double now) override;
  void block_inserted(const Block& b, double now) override;
  void tip_changed(BlockId old_tip, double now) override;

  Block build_microblock(double now);
  Block build_key_block(double now);
  std::vector<PoisonTransaction> placeable_poisons() const;

  bool is_leader_ = false;
  BlockId epoch_key_ = kGenesisId;
  KeyHandle leader_key_ = 0;
  std::uint64_t epoch_token_ = 0;

 private:
  // leader epoch -> (parent -> first microblock seen on it)
  std::map<std::pair<BlockId, BlockId>, BlockId> fraud_index_;
  std::map<MinerId, PoisonTransaction> pending_poisons_;
};

// Scripted equivocating leader: on its first leadership it emits
// fork_count distinct microblock branches from the same parent to disjoint
// neighbor subsets, then behaves like an honest leader.
class ForkingLeaderAdversary : public NgNode {
 public:
  ForkingLeaderAdversary(std::uint32_t id, const SimConfig& cfg,
                         INodeHost& host, EventLog& log,
                         std::uint64_t tiebreak_seed, std::uint32_t fork_count);

  void on_microblock_timer(double now, std::uint64_t token) override;

 private:
  std::uint32_t fork_count_;
  bool forked_once_ = false;
};

}  // namespace ngsim
