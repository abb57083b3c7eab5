// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "ngsim/block.hpp"
#include "ngsim/rng.hpp"

namespace ngsim {

enum class Protocol : std::uint8_t { Bitcoin, NG };

// Chain weight counts proof-of-work blocks from genesis to a leaf; under
// Bitcoin every non-genesis block carries work, under NG only key blocks do.
struct ChainWeight {
  std::uint64_t key_weight = 0;

  auto operator<=>(const ChainWeight&) const = default;
};

enum class InsertResult : std::uint8_t { Inserted, UnknownParent, Duplicate };

// Append-only tree of blocks rooted at genesis. Derived per-block data
// (depth, work, epoch key, binary-lifting jumps, path hash) is computed at
// insertion so chain queries stay logarithmic.
class BlockTree {
 public:
  InsertResult insert(const Block& block);

  bool contains(BlockId id) const { return index_.count(id) != 0; }
  const Block& block(BlockId id) const { return entry(id).block; }
  const std::vector<BlockId>& children(BlockId id) const {
    return entry(id).children;
  }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  // Blocks in insertion order.
  const Block& block_by_index(std::size_t i) const { return nodes_[i].block; }
  BlockId genesis() const { return kGenesisId; }
  const std::set<BlockId>& leaves() const { return leaves_; }

  // Number of blocks from genesis (exclusive) to the block, any kind.
  std::uint64_t depth(BlockId id) const { return entry(id).depth; }
  // Number of proof-of-work blocks on the same path.
  std::uint64_t pow_weight(BlockId id) const { return entry(id).pow_weight; }
  // Nearest key-block ancestor (the block itself if it is a key block);
  // genesis when no key block precedes it.
  BlockId epoch_key(BlockId id) const { return entry(id).epoch_key; }
  // Rolling hash of the id sequence genesis..block; equal hashes identify
  // identical root paths.
  std::uint64_t path_hash(BlockId id) const { return entry(id).path_hash; }
  // Cumulative transaction count genesis..block (mempool cursor on a branch).
  std::uint64_t cum_txs(BlockId id) const { return entry(id).cum_txs; }

  ChainWeight chain_weight(BlockId leaf, Protocol protocol) const;

  // Leaves of maximal weight. Under NG, branches headed by the same epoch
  // leader collapse to the longest microblock suffix (ties to the lowest id).
  std::vector<BlockId> head_candidates(Protocol protocol) const;

  // Maximal-weight leaf; ties broken uniformly at random.
  BlockId select_main_chain(Protocol protocol, Rng& tiebreak) const;

  // Deepest common ancestor of the given blocks.
  BlockId common_prefix(std::span<const BlockId> ids) const;

  bool is_ancestor(BlockId ancestor, BlockId descendant) const;
  BlockId ancestor_at_depth(BlockId id, std::uint64_t depth) const;
  // Deepest ancestor (or the block itself) with created_at <= cutoff;
  // kNoBlock when even genesis is newer than the cutoff.
  BlockId ancestor_at_time(BlockId id, double cutoff) const;

  std::vector<BlockId> path_from_genesis(BlockId id) const;

 private:
  struct Entry {
    Block block;
    std::uint64_t depth = 0;
    std::uint64_t pow_weight = 0;
    BlockId epoch_key = kGenesisId;
    std::uint64_t path_hash = 0;
    std::uint64_t cum_txs = 0;
    std::vector<BlockId> children;
    std::vector<std::uint32_t> jumps;  // indices at depth-2^k, k=0..
  };

  const Entry& entry(BlockId id) const;
  std::uint32_t slot(BlockId id) const;

  std::vector<Entry> nodes_;
  std::unordered_map<BlockId, std::uint32_t> index_;
  std::set<BlockId> leaves_;
};

}  // namespace ngsim
