// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/block_tree.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ngsim {

namespace {

std::uint64_t mix_path_hash(std::uint64_t parent_hash, BlockId id) {
  std::uint64_t x = parent_hash ^ (id + 0x9e3779b97f4a7c15ULL);
  return Rng::splitmix64(x);
}

}  // namespace

const BlockTree::Entry& BlockTree::entry(BlockId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown block id");
  return nodes_[it->second];
}

std::uint32_t BlockTree::slot(BlockId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown block id");
  return it->second;
}

InsertResult BlockTree::insert(const Block& block) {
  if (index_.count(block.id)) return InsertResult::Duplicate;

  Entry e;
  e.block = block;
  if (nodes_.empty()) {
    // First insertion must be the genesis block.
    if (block.parent != kNoBlock || block.id != kGenesisId)
      return InsertResult::UnknownParent;
    e.path_hash = mix_path_hash(0, block.id);
  } else {
    auto pit = index_.find(block.parent);
    if (pit == index_.end()) return InsertResult::UnknownParent;
    Entry& parent = nodes_[pit->second];
    e.depth = parent.depth + 1;
    e.pow_weight = parent.pow_weight + (is_pow(block.kind) ? 1 : 0);
    e.epoch_key = block.kind == BlockKind::KeyBlock ? block.id : parent.epoch_key;
    e.path_hash = mix_path_hash(parent.path_hash, block.id);
    e.cum_txs = parent.cum_txs + block.tx_count;

    // Binary-lifting ancestors.
    e.jumps.push_back(pit->second);
    for (std::size_t k = 0; ; ++k) {
      const Entry& up = nodes_[e.jumps[k]];
      if (k >= up.jumps.size()) break;
      e.jumps.push_back(up.jumps[k]);
    }

    parent.children.push_back(block.id);
    leaves_.erase(block.parent);
  }

  std::uint32_t pos = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(e));
  index_.emplace(block.id, pos);
  leaves_.insert(block.id);
  return InsertResult::Inserted;
}

ChainWeight BlockTree::chain_weight(BlockId leaf, Protocol protocol) const {
  const Entry& e = entry(leaf);
  return protocol == Protocol::Bitcoin ? ChainWeight{e.depth}
                                       : ChainWeight{e.pow_weight};
}

std::vector<BlockId> BlockTree::head_candidates(Protocol protocol) const {
  std::vector<BlockId> best;
  ChainWeight best_w{0};
  for (BlockId leaf : leaves_) {
    ChainWeight w = chain_weight(leaf, protocol);
    if (best.empty() || w > best_w) {
      best_w = w;
      best.assign(1, leaf);
    } else if (w == best_w) {
      best.push_back(leaf);
    }
  }
  if (protocol == Protocol::NG && best.size() > 1) {
    // Same-leader branches: keep the longest suffix (the leader's latest
    // serialized state), ties to the lowest id.
    std::vector<BlockId> kept;
    for (BlockId leaf : best) {
      BlockId ek = epoch_key(leaf);
      bool replaced = false;
      for (BlockId& other : kept) {
        if (epoch_key(other) != ek) continue;
        std::uint64_t d_new = depth(leaf), d_old = depth(other);
        if (d_new > d_old || (d_new == d_old && leaf < other)) other = leaf;
        replaced = true;
        break;
      }
      if (!replaced) kept.push_back(leaf);
    }
    best = std::move(kept);
  }
  return best;
}

BlockId BlockTree::select_main_chain(Protocol protocol, Rng& tiebreak) const {
  if (nodes_.empty()) throw std::logic_error("empty tree");
  std::vector<BlockId> heads = head_candidates(protocol);
  if (heads.size() == 1) return heads.front();
  return heads[tiebreak.uniform_index(heads.size())];
}

bool BlockTree::is_ancestor(BlockId ancestor, BlockId descendant) const {
  const Entry& a = entry(ancestor);
  const Entry& d = entry(descendant);
  if (a.depth > d.depth) return false;
  return ancestor_at_depth(descendant, a.depth) == ancestor;
}

BlockId BlockTree::ancestor_at_depth(BlockId id, std::uint64_t depth) const {
  std::uint32_t cur = slot(id);
  if (nodes_[cur].depth < depth) throw std::out_of_range("depth above block");
  std::uint64_t delta = nodes_[cur].depth - depth;
  while (delta) {
    int k = std::countr_zero(delta);
    cur = nodes_[cur].jumps[static_cast<std::size_t>(k)];
    delta &= delta - 1;
  }
  return nodes_[cur].block.id;
}

BlockId BlockTree::ancestor_at_time(BlockId id, double cutoff) const {
  // created_at is non-decreasing along any root path, so jump as high as the
  // cutoff allows.
  std::uint32_t cur = slot(id);
  if (nodes_[cur].block.created_at <= cutoff) return id;
  while (true) {
    const Entry& e = nodes_[cur];
    if (e.jumps.empty()) return kNoBlock;  // genesis itself is too new
    std::size_t k = e.jumps.size();
    bool jumped = false;
    while (k-- > 0) {
      const Entry& up = nodes_[e.jumps[k]];
      if (up.block.created_at > cutoff) {
        cur = e.jumps[k];
        jumped = true;
        break;
      }
    }
    if (!jumped) {
      // Parent satisfies the cutoff.
      cur = e.jumps[0];
      return nodes_[cur].block.id;
    }
  }
}

BlockId BlockTree::common_prefix(std::span<const BlockId> ids) const {
  if (ids.empty()) throw std::invalid_argument("common_prefix of empty set");
  BlockId acc = ids.front();
  for (std::size_t i = 1; i < ids.size(); ++i) {
    BlockId other = ids[i];
    std::uint64_t d = std::min(depth(acc), depth(other));
    BlockId a = ancestor_at_depth(acc, d);
    BlockId b = ancestor_at_depth(other, d);
    while (a != b) {
      // Binary search the deepest equal ancestor via path hashes.
      std::uint64_t lo = 0, hi = d;  // lo agrees (genesis), hi disagrees
      while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (path_hash(ancestor_at_depth(acc, mid)) ==
            path_hash(ancestor_at_depth(other, mid)))
          lo = mid;
        else
          hi = mid;
      }
      d = lo;
      a = ancestor_at_depth(acc, d);
      b = ancestor_at_depth(other, d);
    }
    acc = a;
  }
  return acc;
}

std::vector<BlockId> BlockTree::path_from_genesis(BlockId id) const {
  std::vector<BlockId> path;
  path.reserve(depth(id) + 1);
  BlockId cur = id;
  while (true) {
    path.push_back(cur);
    const Entry& e = entry(cur);
    if (e.jumps.empty()) break;
    cur = nodes_[e.jumps[0]].block.id;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace ngsim
