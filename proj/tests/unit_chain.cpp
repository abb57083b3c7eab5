// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ngsim/block_tree.hpp"

using namespace ngsim;

namespace {

Block make_block(BlockId id, BlockId parent, BlockKind kind, double t,
                 MinerId miner = 0) {
  Block b;
  b.id = id;
  b.parent = parent;
  b.kind = kind;
  b.miner = miner;
  b.created_at = t;
  return b;
}

// genesis -> K1 -> m1 -> m2 and K1 -> m1b (same epoch sibling)
BlockTree ng_sample_tree() {
  BlockTree tree;
  tree.insert(Block::genesis());
  tree.insert(make_block(1, 0, BlockKind::KeyBlock, 1.0, 1));
  tree.insert(make_block(2, 1, BlockKind::Microblock, 2.0, 1));
  tree.insert(make_block(3, 2, BlockKind::Microblock, 3.0, 1));
  tree.insert(make_block(4, 1, BlockKind::Microblock, 2.5, 1));
  return tree;
}

}  // namespace

TEST_CASE("genesis insertion is the base case") {
  BlockTree tree;
  CHECK(tree.insert(Block::genesis()) == InsertResult::Inserted);
  CHECK(tree.size() == 1);
  CHECK(tree.leaves().count(kGenesisId) == 1);
  CHECK(tree.chain_weight(kGenesisId, Protocol::Bitcoin).key_weight == 0);
}

TEST_CASE("single child updates the children index") {
  BlockTree tree;
  tree.insert(Block::genesis());
  CHECK(tree.insert(make_block(1, 0, BlockKind::BitcoinBlock, 5.0)) ==
        InsertResult::Inserted);
  REQUIRE(tree.children(kGenesisId).size() == 1);
  CHECK(tree.children(kGenesisId)[0] == 1);
  CHECK(tree.leaves().count(0) == 0);
  CHECK(tree.leaves().count(1) == 1);
}

TEST_CASE("unknown parent and duplicates are reported") {
  BlockTree tree;
  tree.insert(Block::genesis());
  CHECK(tree.insert(make_block(2, 77, BlockKind::BitcoinBlock, 1.0)) ==
        InsertResult::UnknownParent);
  tree.insert(make_block(1, 0, BlockKind::BitcoinBlock, 1.0));
  CHECK(tree.insert(make_block(1, 0, BlockKind::BitcoinBlock, 1.0)) ==
        InsertResult::Duplicate);
  CHECK(tree.size() == 2);
}

TEST_CASE("bitcoin weight counts all blocks on the path") {
  BlockTree tree;
  tree.insert(Block::genesis());
  for (BlockId id = 1; id <= 5; ++id)
    tree.insert(make_block(id, id - 1, BlockKind::BitcoinBlock, double(id)));
  CHECK(tree.chain_weight(5, Protocol::Bitcoin).key_weight == 5);
}

TEST_CASE("microblocks carry no weight") {
  BlockTree tree = ng_sample_tree();
  tree.insert(make_block(5, 3, BlockKind::KeyBlock, 4.0, 2));
  CHECK(tree.chain_weight(5, Protocol::NG).key_weight == 2);
  // Competing microblock suffixes of the same epoch tie at weight 1.
  CHECK(tree.chain_weight(3, Protocol::NG).key_weight == 1);
  CHECK(tree.chain_weight(4, Protocol::NG).key_weight == 1);
}

TEST_CASE("single chain selects its leaf") {
  BlockTree tree;
  tree.insert(Block::genesis());
  tree.insert(make_block(1, 0, BlockKind::BitcoinBlock, 1.0));
  tree.insert(make_block(2, 1, BlockKind::BitcoinBlock, 2.0));
  Rng rng(7);
  CHECK(tree.select_main_chain(Protocol::Bitcoin, rng) == 2);
}

TEST_CASE("a new key block outweighs pending microblocks of the old leader") {
  // Leader A produced microblocks 1' and 2'; key block 1 follows A's key
  // block directly and still wins on weight.
  BlockTree tree;
  tree.insert(Block::genesis());
  tree.insert(make_block(1, 0, BlockKind::KeyBlock, 1.0, 1));   // A's epoch
  tree.insert(make_block(2, 1, BlockKind::Microblock, 2.0, 1)); // 1'
  tree.insert(make_block(3, 2, BlockKind::Microblock, 3.0, 1)); // 2'
  tree.insert(make_block(4, 1, BlockKind::KeyBlock, 3.5, 2));   // key block 1
  Rng rng(1);
  CHECK(tree.select_main_chain(Protocol::NG, rng) == 4);
}

TEST_CASE("key block forks stay tied until the next key block") {
  BlockTree tree;
  tree.insert(Block::genesis());
  tree.insert(make_block(1, 0, BlockKind::KeyBlock, 1.0, 1));
  tree.insert(make_block(2, 1, BlockKind::KeyBlock, 2.0, 2));   // branch A
  tree.insert(make_block(3, 1, BlockKind::KeyBlock, 2.1, 3));   // branch B
  auto heads = tree.head_candidates(Protocol::NG);
  CHECK(heads.size() == 2);
  // Selection is a pure tie until one branch grows.
  std::set<BlockId> seen;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    Rng rng(seed);
    seen.insert(tree.select_main_chain(Protocol::NG, rng));
  }
  CHECK(seen == std::set<BlockId>{2, 3});
  tree.insert(make_block(7, 2, BlockKind::KeyBlock, 5.0, 4));
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(seed);
    CHECK(tree.select_main_chain(Protocol::NG, rng) == 7);
  }
}

TEST_CASE("same-leader branches collapse to the longest suffix") {
  BlockTree tree = ng_sample_tree();
  auto heads = tree.head_candidates(Protocol::NG);
  REQUIRE(heads.size() == 1);
  CHECK(heads[0] == 3);  // deeper suffix of the same epoch
}

TEST_CASE("common prefix") {
  BlockTree tree;
  tree.insert(Block::genesis());
  tree.insert(make_block(1, 0, BlockKind::KeyBlock, 1.0, 1));
  tree.insert(make_block(2, 1, BlockKind::KeyBlock, 2.0, 2));
  tree.insert(make_block(3, 1, BlockKind::KeyBlock, 2.1, 3));
  tree.insert(make_block(4, 3, BlockKind::KeyBlock, 3.0, 2));
  tree.insert(make_block(5, 0, BlockKind::KeyBlock, 1.5, 4));

  BlockId one[] = {4};
  CHECK(tree.common_prefix(one) == 4);
  BlockId split_at_root[] = {5, 4};
  CHECK(tree.common_prefix(split_at_root) == 0);
  BlockId fig3[] = {2, 4};
  CHECK(tree.common_prefix(fig3) == 1);  // the shared predecessor key block
  BlockId all[] = {2, 4, 5};
  CHECK(tree.common_prefix(all) == 0);
}

TEST_CASE("ancestor queries") {
  BlockTree tree;
  tree.insert(Block::genesis());
  for (BlockId id = 1; id <= 40; ++id)
    tree.insert(make_block(id, id - 1, BlockKind::BitcoinBlock, double(id)));
  CHECK(tree.ancestor_at_depth(40, 0) == 0);
  CHECK(tree.ancestor_at_depth(40, 17) == 17);
  CHECK(tree.is_ancestor(12, 40));
  CHECK_FALSE(tree.is_ancestor(40, 12));
  CHECK(tree.ancestor_at_time(40, 13.5) == 13);
  CHECK(tree.ancestor_at_time(40, 0.5) == 0);
  CHECK(tree.ancestor_at_time(40, -1.0) == kNoBlock);
  CHECK(tree.ancestor_at_time(40, 1000.0) == 40);
}

TEST_CASE("microblock insertion never changes branch weights") {
  BlockTree tree = ng_sample_tree();
  tree.insert(make_block(5, 3, BlockKind::KeyBlock, 4.0, 2));
  std::map<BlockId, std::uint64_t> before;
  for (BlockId id : {BlockId{1}, BlockId{3}, BlockId{4}, BlockId{5}})
    before[id] = tree.chain_weight(id, Protocol::NG).key_weight;
  // Bulk microblock insertion on several branches.
  BlockId next = 100;
  for (BlockId parent : {BlockId{5}, BlockId{4}, BlockId{3}}) {
    BlockId cur = parent;
    for (int i = 0; i < 10; ++i) {
      tree.insert(make_block(next, cur, BlockKind::Microblock, 10.0 + i));
      cur = next++;
    }
  }
  for (auto& [id, w] : before)
    CHECK(tree.chain_weight(id, Protocol::NG).key_weight == w);
}

TEST_CASE("selection always returns a maximal-weight leaf") {
  // Randomized trees up to 50 blocks, checked against brute force.
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    BlockTree tree;
    tree.insert(Block::genesis());
    std::vector<BlockId> ids{0};
    bool ng = seed % 2 == 0;
    for (BlockId id = 1; id < 50; ++id) {
      BlockId parent = ids[rng.uniform_index(ids.size())];
      BlockKind kind = ng && rng.uniform01() < 0.5 ? BlockKind::Microblock
                                                   : BlockKind::KeyBlock;
      double t = tree.block(parent).created_at + 1.0 + rng.uniform01();
      tree.insert(make_block(id, parent, kind, t));
      ids.push_back(id);
    }
    Protocol proto = ng ? Protocol::NG : Protocol::Bitcoin;
    Rng tiebreak(seed * 3 + 1);
    BlockId chosen = tree.select_main_chain(proto, tiebreak);
    CHECK(tree.leaves().count(chosen) == 1);
    std::uint64_t best = 0;
    for (BlockId leaf : tree.leaves())
      best = std::max(best, tree.chain_weight(leaf, proto).key_weight);
    CHECK(tree.chain_weight(chosen, proto).key_weight == best);
  }
}

TEST_CASE("selection is deterministic for a fixed tiebreak seed") {
  BlockTree tree;
  tree.insert(Block::genesis());
  tree.insert(make_block(1, 0, BlockKind::BitcoinBlock, 1.0));
  tree.insert(make_block(2, 0, BlockKind::BitcoinBlock, 1.1));
  tree.insert(make_block(3, 0, BlockKind::BitcoinBlock, 1.2));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    CHECK(tree.select_main_chain(Protocol::Bitcoin, a) ==
          tree.select_main_chain(Protocol::Bitcoin, b));
  }
}

TEST_CASE("append-only growth") {
  BlockTree tree;
  tree.insert(Block::genesis());
  std::size_t prev = tree.size();
  for (BlockId id = 1; id <= 20; ++id) {
    tree.insert(make_block(id, (id - 1) / 2, BlockKind::BitcoinBlock,
                           double(id)));
    CHECK(tree.size() == prev + 1);
    prev = tree.size();
    for (BlockId seen = 0; seen < id; ++seen) CHECK(tree.contains(seen));
  }
}
