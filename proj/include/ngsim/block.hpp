// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ngsim/rng.hpp"

namespace ngsim {

// Block ids are assigned sequentially per run; 0 is reserved for genesis.
using BlockId = std::uint64_t;
inline constexpr BlockId kGenesisId = 0;
inline constexpr BlockId kNoBlock = std::numeric_limits<BlockId>::max();

using MinerId = std::uint32_t;
inline constexpr MinerId kNoMiner = std::numeric_limits<MinerId>::max();

// Currency in integer micro-coins. Fee splits use integer percents so that
// epoch accounting stays exact.
using Amount = std::int64_t;
inline constexpr Amount kMicrosPerCoin = 1'000'000;

enum class BlockKind : std::uint8_t { Genesis, BitcoinBlock, KeyBlock, Microblock };

inline bool is_pow(BlockKind k) {
  return k == BlockKind::BitcoinBlock || k == BlockKind::KeyBlock;
}

// Abstract signing scheme: sign(key, header) is a keyed digest and
// verification recomputes it. Key handles double as public and private key.
using KeyHandle = std::uint64_t;
using Signature = std::uint64_t;

inline KeyHandle derive_leader_key(MinerId miner, BlockId key_block) {
  std::uint64_t x = (static_cast<std::uint64_t>(miner) << 32) ^ key_block ^
                    0x4c6561646572ULL;
  Rng::splitmix64(x);
  return Rng::splitmix64(x);
}

inline Signature sign_header(KeyHandle key, BlockId id, BlockId parent,
                             double timestamp) {
  std::uint64_t t;
  static_assert(sizeof(t) == sizeof(timestamp));
  __builtin_memcpy(&t, &timestamp, sizeof(t));
  std::uint64_t x = key ^ (id * 0xd6e8feb86659fd93ULL) ^
                    (parent * 0xa3b195354a39b70dULL) ^ t;
  Rng::splitmix64(x);
  return Rng::splitmix64(x);
}

// Coinbase of a proof-of-work block. For NG key blocks the fees of the epoch
// that this block closes are split between the previous leader and this
// block's miner.
struct Remuneration {
  Amount subsidy = 0;
  Amount fee_to_previous = 0;
  Amount fee_to_miner = 0;
  MinerId previous_leader = kNoMiner;
};

// Fraud proof against an equivocating leader.
struct PoisonTransaction {
  MinerId cheater = kNoMiner;
  BlockId evidence_header = kNoBlock;  // first block of the pruned branch
  BlockId placed_after = kNoBlock;     // the cheater's epoch key block
  std::uint32_t poisoner_percent = 5;

  bool operator==(const PoisonTransaction&) const = default;
};

struct Block {
  BlockId id = kNoBlock;
  BlockId parent = kNoBlock;
  BlockKind kind = BlockKind::BitcoinBlock;
  MinerId miner = kNoMiner;
  double created_at = 0.0;
  std::uint64_t size_bytes = 0;
  std::uint32_t tx_count = 0;
  // Transactions are modeled as a range of the canonical pre-filled mempool;
  // first_tx is the offset of this block's payload on its branch.
  std::uint64_t first_tx = 0;
  Amount fees = 0;
  KeyHandle leader_pubkey = 0;  // key blocks only
  Signature signature = 0;      // microblocks only
  Remuneration coinbase;        // proof-of-work blocks only
  std::vector<PoisonTransaction> poisons;  // carried ledger fraud proofs

  static Block genesis() {
    Block g;
    g.id = kGenesisId;
    g.parent = kNoBlock;
    g.kind = BlockKind::Genesis;
    g.miner = kNoMiner;
    g.created_at = 0.0;
    return g;
  }
};

// Transaction model used by mempool double-spend checks; the simulator's
// hot path carries only counts and byte sizes (no body propagation).
struct OutputRef {
  std::uint64_t tx = 0;
  std::uint32_t index = 0;

  auto operator<=>(const OutputRef&) const = default;
};

struct Transaction {
  std::uint64_t id = 0;
  Amount fee = 0;
  std::uint64_t size_bytes = 0;
  std::vector<OutputRef> inputs;
};

}  // namespace ngsim
