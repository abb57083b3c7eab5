// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ngsim/block.hpp"
#include "ngsim/block_tree.hpp"

namespace ngsim {

struct LedgerParams {
  std::uint32_t fee_current_percent = 40;
  std::uint32_t fee_next_percent = 60;
  std::uint32_t poisoner_percent = 5;
  std::uint32_t maturity_depth = 100;
};

// Per-epoch settlement as recorded by the key block that closed the epoch.
struct EpochSettlement {
  BlockId epoch_key = kNoBlock;    // key block that opened the epoch
  BlockId next_key = kNoBlock;     // key block that closed it
  MinerId leader = kNoMiner;
  MinerId next_leader = kNoMiner;
  Amount fees_total = 0;
  Amount credit_previous = 0;      // leader's share, paid at next_key
  Amount credit_next = 0;          // next leader's share
  std::uint32_t microblocks = 0;
};

enum class PoisonOutcome : std::uint8_t { Accepted, DuplicatePoison, PoisonTooLate };

struct AcceptedPoison {
  PoisonTransaction poison;
  MinerId poisoner = kNoMiner;
  Amount voided = 0;
  Amount poisoner_credit = 0;
  BlockId placement_block = kNoBlock;
};

struct LedgerReport {
  std::map<MinerId, Amount> balances;  // after poison adjustments
  std::vector<EpochSettlement> epochs; // completed epochs, chain order
  std::vector<AcceptedPoison> accepted_poisons;
  std::uint32_t poisons_duplicate = 0;
  std::uint32_t poisons_late = 0;
  Amount destroyed = 0;
  Amount immature = 0;  // credits younger than maturity_depth key blocks
};

// Mutable ledger state used while walking a chain; exposed so the poison
// application rule can be exercised directly.
class LedgerState {
 public:
  explicit LedgerState(LedgerParams params) : params_(params) {}

  // Record the coinbase of a key block at the given key depth.
  void settle_key_block(const Block& key_block, std::uint64_t key_depth,
                        BlockId prev_epoch_key);
  // Apply a poison carried at the given key depth by the given leader.
  PoisonOutcome apply_poison(const PoisonTransaction& poison,
                             std::uint64_t placement_key_depth,
                             MinerId poisoner, BlockId placement_block);

  LedgerReport report(std::uint64_t final_key_depth) const;
  const LedgerParams& params() const { return params_; }

 private:
  struct Credit {
    MinerId to = kNoMiner;
    Amount amount = 0;
    BlockId epoch_key = kNoBlock;  // epoch this credit is tied to
    std::uint64_t key_depth = 0;   // where it was minted
    bool voided = false;
  };

  LedgerParams params_;
  std::vector<Credit> credits_;
  std::map<BlockId, std::uint64_t> epoch_depth_;  // epoch key -> key depth
  std::map<MinerId, BlockId> poisoned_;            // cheater -> evidence
  std::vector<AcceptedPoison> accepted_;
  std::uint32_t duplicate_ = 0, late_ = 0;
  Amount destroyed_ = 0;
};

// Walk the main chain of a final tree and settle every epoch, applying the
// poison entries carried by microblocks in chain order.
LedgerReport settle_main_chain(const BlockTree& tree, BlockId main_leaf,
                               const LedgerParams& params);

}  // namespace ngsim
