// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/ledger.hpp"

namespace ngsim {

void LedgerState::settle_key_block(const Block& kb, std::uint64_t key_depth,
                                   BlockId prev_epoch_key) {
  epoch_depth_[kb.id] = key_depth;
  // Subsidy belongs to the epoch this key block opens.
  credits_.push_back({kb.miner, kb.coinbase.subsidy, kb.id, key_depth, false});
  if (kb.coinbase.fee_to_previous > 0 &&
      kb.coinbase.previous_leader != kNoMiner) {
    // The closed epoch's 40% share, tied to the previous leader's epoch.
    credits_.push_back({kb.coinbase.previous_leader,
                        kb.coinbase.fee_to_previous, prev_epoch_key, key_depth,
                        false});
  }
  if (kb.coinbase.fee_to_miner > 0) {
    credits_.push_back(
        {kb.miner, kb.coinbase.fee_to_miner, kb.id, key_depth, false});
  }
}

PoisonOutcome LedgerState::apply_poison(const PoisonTransaction& poison,
                                        std::uint64_t placement_key_depth,
                                        MinerId poisoner,
                                        BlockId placement_block) {
  if (poisoned_.count(poison.cheater)) {
    ++duplicate_;
    return PoisonOutcome::DuplicatePoison;
  }
  auto it = epoch_depth_.find(poison.placed_after);
  std::uint64_t cheater_depth = it == epoch_depth_.end() ? 0 : it->second;
  if (placement_key_depth > cheater_depth + params_.maturity_depth) {
    ++late_;
    return PoisonOutcome::PoisonTooLate;
  }
  Amount voided = 0;
  for (Credit& c : credits_) {
    if (c.voided || c.to != poison.cheater || c.epoch_key != poison.placed_after)
      continue;
    c.voided = true;
    voided += c.amount;
  }
  Amount reward = voided * poison.poisoner_percent / 100;
  destroyed_ += voided - reward;
  credits_.push_back({poisoner, reward, kNoBlock, placement_key_depth, false});
  poisoned_[poison.cheater] = poison.evidence_header;
  accepted_.push_back({poison, poisoner, voided, reward, placement_block});
  return PoisonOutcome::Accepted;
}

LedgerReport LedgerState::report(std::uint64_t final_key_depth) const {
  LedgerReport rep;
  for (const Credit& c : credits_) {
    if (c.voided) continue;
    rep.balances[c.to] += c.amount;
    if (final_key_depth < c.key_depth + params_.maturity_depth)
      rep.immature += c.amount;
  }
  rep.accepted_poisons = accepted_;
  rep.poisons_duplicate = duplicate_;
  rep.poisons_late = late_;
  rep.destroyed = destroyed_;
  return rep;
}

LedgerReport settle_main_chain(const BlockTree& tree, BlockId main_leaf,
                               const LedgerParams& params) {
  LedgerState state(params);
  std::vector<BlockId> path = tree.path_from_genesis(main_leaf);

  std::uint64_t key_depth = 0;
  BlockId epoch_key = kGenesisId;
  MinerId epoch_leader = kNoMiner;
  std::vector<EpochSettlement> epochs;
  EpochSettlement open;

  for (BlockId id : path) {
    const Block& b = tree.block(id);
    switch (b.kind) {
      case BlockKind::Genesis:
        break;
      case BlockKind::KeyBlock: {
        ++key_depth;
        if (epoch_key != kGenesisId) {
          open.next_key = b.id;
          open.next_leader = b.miner;
          open.credit_previous = b.coinbase.fee_to_previous;
          open.credit_next = b.coinbase.fee_to_miner;
          epochs.push_back(open);
        }
        state.settle_key_block(b, key_depth, epoch_key);
        epoch_key = b.id;
        epoch_leader = b.miner;
        open = EpochSettlement{};
        open.epoch_key = b.id;
        open.leader = b.miner;
        break;
      }
      case BlockKind::Microblock: {
        open.fees_total += b.fees;
        ++open.microblocks;
        for (const PoisonTransaction& p : b.poisons)
          state.apply_poison(p, key_depth, epoch_leader, b.id);
        break;
      }
      case BlockKind::BitcoinBlock: {
        ++key_depth;
        state.settle_key_block(b, key_depth, epoch_key);
        break;
      }
    }
  }

  LedgerReport rep = state.report(key_depth);
  rep.epochs = std::move(epochs);
  return rep;
}

}  // namespace ngsim
