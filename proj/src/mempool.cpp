// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/mempool.hpp"

namespace ngsim {

std::vector<const Transaction*> Mempool::fill(
    std::uint64_t size_limit_bytes,
    const std::function<bool(const OutputRef&)>& spent_on_branch) const {
  std::vector<const Transaction*> picked;
  std::uint64_t used = 0;
  BranchSpentSet in_block;
  for (const Transaction& tx : txs_) {
    if (used + tx.size_bytes > size_limit_bytes) break;
    bool conflict = false;
    for (const OutputRef& ref : tx.inputs) {
      if (in_block.spent(ref) || (spent_on_branch && spent_on_branch(ref))) {
        conflict = true;
        break;
      }
    }
    if (conflict) continue;
    in_block.spend(tx);
    picked.push_back(&tx);
    used += tx.size_bytes;
  }
  return picked;
}

}  // namespace ngsim
