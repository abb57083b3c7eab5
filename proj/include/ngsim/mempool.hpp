// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "ngsim/block.hpp"

namespace ngsim {

// Ordered transaction pool. Simulation runs pre-fill every node with the
// same independent transactions and consume them by branch offset, so this
// class backs the explicit double-spend path (unit scale) and block filling.
class Mempool {
 public:
  void add(Transaction tx) { txs_.push_back(std::move(tx)); }
  std::size_t size() const { return txs_.size(); }
  const std::vector<Transaction>& transactions() const { return txs_; }

  // Select transactions in order up to the byte limit, skipping any whose
  // inputs are already spent on the target branch.
  std::vector<const Transaction*> fill(
      std::uint64_t size_limit_bytes,
      const std::function<bool(const OutputRef&)>& spent_on_branch) const;

 private:
  std::vector<Transaction> txs_;
};

// Spent-output set of one branch, for unit-scale double-spend checks.
class BranchSpentSet {
 public:
  void spend(const Transaction& tx) {
    for (const OutputRef& ref : tx.inputs) spent_.insert(ref);
  }
  bool spent(const OutputRef& ref) const { return spent_.count(ref) != 0; }

 private:
  std::set<OutputRef> spent_;
};

}  // namespace ngsim
