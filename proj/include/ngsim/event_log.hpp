// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ngsim/block.hpp"

namespace ngsim {

enum class Action : std::uint8_t { Generate, Receive, MainChainSwitch };

// One observation at one node. All metrics are computed from these records:
//  - Generate: the node mined `block` (its tip becomes `block`).
//  - Receive: the node accepted `block` into its tree (tip becomes `block`
//    iff `parent` was its tip).
//  - MainChainSwitch: the node moved to `block` on a different branch;
//    `parent` holds the abandoned tip and `fork_point` their common prefix.
struct LogRecord {
  double time = 0.0;
  std::uint32_t node = 0;
  Action action = Action::Generate;
  BlockId block = kNoBlock;
  BlockId parent = kNoBlock;
  BlockKind kind = BlockKind::BitcoinBlock;
  MinerId miner = kNoMiner;
  std::uint64_t size_bytes = 0;
  std::uint32_t tx_count = 0;
  BlockId fork_point = kNoBlock;

  bool operator==(const LogRecord&) const = default;
};

class EventLog {
 public:
  void append(LogRecord r) { records_.push_back(r); }
  const std::vector<LogRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  double last_time() const { return records_.empty() ? 0.0 : records_.back().time; }

  bool operator==(const EventLog&) const = default;

  // Line-oriented text format, one record per line, stable field order.
  std::string to_text() const;
  void write(const std::string& path) const;
  static EventLog from_text(const std::string& text,
                            const std::string& origin = "<string>");
  static EventLog read(const std::string& path);

 private:
  std::vector<LogRecord> records_;
};

const char* action_name(Action a);
const char* kind_name(BlockKind k);

}  // namespace ngsim
