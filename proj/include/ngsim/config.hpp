// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ngsim/block.hpp"
#include "ngsim/block_tree.hpp"

namespace ngsim {

enum class Tiebreak : std::uint8_t { Random, FirstSeen };
enum class LinkQueueing : std::uint8_t { Parallel, Serialized };

// One simulation run. Every field can be set from a flat "key = value"
// config file and overridden by a CLI flag of the same name.
struct SimConfig {
  Protocol protocol = Protocol::Bitcoin;
  std::uint32_t n_nodes = 100;
  std::uint32_t min_degree = 5;
  // Empty means the builtin default; "builtin:default" and "builtin:miner"
  // select the shipped shapes explicitly.
  std::string latency_histogram_path;
  double bandwidth_bits_per_sec = 100'000.0;
  double power_exponent = -0.27;

  double block_interval_sec = 600.0;       // Bitcoin
  double key_interval_sec = 100.0;         // NG leader election
  double microblock_interval_sec = 10.0;   // NG emission rate
  double microblock_min_interval_sec = 0.01;  // protocol rate limit

  std::uint64_t block_size_bytes = 1'000'000;
  std::uint64_t microblock_size_bytes = 100'000;
  std::uint64_t key_block_size_bytes = 1'000;
  std::uint64_t block_header_bytes = 80;
  std::uint64_t tx_size_bytes = 476;

  Amount fee_per_tx_micro = 1'000;
  Amount subsidy_micro = 25 * kMicrosPerCoin;
  std::uint32_t fee_current_percent = 40;
  std::uint32_t fee_next_percent = 60;
  std::uint32_t poisoner_percent = 5;
  std::uint32_t maturity_depth = 100;

  std::uint64_t mempool_prefill_count = 10'000'000;
  // Bitcoin blocks or NG microblocks, matching the protocol under test.
  std::uint64_t run_length_blocks = 100;
  std::uint64_t seed = 1;

  double verification_delay_sec_per_byte = 0.0;
  double max_clock_skew_sec = 0.0;
  double epsilon = 0.9;
  double delta = 0.9;
  double warmup_fraction = 0.05;

  Tiebreak tiebreak = Tiebreak::Random;
  LinkQueueing link_queueing = LinkQueueing::Parallel;

  // Scripted equivocating leader; -1 disables the adversary.
  std::int32_t adversary_node = -1;
  std::uint32_t adversary_fork_count = 0;

  void validate() const;  // throws with the offending field name

  static SimConfig from_file(const std::string& path);
  static SimConfig from_text(const std::string& text,
                             const std::string& origin = "<string>");
  void apply(const std::string& key, const std::string& value);
  std::string to_text() const;

  std::uint32_t txs_per_block(std::uint64_t limit_bytes) const {
    if (limit_bytes <= block_header_bytes) return 0;
    return static_cast<std::uint32_t>((limit_bytes - block_header_bytes) /
                                      tx_size_bytes);
  }
};

// Config files live next to the binary unless this environment variable
// points somewhere else.
inline constexpr const char* kConfigDirEnv = "NGSIM_CONFIG_DIR";

std::string resolve_config_path(const std::string& path);

}  // namespace ngsim
