// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ngsim {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw std::runtime_error("config field '" + field + "': " + why);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

void SimConfig::validate() const {
  if (n_nodes < 2) bad_field("n_nodes", "need at least two nodes");
  if (min_degree == 0) bad_field("min_degree", "must be positive");
  if (n_nodes <= min_degree)
    bad_field("min_degree", "must be smaller than n_nodes");
  if (bandwidth_bits_per_sec <= 0.0)
    bad_field("bandwidth_bits_per_sec", "must be positive");
  if (block_interval_sec <= 0.0)
    bad_field("block_interval_sec", "must be positive");
  if (key_interval_sec <= 0.0) bad_field("key_interval_sec", "must be positive");
  if (microblock_interval_sec <= 0.0)
    bad_field("microblock_interval_sec", "must be positive");
  if (protocol == Protocol::NG &&
      microblock_interval_sec < microblock_min_interval_sec)
    bad_field("microblock_interval_sec",
              "must be at least microblock_min_interval_sec");
  if (tx_size_bytes == 0) bad_field("tx_size_bytes", "must be positive");
  if (fee_current_percent + fee_next_percent != 100)
    bad_field("fee_current_percent",
              "fee_current_percent + fee_next_percent must equal 100");
  if (poisoner_percent > 100) bad_field("poisoner_percent", "must be <= 100");
  if (run_length_blocks == 0) bad_field("run_length_blocks", "must be positive");
  if (verification_delay_sec_per_byte < 0.0)
    bad_field("verification_delay_sec_per_byte", "must be non-negative");
  if (max_clock_skew_sec < 0.0)
    bad_field("max_clock_skew_sec", "must be non-negative");
  if (!(epsilon > 0.0) || epsilon > 1.0)
    bad_field("epsilon", "must be in (0, 1]");
  if (!(delta > 0.0) || delta > 1.0) bad_field("delta", "must be in (0, 1]");
  if (warmup_fraction < 0.0 || warmup_fraction >= 1.0)
    bad_field("warmup_fraction", "must be in [0, 1)");
  if (adversary_node >= 0 &&
      static_cast<std::uint32_t>(adversary_node) >= n_nodes)
    bad_field("adversary_node", "out of range");
}

void SimConfig::apply(const std::string& key, const std::string& value) {
  auto u64 = [&] { return std::stoull(value); };
  auto i64 = [&] { return std::stoll(value); };
  auto f64 = [&] { return std::stod(value); };
  try {
    if (key == "protocol") {
      if (value == "bitcoin") protocol = Protocol::Bitcoin;
      else if (value == "ng") protocol = Protocol::NG;
      else bad_field(key, "expected 'bitcoin' or 'ng'");
    } else if (key == "n_nodes") n_nodes = static_cast<std::uint32_t>(u64());
    else if (key == "min_degree") min_degree = static_cast<std::uint32_t>(u64());
    else if (key == "latency_histogram_path") latency_histogram_path = value;
    else if (key == "bandwidth_bits_per_sec") bandwidth_bits_per_sec = f64();
    else if (key == "power_exponent") power_exponent = f64();
    else if (key == "block_interval_sec") block_interval_sec = f64();
    else if (key == "key_interval_sec") key_interval_sec = f64();
    else if (key == "microblock_interval_sec") microblock_interval_sec = f64();
    else if (key == "microblock_min_interval_sec")
      microblock_min_interval_sec = f64();
    else if (key == "block_size_bytes") block_size_bytes = u64();
    else if (key == "microblock_size_bytes") microblock_size_bytes = u64();
    else if (key == "key_block_size_bytes") key_block_size_bytes = u64();
    else if (key == "block_header_bytes") block_header_bytes = u64();
    else if (key == "tx_size_bytes") tx_size_bytes = u64();
    else if (key == "fee_per_tx_micro") fee_per_tx_micro = i64();
    else if (key == "subsidy_micro") subsidy_micro = i64();
    else if (key == "fee_current_percent")
      fee_current_percent = static_cast<std::uint32_t>(u64());
    else if (key == "fee_next_percent")
      fee_next_percent = static_cast<std::uint32_t>(u64());
    else if (key == "poisoner_percent")
      poisoner_percent = static_cast<std::uint32_t>(u64());
    else if (key == "maturity_depth")
      maturity_depth = static_cast<std::uint32_t>(u64());
    else if (key == "mempool_prefill_count") mempool_prefill_count = u64();
    else if (key == "run_length_blocks") run_length_blocks = u64();
    else if (key == "seed") seed = u64();
    else if (key == "verification_delay_sec_per_byte")
      verification_delay_sec_per_byte = f64();
    else if (key == "max_clock_skew_sec") max_clock_skew_sec = f64();
    else if (key == "epsilon") epsilon = f64();
    else if (key == "delta") delta = f64();
    else if (key == "warmup_fraction") warmup_fraction = f64();
    else if (key == "tiebreak") {
      if (value == "random") tiebreak = Tiebreak::Random;
      else if (value == "first_seen") tiebreak = Tiebreak::FirstSeen;
      else bad_field(key, "expected 'random' or 'first_seen'");
    } else if (key == "link_queueing") {
      if (value == "parallel") link_queueing = LinkQueueing::Parallel;
      else if (value == "serialized") link_queueing = LinkQueueing::Serialized;
      else bad_field(key, "expected 'parallel' or 'serialized'");
    } else if (key == "adversary_node")
      adversary_node = static_cast<std::int32_t>(i64());
    else if (key == "adversary_fork_count")
      adversary_fork_count = static_cast<std::uint32_t>(u64());
    else bad_field(key, "unknown key");
  } catch (const std::invalid_argument&) {
    bad_field(key, "cannot parse value '" + value + "'");
  } catch (const std::out_of_range&) {
    bad_field(key, "value out of range: '" + value + "'");
  }
}

SimConfig SimConfig::from_text(const std::string& text,
                               const std::string& origin) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

SimConfig SimConfig::from_file(const std::string& path) {
  std::string resolved = resolve_config_path(path);
  std::ifstream in(resolved);
  if (!in) throw std::runtime_error("cannot open config: " + resolved);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), resolved);
}

std::string SimConfig::to_text() const {
  std::ostringstream out;
  out << "protocol = " << (protocol == Protocol::Bitcoin ? "bitcoin" : "ng") << "\n"
      << "n_nodes = " << n_nodes << "\n"
      << "min_degree = " << min_degree << "\n"
      << "latency_histogram_path = " << latency_histogram_path << "\n"
      << "bandwidth_bits_per_sec = " << bandwidth_bits_per_sec << "\n"
      << "power_exponent = " << power_exponent << "\n"
      << "block_interval_sec = " << block_interval_sec << "\n"
      << "key_interval_sec = " << key_interval_sec << "\n"
      << "microblock_interval_sec = " << microblock_interval_sec << "\n"
      << "microblock_min_interval_sec = " << microblock_min_interval_sec << "\n"
      << "block_size_bytes = " << block_size_bytes << "\n"
      << "microblock_size_bytes = " << microblock_size_bytes << "\n"
      << "key_block_size_bytes = " << key_block_size_bytes << "\n"
      << "block_header_bytes = " << block_header_bytes << "\n"
      << "tx_size_bytes = " << tx_size_bytes << "\n"
      << "fee_per_tx_micro = " << fee_per_tx_micro << "\n"
      << "subsidy_micro = " << subsidy_micro << "\n"
      << "fee_current_percent = " << fee_current_percent << "\n"
      << "fee_next_percent = " << fee_next_percent << "\n"
      << "poisoner_percent = " << poisoner_percent << "\n"
      << "maturity_depth = " << maturity_depth << "\n"
      << "mempool_prefill_count = " << mempool_prefill_count << "\n"
      << "run_length_blocks = " << run_length_blocks << "\n"
      << "seed = " << seed << "\n"
      << "verification_delay_sec_per_byte = " << verification_delay_sec_per_byte << "\n"
      << "max_clock_skew_sec = " << max_clock_skew_sec << "\n"
      << "epsilon = " << epsilon << "\n"
      << "delta = " << delta << "\n"
      << "warmup_fraction = " << warmup_fraction << "\n"
      << "tiebreak = " << (tiebreak == Tiebreak::Random ? "random" : "first_seen") << "\n"
      << "link_queueing = "
      << (link_queueing == LinkQueueing::Parallel ? "parallel" : "serialized") << "\n"
      << "adversary_node = " << adversary_node << "\n"
      << "adversary_fork_count = " << adversary_fork_count << "\n";
  return out.str();
}

std::string resolve_config_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::path(path).is_absolute() || fs::exists(path))
    return path;
  if (const char* dir = std::getenv(kConfigDirEnv)) {
    fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

}  // namespace ngsim
