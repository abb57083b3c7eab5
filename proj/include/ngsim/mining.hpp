// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <vector>

#include "ngsim/block.hpp"
#include "ngsim/rng.hpp"

namespace ngsim {

struct MinerPower {
  MinerId miner = 0;
  double power = 0.0;
};

// Rank-exponential power distribution: power of rank-k miner is proportional
// to exp(exponent * k), k = 1..n, normalized to sum 1. Rank 1 is miner 0.
std::vector<MinerPower> assign_powers(std::uint32_t n_miners, double exponent);

struct MineEvent {
  double time = 0.0;
  MinerId miner = 0;
};

// Simulated proof of work: one global exponential race with the configured
// mean; the winner is drawn proportionally to mining power.
class MineSchedule {
 public:
  MineSchedule(double mean_interval, std::uint64_t seed,
               std::vector<MinerPower> powers);

  MineEvent next(double now);

  double mean_interval() const { return mean_; }
  const std::vector<MinerPower>& powers() const { return powers_; }

 private:
  double mean_;
  Rng rng_;
  std::vector<MinerPower> powers_;
  std::vector<double> cumulative_;
};

}  // namespace ngsim
