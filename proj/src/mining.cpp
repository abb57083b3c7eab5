// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/mining.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ngsim {

std::vector<MinerPower> assign_powers(std::uint32_t n_miners, double exponent) {
  if (n_miners == 0) throw std::invalid_argument("need at least one miner");
  std::vector<MinerPower> powers(n_miners);
  double total = 0.0;
  for (std::uint32_t i = 0; i < n_miners; ++i) {
    double p = std::exp(exponent * static_cast<double>(i + 1));
    powers[i] = {i, p};
    total += p;
  }
  for (auto& mp : powers) mp.power /= total;
  return powers;
}

MineSchedule::MineSchedule(double mean_interval, std::uint64_t seed,
                           std::vector<MinerPower> powers)
    : mean_(mean_interval), rng_(seed), powers_(std::move(powers)) {
  if (mean_ <= 0.0) throw std::invalid_argument("mean interval must be positive");
  if (powers_.empty()) throw std::invalid_argument("no miners");
  double total = 0.0;
  cumulative_.reserve(powers_.size());
  for (const auto& mp : powers_) {
    if (mp.power < 0.0) throw std::invalid_argument("negative mining power");
    total += mp.power;
    cumulative_.push_back(total);
  }
  if (total <= 0.0) throw std::invalid_argument("total mining power must be positive");
}

MineEvent MineSchedule::next(double now) {
  double t = now + rng_.exponential(mean_);
  double u = rng_.uniform01() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
  return {t, powers_[idx].miner};
}

}  // namespace ngsim
