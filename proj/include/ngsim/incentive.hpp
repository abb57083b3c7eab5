// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ngsim {

// Analytical bounds on the leader's fee share. alpha is the attacker's
// fraction of total mining power; the protocol is incentive compatible for a
// fee split r only when r_leader_lower(alpha) < r < r_leader_upper(alpha).
// Both inequalities are strict; boundary equality is infeasible.

struct IncentiveBounds {
  double alpha = 0.0;
  double r_lower = 0.0;
  double r_upper = 0.0;
  bool feasible = false;  // r_lower < r_upper
};

// Smallest viable leader share: 1 - (1-a)/(1+a-a^2).
double r_leader_lower(double alpha);
// Largest viable leader share: (1-a)/(2-a).
double r_leader_upper(double alpha);

bool feasible_split(double alpha, double r);

IncentiveBounds incentive_bounds(double alpha);

// Expected wait for an honest block, in seconds: mean_interval / honest.
double censorship_wait(double honest_fraction, double mean_block_interval);

struct DeviationPayoff {
  double deviate = 0.0;
  double comply = 0.0;

  bool deviation_profitable() const { return deviate > comply; }
};

// Withholding a transaction to capture the whole fee vs. publishing it:
// deviate = a + (1-a)*a*(1-r), comply = r.
DeviationPayoff inclusion_deviation_payoff(double alpha, double r);

// Mining behind a fee-bearing microblock to re-place the transaction:
// deviate = r + a*(1-r), comply = 1-r.
DeviationPayoff extension_deviation_payoff(double alpha, double r);

// Exact rational evaluation for rational alpha = num/den. Returned fraction
// is normalized.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

Fraction r_leader_lower_exact(std::int64_t num, std::int64_t den);
Fraction r_leader_upper_exact(std::int64_t num, std::int64_t den);

// CSV table over an alpha range: alpha, r_lower, r_upper, feasible_at_0.40.
std::string bounds_table_csv(double alpha_min, double alpha_max, double step,
                             double r = 0.40);

}  // namespace ngsim
