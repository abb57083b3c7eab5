// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/incentive.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace ngsim {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || alpha >= 1.0)
    throw std::domain_error("alpha must be in [0, 1)");
}

Fraction normalized(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Fraction{num, den};
}

}  // namespace

double r_leader_lower(double alpha) {
  check_alpha(alpha);
  return 1.0 - (1.0 - alpha) / (1.0 + alpha - alpha * alpha);
}

double r_leader_upper(double alpha) {
  check_alpha(alpha);
  return (1.0 - alpha) / (2.0 - alpha);
}

bool feasible_split(double alpha, double r) {
  return r_leader_lower(alpha) < r && r < r_leader_upper(alpha);
}

IncentiveBounds incentive_bounds(double alpha) {
  IncentiveBounds b;
  b.alpha = alpha;
  b.r_lower = r_leader_lower(alpha);
  b.r_upper = r_leader_upper(alpha);
  b.feasible = b.r_lower < b.r_upper;
  return b;
}

double censorship_wait(double honest_fraction, double mean_block_interval) {
  if (!(honest_fraction > 0.0) || honest_fraction > 1.0)
    throw std::domain_error("honest fraction must be in (0, 1]");
  return mean_block_interval / honest_fraction;
}

DeviationPayoff inclusion_deviation_payoff(double alpha, double r) {
  check_alpha(alpha);
  return {alpha + (1.0 - alpha) * alpha * (1.0 - r), r};
}

DeviationPayoff extension_deviation_payoff(double alpha, double r) {
  check_alpha(alpha);
  return {r + alpha * (1.0 - r), 1.0 - r};
}

std::string Fraction::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

Fraction r_leader_lower_exact(std::int64_t num, std::int64_t den) {
  // 1 - (den-num)*den / (den^2 + num*den - num^2)
  std::int64_t d = den * den + num * den - num * num;
  std::int64_t n = d - (den - num) * den;
  return normalized(n, d);
}

Fraction r_leader_upper_exact(std::int64_t num, std::int64_t den) {
  return normalized(den - num, 2 * den - num);
}

std::string bounds_table_csv(double alpha_min, double alpha_max, double step,
                             double r) {
  if (step <= 0.0) throw std::domain_error("step must be positive");
  std::string out = "alpha,r_lower,r_upper,feasible_at_" +
                    std::to_string(r).substr(0, 4) + "\n";
  char line[128];
  for (double a = alpha_min; a <= alpha_max + 1e-12; a += step) {
    IncentiveBounds b = incentive_bounds(a);
    bool ok = b.r_lower < r && r < b.r_upper;
    std::snprintf(line, sizeof(line), "%.4f,%.6f,%.6f,%d\n", a, b.r_lower,
                  b.r_upper, ok ? 1 : 0);
    out += line;
  }
  return out;
}

}  // namespace ngsim
