// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ngsim/incentive.hpp"

using namespace ngsim;
using doctest::Approx;

TEST_CASE("transaction-inclusion lower bound") {
  // alpha = 1/4 gives exactly 7/19.
  Fraction lo = r_leader_lower_exact(1, 4);
  CHECK(lo.num == 7);
  CHECK(lo.den == 19);
  CHECK(r_leader_lower(0.25) == Approx(7.0 / 19.0).epsilon(1e-14));
  CHECK(r_leader_lower(0.25) > 0.368);
  CHECK(r_leader_lower(0.25) < 0.369);

  CHECK(r_leader_lower(0.0) == 0.0);

  // alpha = 1/3 gives 5/11, the paper's ">45%" regime.
  Fraction third = r_leader_lower_exact(1, 3);
  CHECK(third.num == 5);
  CHECK(third.den == 11);
  CHECK(r_leader_lower(1.0 / 3.0) == Approx(5.0 / 11.0).epsilon(1e-12));

  CHECK_THROWS_AS(r_leader_lower(-0.1), std::domain_error);
  CHECK_THROWS_AS(r_leader_lower(1.0), std::domain_error);
}

TEST_CASE("longest-chain-extension upper bound") {
  Fraction hi = r_leader_upper_exact(1, 4);
  CHECK(hi.num == 3);
  CHECK(hi.den == 7);
  CHECK(r_leader_upper(0.25) == Approx(3.0 / 7.0).epsilon(1e-14));
  CHECK(r_leader_upper(0.25) > 0.428);
  CHECK(r_leader_upper(0.25) < 0.429);

  CHECK(r_leader_upper(0.0) == 0.5);
  CHECK(r_leader_upper(1.0 / 3.0) == Approx(0.40).epsilon(1e-12));
}

TEST_CASE("feasibility of the 40/60 split") {
  CHECK(feasible_split(0.25, 0.40));
  // At a third of the power the window is empty: upper bound is exactly 40%
  // and the inequalities are strict.
  CHECK_FALSE(feasible_split(1.0 / 3.0, 0.40));
  // Below the lower bound 7/19 the split fails; just above it passes.
  CHECK_FALSE(feasible_split(0.25, 0.365));
  CHECK(feasible_split(0.25, 0.37));  // 0.37 > 7/19 = 0.36842...
}

TEST_CASE("censorship wait") {
  CHECK(censorship_wait(0.75, 600.0) == Approx(800.0));  // 13.33 minutes
  CHECK(censorship_wait(1.0, 600.0) == 600.0);
  CHECK(censorship_wait(0.5, 600.0) == 1200.0);
  CHECK_THROWS_AS(censorship_wait(0.0, 600.0), std::domain_error);
}

TEST_CASE("inclusion deviation payoff") {
  auto p = inclusion_deviation_payoff(0.25, 0.40);
  CHECK(p.deviate == Approx(0.3625).epsilon(1e-14));
  CHECK(p.comply == 0.40);
  CHECK_FALSE(p.deviation_profitable());

  auto q = inclusion_deviation_payoff(0.25, 0.36);
  CHECK(q.deviate > q.comply);  // withholding pays below the bound

  auto z = inclusion_deviation_payoff(0.0, 0.1);
  CHECK(z.deviate == 0.0);
  CHECK_FALSE(z.deviation_profitable());
}

TEST_CASE("extension deviation payoff") {
  auto p = extension_deviation_payoff(0.25, 0.40);
  CHECK(p.deviate == Approx(0.55).epsilon(1e-14));
  CHECK(p.comply == Approx(0.60).epsilon(1e-14));
  CHECK_FALSE(p.deviation_profitable());

  auto q = extension_deviation_payoff(0.25, 0.45);
  CHECK(q.deviate == Approx(0.5875).epsilon(1e-14));
  CHECK(q.deviation_profitable());

  auto b = extension_deviation_payoff(0.0, 0.5);
  CHECK(b.deviate == b.comply);  // bound is tight at alpha = 0
}

TEST_CASE("the 40% split is feasible across the protocol's attacker bound") {
  for (double a = 0.0; a <= 0.25 + 1e-12; a += 0.001) {
    CHECK(r_leader_lower(a) < 0.40);
    CHECK(r_leader_upper(a) > 0.40);
  }
}

TEST_CASE("bounds are monotone and the window shrinks") {
  double prev_lo = -1.0, prev_hi = 2.0;
  for (double a = 0.0; a < 1.0; a += 0.001) {
    double lo = r_leader_lower(a), hi = r_leader_upper(a);
    CHECK(lo > prev_lo);
    CHECK(hi < prev_hi);
    prev_lo = lo;
    prev_hi = hi;
  }
}

TEST_CASE("the window closes between a quarter and a third") {
  auto gap = [](double a) { return r_leader_upper(a) - r_leader_lower(a); };
  double lo = 0.25, hi = 1.0 / 3.0;
  CHECK(gap(lo) > 0.0);
  CHECK(gap(hi) < 0.0);
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(lo > 0.25);
  CHECK(hi < 1.0 / 3.0);
  CHECK(hi - lo < 1e-15);
}

TEST_CASE("payoff break-even recovers the closed-form bounds") {
  // Solving deviate == comply for r must reproduce the bound formulas.
  for (double a : {0.05, 0.125, 0.25, 0.3}) {
    auto solve = [&](auto payoff) {
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        auto p = payoff(a, mid);
        (p.deviate > p.comply ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    CHECK(std::abs(solve(inclusion_deviation_payoff) - r_leader_lower(a)) <
          1e-12);
    // For extension, deviation profits above the bound.
    auto solve_upper = [&]() {
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        auto p = extension_deviation_payoff(a, mid);
        (p.deviate < p.comply ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    CHECK(std::abs(solve_upper() - r_leader_upper(a)) < 1e-12);
  }
}

TEST_CASE("bounds table emits plot-ready csv") {
  std::string csv = bounds_table_csv(0.0, 0.30, 0.05);
  CHECK(csv.find("alpha,r_lower,r_upper,feasible_at_0.40") == 0);
  CHECK(csv.find("0.2500") != std::string::npos);
  // 7 data rows plus the header.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
}
