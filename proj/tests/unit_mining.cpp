// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "ngsim/mining.hpp"

using namespace ngsim;
using doctest::Approx;

TEST_CASE("rank-exponential power assignment") {
  auto powers = assign_powers(20, -0.27);
  REQUIRE(powers.size() == 20);
  double sum = 0.0;
  for (const auto& mp : powers) sum += mp.power;
  CHECK(sum == Approx(1.0).epsilon(1e-12));

  // Adjacent ranks decay by exactly exp(-0.27).
  CHECK(powers[1].power / powers[0].power == Approx(std::exp(-0.27)).epsilon(1e-12));

  // Largest fraction from the closed-form geometric sum (1-r)/(1-r^20).
  double r = std::exp(-0.27);
  double expected = (1.0 - r) / (1.0 - std::pow(r, 20));
  CHECK(powers[0].power == Approx(expected).epsilon(1e-12));
  CHECK(powers[0].power > 0.237);
  CHECK(powers[0].power < 0.238);
  // The honest default stays under the protocol's 1/4 attacker bound.
  CHECK(powers[0].power < 0.25);

  auto hundred = assign_powers(100, -0.27);
  CHECK(hundred[0].power < 0.25);
}

TEST_CASE("flat exponent degenerates to uniform") {
  auto powers = assign_powers(8, 0.0);
  for (const auto& mp : powers) CHECK(mp.power == Approx(0.125).epsilon(1e-12));
}

TEST_CASE("single miner wins every race") {
  MineSchedule sched(10.0, 42, {{7, 1.0}});
  for (int i = 0; i < 100; ++i) CHECK(sched.next(0.0).miner == 7);
}

TEST_CASE("two equal miners split wins evenly") {
  MineSchedule sched(10.0, 1234, {{0, 0.5}, {1, 0.5}});
  int wins0 = 0;
  for (int i = 0; i < 10000; ++i)
    if (sched.next(0.0).miner == 0) ++wins0;
  CHECK(wins0 > 4800);
  CHECK(wins0 < 5200);
}

TEST_CASE("sample mean converges to the configured interval") {
  MineSchedule sched(100.0, 99, {{0, 1.0}});
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += sched.next(0.0).time;
  double mean = sum / n;
  CHECK(mean > 97.0);
  CHECK(mean < 103.0);
}

TEST_CASE("inter-event gaps look exponential") {
  // Coefficient of variation of an exponential is 1.
  MineSchedule sched(25.0, 7, {{0, 1.0}});
  const int n = 20000;
  std::vector<double> gaps(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    gaps[i] = sched.next(0.0).time;
    sum += gaps[i];
  }
  double mean = sum / n;
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= n - 1;
  double cov = std::sqrt(var) / mean;
  CHECK(cov > 0.95);
  CHECK(cov < 1.05);
}

TEST_CASE("winner frequencies track mining power") {
  auto powers = assign_powers(5, -0.27);
  MineSchedule sched(10.0, 2024, powers);
  std::map<MinerId, int> wins;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ++wins[sched.next(0.0).miner];
  for (const auto& mp : powers) {
    double freq = double(wins[mp.miner]) / n;
    CHECK(std::abs(freq - mp.power) < 0.02);
  }
}

TEST_CASE("identical seeds give identical schedules") {
  auto powers = assign_powers(10, -0.27);
  MineSchedule a(60.0, 5150, powers);
  MineSchedule b(60.0, 5150, powers);
  double now_a = 0.0, now_b = 0.0;
  for (int i = 0; i < 1000; ++i) {
    MineEvent ea = a.next(now_a), eb = b.next(now_b);
    CHECK(ea.time == eb.time);
    CHECK(ea.miner == eb.miner);
    now_a = ea.time;
    now_b = eb.time;
  }
}

TEST_CASE("invalid schedules are rejected") {
  CHECK_THROWS(assign_powers(0, -0.27));
  CHECK_THROWS(MineSchedule(0.0, 1, {{0, 1.0}}));
  CHECK_THROWS(MineSchedule(10.0, 1, {}));
  CHECK_THROWS(MineSchedule(10.0, 1, {{0, 0.0}, {1, 0.0}}));
}
