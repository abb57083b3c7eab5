// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ngsim/event_log.hpp"
#include "ngsim/rng.hpp"

using namespace ngsim;

TEST_CASE("empty log writes a header-only file") {
  EventLog log;
  std::string text = log.to_text();
  CHECK(text == "time node action block parent kind miner size txs fork\n");
  CHECK(EventLog::from_text(text) == log);
}

TEST_CASE("large random logs round-trip exactly") {
  EventLog log;
  Rng rng(11);
  double t = 0.0;
  for (int i = 0; i < 10000; ++i) {
    t += rng.exponential(3.7);
    LogRecord r;
    r.time = t;
    r.node = static_cast<std::uint32_t>(rng.uniform_index(50));
    switch (rng.uniform_index(3)) {
      case 0: r.action = Action::Generate; break;
      case 1: r.action = Action::Receive; break;
      default: r.action = Action::MainChainSwitch; break;
    }
    r.block = rng.next() % 100000;
    r.parent = rng.uniform01() < 0.05 ? kNoBlock : rng.next() % 100000;
    r.kind = rng.uniform01() < 0.5 ? BlockKind::Microblock : BlockKind::KeyBlock;
    r.miner = static_cast<MinerId>(rng.uniform_index(50));
    r.size_bytes = rng.next() % 1000000;
    r.tx_count = static_cast<std::uint32_t>(rng.uniform_index(5000));
    r.fork_point =
        r.action == Action::MainChainSwitch ? rng.next() % 100000 : kNoBlock;
    log.append(r);
  }
  EventLog parsed = EventLog::from_text(log.to_text());
  CHECK(parsed == log);
}

TEST_CASE("file io round trip") {
  EventLog log;
  log.append(LogRecord{1.5, 0, Action::Generate, 1, 0,
                       BlockKind::BitcoinBlock, 0, 800, 7, kNoBlock});
  log.append(LogRecord{2.25, 1, Action::Receive, 1, 0,
                       BlockKind::BitcoinBlock, 0, 800, 7, kNoBlock});
  std::string path = "/tmp/ngsim_eventlog_test.log";
  log.write(path);
  CHECK(EventLog::read(path) == log);
}

TEST_CASE("corrupt input names the offending line") {
  std::string good =
      "time node action block parent kind miner size txs fork\n"
      "1 0 generate 1 0 bitcoin 0 800 7 -\n";
  CHECK(EventLog::from_text(good, "log").size() == 1);

  CHECK_THROWS_WITH_AS(
      EventLog::from_text(good + "2 0 generate 2 1 bitcoin 0\n", "log"),
      doctest::Contains("log:3"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      EventLog::from_text(good + "2 0 explode 2 1 bitcoin 0 800 7 -\n", "log"),
      doctest::Contains("unknown action"), std::runtime_error);
  CHECK_THROWS_WITH_AS(EventLog::from_text("garbage\n", "log"),
                       doctest::Contains("header"), std::runtime_error);
  CHECK_THROWS_AS(EventLog::read("/nonexistent/path.log"), std::runtime_error);
}
