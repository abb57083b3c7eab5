// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/event_log.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ngsim {

namespace {

constexpr const char* kHeader =
    "time node action block parent kind miner size txs fork";

std::string id_str(BlockId id) {
  return id == kNoBlock ? "-" : std::to_string(id);
}

BlockId parse_id(const std::string& s) {
  if (s == "-") return kNoBlock;
  return static_cast<BlockId>(std::stoull(s));
}

Action parse_action(const std::string& s, const std::string& where) {
  if (s == "generate") return Action::Generate;
  if (s == "receive") return Action::Receive;
  if (s == "switch") return Action::MainChainSwitch;
  throw std::runtime_error(where + ": unknown action '" + s + "'");
}

BlockKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "genesis") return BlockKind::Genesis;
  if (s == "bitcoin") return BlockKind::BitcoinBlock;
  if (s == "key") return BlockKind::KeyBlock;
  if (s == "micro") return BlockKind::Microblock;
  throw std::runtime_error(where + ": unknown block kind '" + s + "'");
}

}  // namespace

const char* action_name(Action a) {
  switch (a) {
    case Action::Generate: return "generate";
    case Action::Receive: return "receive";
    case Action::MainChainSwitch: return "switch";
  }
  return "?";
}

const char* kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Genesis: return "genesis";
    case BlockKind::BitcoinBlock: return "bitcoin";
    case BlockKind::KeyBlock: return "key";
    case BlockKind::Microblock: return "micro";
  }
  return "?";
}

std::string EventLog::to_text() const {
  std::string out(kHeader);
  out += '\n';
  char buf[256];
  for (const LogRecord& r : records_) {
    // %.17g round-trips doubles exactly.
    std::snprintf(buf, sizeof(buf), "%.17g %u %s %s %s %s %s %" PRIu64 " %u %s\n",
                  r.time, r.node, action_name(r.action), id_str(r.block).c_str(),
                  id_str(r.parent).c_str(), kind_name(r.kind),
                  r.miner == kNoMiner ? "-" : std::to_string(r.miner).c_str(),
                  r.size_bytes, r.tx_count, id_str(r.fork_point).c_str());
    out += buf;
  }
  return out;
}

void EventLog::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write event log: " + path);
  out << to_text();
  if (!out) throw std::runtime_error("write failed: " + path);
}

EventLog EventLog::from_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  EventLog log;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string where = origin + ":" + std::to_string(lineno);
    if (!saw_header) {
      if (line != kHeader)
        throw std::runtime_error(where + ": bad event log header");
      saw_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string action, block, parent, kind, miner, fork;
    LogRecord r;
    if (!(ls >> r.time >> r.node >> action >> block >> parent >> kind >>
          miner >> r.size_bytes >> r.tx_count >> fork))
      throw std::runtime_error(where + ": malformed record");
    r.action = parse_action(action, where);
    r.block = parse_id(block);
    r.parent = parse_id(parent);
    r.kind = parse_kind(kind, where);
    r.miner = miner == "-" ? kNoMiner
                           : static_cast<MinerId>(std::stoul(miner));
    r.fork_point = parse_id(fork);
    log.append(r);
  }
  if (!saw_header) throw std::runtime_error(origin + ": missing header line");
  return log;
}

EventLog EventLog::read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open event log: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), path);
}

}  // namespace ngsim
