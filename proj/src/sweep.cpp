// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>

#include "ngsim/sim.hpp"

namespace ngsim {

namespace {

// Payload rate of a config in transactions per second, from the block that
// carries ledger entries under its protocol.
double payload_tx_rate(const SimConfig& cfg) {
  if (cfg.protocol == Protocol::Bitcoin)
    return static_cast<double>(cfg.txs_per_block(cfg.block_size_bytes)) /
           cfg.block_interval_sec;
  return static_cast<double>(cfg.txs_per_block(cfg.microblock_size_bytes)) /
         cfg.microblock_interval_sec;
}

void set_payload_size(SimConfig& cfg, double target_tx_rate) {
  double interval = cfg.protocol == Protocol::Bitcoin
                        ? cfg.block_interval_sec
                        : cfg.microblock_interval_sec;
  auto txs = static_cast<std::uint64_t>(
      std::llround(target_tx_rate * interval));
  txs = std::max<std::uint64_t>(txs, 1);
  std::uint64_t size = cfg.block_header_bytes + txs * cfg.tx_size_bytes;
  if (cfg.protocol == Protocol::Bitcoin)
    cfg.block_size_bytes = size;
  else
    cfg.microblock_size_bytes = size;
  // Constant-payload sweeps must stay within 1% of the target rate.
  double achieved = payload_tx_rate(cfg);
  if (std::abs(achieved / target_tx_rate - 1.0) > 0.01)
    throw std::runtime_error(
        "constant-payload rounding exceeds 1% at interval " +
        std::to_string(interval));
}

}  // namespace

SimConfig config_for_axis_value(const SweepSpec& spec, double value) {
  SimConfig cfg = spec.base;
  double target = payload_tx_rate(spec.base);
  if (spec.axis == SweepAxis::BlockFrequency) {
    if (cfg.protocol == Protocol::Bitcoin)
      cfg.block_interval_sec = value;
    else
      cfg.microblock_interval_sec = value;
    if (spec.constant_payload) set_payload_size(cfg, target);
  } else {
    if (cfg.protocol == Protocol::Bitcoin)
      cfg.block_size_bytes = static_cast<std::uint64_t>(value);
    else
      cfg.microblock_size_bytes = static_cast<std::uint64_t>(value);
  }
  cfg.validate();
  return cfg;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.seeds.empty()) throw std::invalid_argument("sweep needs seeds");
  if (spec.values.empty()) throw std::invalid_argument("sweep needs axis values");

  SweepResult result;
  for (double value : spec.values) {
    std::vector<std::future<RunResult>> futures;
    std::vector<RunResult> runs;
    SimConfig cfg;
    try {
      cfg = config_for_axis_value(spec, value);
    } catch (const std::exception& e) {
      result.failures.push_back(std::to_string(value) + ": " + e.what());
      continue;
    }
    // Seeds run as fully independent simulations; cap the fan-out.
    std::size_t window = std::max<std::uint32_t>(spec.max_parallel, 1);
    for (std::size_t base = 0; base < spec.seeds.size(); base += window) {
      std::size_t end = std::min(base + window, spec.seeds.size());
      futures.clear();
      for (std::size_t i = base; i < end; ++i) {
        SimConfig run_cfg = cfg;
        run_cfg.seed = spec.seeds[i];
        futures.push_back(std::async(std::launch::async, [run_cfg] {
          return run_simulation(run_cfg);
        }));
      }
      for (std::size_t i = base; i < end; ++i) {
        try {
          runs.push_back(futures[i - base].get());
        } catch (const std::exception& e) {
          result.failures.push_back(std::to_string(value) + "/" +
                                    std::to_string(spec.seeds[i]) + ": " +
                                    e.what());
        }
      }
    }
    if (runs.empty()) continue;

    auto aggregate = [&](const std::string& metric, auto getter) {
      SweepCell cell;
      cell.axis_value = value;
      cell.metric = metric;
      double sum = 0.0;
      for (const RunResult& r : runs) {
        std::optional<double> v = getter(r);
        if (!v) continue;
        if (cell.samples == 0) {
          cell.min = cell.max = *v;
        } else {
          cell.min = std::min(cell.min, *v);
          cell.max = std::max(cell.max, *v);
        }
        sum += *v;
        ++cell.samples;
      }
      if (cell.samples > 0) {
        cell.mean = sum / cell.samples;
        result.cells.push_back(cell);
      }
    };

    aggregate("consensus_delay", [](const RunResult& r) {
      return std::optional<double>(r.report.consensus_delay);
    });
    aggregate("fairness", [](const RunResult& r) {
      return std::optional<double>(r.report.fairness);
    });
    aggregate("mining_power_utilization", [](const RunResult& r) {
      return std::optional<double>(r.report.mining_power_utilization);
    });
    aggregate("time_to_prune",
              [](const RunResult& r) { return r.report.time_to_prune; });
    aggregate("time_to_win", [](const RunResult& r) {
      return std::optional<double>(r.report.time_to_win);
    });
    aggregate("throughput_tps", [](const RunResult& r) {
      return std::optional<double>(r.report.throughput_tps);
    });
  }
  return result;
}

std::string SweepResult::to_csv() const {
  std::string out = "axis_value,metric,mean,min,max,samples\n";
  char line[196];
  for (const SweepCell& c : cells) {
    std::snprintf(line, sizeof(line), "%.9g,%s,%.9g,%.9g,%.9g,%u\n",
                  c.axis_value, c.metric.c_str(), c.mean, c.min, c.max,
                  c.samples);
    out += line;
  }
  return out;
}

const SweepCell* SweepResult::find(double axis_value,
                                   const std::string& metric) const {
  for (const SweepCell& c : cells)
    if (c.axis_value == axis_value && c.metric == metric) return &c;
  return nullptr;
}

}  // namespace ngsim
