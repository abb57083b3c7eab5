// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "ngsim/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ngsim {

LatencyHistogram LatencyHistogram::parse(const std::string& text,
                                         const std::string& origin) {
  LatencyHistogram h;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double latency, mass;
    if (!(ls >> latency)) continue;  // blank line
    if (!(ls >> mass))
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'latency_seconds probability'");
    h.buckets.emplace_back(latency, mass);
  }
  h.validate(origin);
  return h;
}

LatencyHistogram LatencyHistogram::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open latency histogram: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void LatencyHistogram::validate(const std::string& origin) const {
  if (buckets.empty())
    throw std::runtime_error(origin + ": empty latency histogram");
  double total = 0.0;
  for (const auto& [latency, mass] : buckets) {
    if (latency <= 0.0)
      throw std::runtime_error(origin + ": latencies must be positive");
    if (mass < 0.0)
      throw std::runtime_error(origin + ": negative probability mass");
    total += mass;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw std::runtime_error(origin + ": probability masses sum to " +
                             std::to_string(total) + ", expected 1");
}

double LatencyHistogram::sample(Rng& rng) const {
  double u = rng.uniform01();
  double acc = 0.0;
  for (const auto& [latency, mass] : buckets) {
    acc += mass;
    if (u < acc) return latency;
  }
  return buckets.back().first;
}

LatencyHistogram LatencyHistogram::default_internet() {
  return LatencyHistogram{{{0.020, 0.02},
                           {0.030, 0.04},
                           {0.045, 0.07},
                           {0.060, 0.10},
                           {0.080, 0.14},
                           {0.100, 0.16},
                           {0.130, 0.14},
                           {0.170, 0.11},
                           {0.220, 0.08},
                           {0.280, 0.05},
                           {0.350, 0.04},
                           {0.450, 0.025},
                           {0.600, 0.015},
                           {0.800, 0.01}}};
}

LatencyHistogram LatencyHistogram::miner_effective() {
  return LatencyHistogram{{{0.8, 0.03},
                           {1.2, 0.07},
                           {1.6, 0.12},
                           {2.0, 0.16},
                           {2.5, 0.24},
                           {3.2, 0.16},
                           {4.0, 0.12},
                           {5.0, 0.06},
                           {6.5, 0.03},
                           {8.0, 0.01}}};
}

namespace {

bool bfs_connected(const std::vector<std::vector<std::uint32_t>>& adj) {
  if (adj.empty()) return true;
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::uint32_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::uint32_t u = stack.back();
    stack.pop_back();
    for (std::uint32_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == adj.size();
}

}  // namespace

Topology Topology::generate(std::uint32_t n, std::uint32_t min_degree,
                            const LatencyHistogram& histogram,
                            double bandwidth_bps, std::uint64_t seed,
                            std::uint32_t max_attempts) {
  if (n <= min_degree)
    throw std::invalid_argument("need more nodes than the minimum degree");
  if (bandwidth_bps <= 0.0)
    throw std::invalid_argument("bandwidth must be positive");
  histogram.validate("histogram");

  for (std::uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(Rng::derive(seed, 0x746f706fULL, attempt));
    std::vector<std::set<std::uint32_t>> adj(n);
    // Every node picks random peers until it reaches the minimum degree,
    // like the reference client's outbound connections.
    for (std::uint32_t u = 0; u < n; ++u) {
      while (adj[u].size() < min_degree) {
        auto v = static_cast<std::uint32_t>(rng.uniform_index(n));
        if (v == u || adj[u].count(v)) continue;
        adj[u].insert(v);
        adj[v].insert(u);
      }
    }
    std::vector<std::vector<std::uint32_t>> lists(n);
    for (std::uint32_t u = 0; u < n; ++u)
      lists[u].assign(adj[u].begin(), adj[u].end());
    if (!bfs_connected(lists)) continue;

    Topology topo;
    topo.n = n;
    topo.bandwidth_bps = bandwidth_bps;
    topo.neighbors = std::move(lists);
    topo.latencies.resize(n);
    // Sample each undirected edge once, in deterministic (u < v) order.
    std::vector<std::vector<double>> lat(n);
    for (std::uint32_t u = 0; u < n; ++u)
      lat[u].resize(topo.neighbors[u].size(), 0.0);
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::size_t k = 0; k < topo.neighbors[u].size(); ++k) {
        std::uint32_t v = topo.neighbors[u][k];
        if (v < u) continue;
        double l = histogram.sample(rng);
        lat[u][k] = l;
        auto pos = std::lower_bound(topo.neighbors[v].begin(),
                                    topo.neighbors[v].end(), u) -
                   topo.neighbors[v].begin();
        lat[v][static_cast<std::size_t>(pos)] = l;
      }
    }
    topo.latencies = std::move(lat);
    return topo;
  }
  throw std::runtime_error("failed to generate a connected topology");
}

Topology Topology::from_edges(
    std::uint32_t n,
    const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges,
    double bandwidth_bps) {
  Topology topo;
  topo.n = n;
  topo.bandwidth_bps = bandwidth_bps;
  topo.neighbors.resize(n);
  topo.latencies.resize(n);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> tmp(n);
  for (const auto& [u, v, l] : edges) {
    tmp[u].emplace_back(v, l);
    tmp[v].emplace_back(u, l);
  }
  for (std::uint32_t u = 0; u < n; ++u) {
    std::sort(tmp[u].begin(), tmp[u].end());
    for (const auto& [v, l] : tmp[u]) {
      topo.neighbors[u].push_back(v);
      topo.latencies[u].push_back(l);
    }
  }
  return topo;
}

double Topology::latency(std::uint32_t u, std::uint32_t v) const {
  const auto& nb = neighbors[u];
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v)
    throw std::out_of_range("no such edge");
  return latencies[u][static_cast<std::size_t>(it - nb.begin())];
}

bool Topology::connected() const { return bfs_connected(neighbors); }

std::uint32_t Topology::min_degree() const {
  std::uint32_t d = n ? static_cast<std::uint32_t>(neighbors[0].size()) : 0;
  for (const auto& nb : neighbors)
    d = std::min(d, static_cast<std::uint32_t>(nb.size()));
  return d;
}

std::string Topology::describe() const {
  std::string out = "# nodes " + std::to_string(n) + " bandwidth_bps " +
                    std::to_string(bandwidth_bps) + "\n# u v latency_sec\n";
  char line[64];
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::size_t k = 0; k < neighbors[u].size(); ++k) {
      std::uint32_t v = neighbors[u][k];
      if (v < u) continue;
      std::snprintf(line, sizeof(line), "%u %u %.6f\n", u, v, latencies[u][k]);
      out += line;
    }
  }
  return out;
}

std::vector<double> flood_arrival_times(const Topology& topo,
                                        std::uint32_t origin,
                                        std::uint64_t size_bytes,
                                        double verify_sec_per_byte) {
  // First-receipt flooding is shortest-path propagation under the edge
  // delay metric.
  std::vector<double> arrival(topo.n, std::numeric_limits<double>::infinity());
  EventQueue queue;
  arrival[origin] = 0.0;
  queue.push(SimEvent{0.0, 0, EventKind::MessageArrival, origin, origin});
  while (!queue.empty()) {
    SimEvent ev = queue.pop();
    std::uint32_t u = ev.node;
    if (ev.time > arrival[u]) continue;  // stale duplicate
    for (std::size_t k = 0; k < topo.neighbors[u].size(); ++k) {
      std::uint32_t v = topo.neighbors[u][k];
      double t = ev.time + transfer_delay(size_bytes, topo.latencies[u][k],
                                          topo.bandwidth_bps,
                                          verify_sec_per_byte);
      if (t < arrival[v]) {
        arrival[v] = t;
        queue.push(SimEvent{t, 0, EventKind::MessageArrival, v, u});
      }
    }
  }
  return arrival;
}

}  // namespace ngsim
