// Copyright (c) 2026 The ngsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <queue>

#include "ngsim/netsim.hpp"

using namespace ngsim;
using doctest::Approx;

namespace {

// Independent all-pairs-from-origin oracle: textbook Dijkstra over the edge
// delay metric.
std::vector<double> dijkstra(const Topology& topo, std::uint32_t origin,
                             std::uint64_t size, double verify) {
  std::vector<double> dist(topo.n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[origin] = 0.0;
  pq.push({0.0, origin});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (std::size_t k = 0; k < topo.neighbors[u].size(); ++k) {
      std::uint32_t v = topo.neighbors[u][k];
      double nd = d + topo.latencies[u][k] +
                  8.0 * double(size) / topo.bandwidth_bps + verify * double(size);
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace

TEST_CASE("histogram file format") {
  auto h = LatencyHistogram::parse(
      "# comment\n0.05 0.5\n0.15 0.25 # trailing\n\n0.30 0.25\n", "test");
  REQUIRE(h.buckets.size() == 3);
  CHECK(h.buckets[1].first == 0.15);

  CHECK_THROWS_WITH_AS(LatencyHistogram::parse("0.05\n", "f"),
                       doctest::Contains("f:1"), std::runtime_error);
  CHECK_THROWS(LatencyHistogram::parse("0.05 0.4\n0.1 0.4\n", "f"));  // mass != 1
  CHECK_THROWS(LatencyHistogram::parse("-1 1.0\n", "f"));
  CHECK_THROWS(LatencyHistogram::parse("", "f"));
}

TEST_CASE("builtin histograms are well formed") {
  LatencyHistogram::default_internet().validate("default");
  LatencyHistogram::miner_effective().validate("miner");
  Rng rng(3);
  for (int i = 0; i < 100; ++i)
    CHECK(LatencyHistogram::default_internet().sample(rng) > 0.0);
}

TEST_CASE("six nodes at minimum degree five force a complete graph") {
  auto topo = Topology::generate(6, 5, LatencyHistogram::default_internet(),
                                 1e5, 42);
  for (std::uint32_t u = 0; u < 6; ++u) CHECK(topo.degree(u) == 5);
}

TEST_CASE("generated topologies are connected with the minimum degree") {
  auto topo = Topology::generate(100, 5, LatencyHistogram::default_internet(),
                                 1e5, 7);
  CHECK(topo.connected());  // BFS reachability oracle
  CHECK(topo.min_degree() >= 5);
  // Latencies are symmetric and positive.
  for (std::uint32_t u = 0; u < topo.n; ++u)
    for (std::uint32_t v : topo.neighbors[u]) {
      CHECK(topo.latency(u, v) == topo.latency(v, u));
      CHECK(topo.latency(u, v) > 0.0);
    }
}

TEST_CASE("topology generation is deterministic per seed") {
  auto a = Topology::generate(100, 5, LatencyHistogram::default_internet(), 1e5, 9);
  auto b = Topology::generate(100, 5, LatencyHistogram::default_internet(), 1e5, 9);
  CHECK(a.neighbors == b.neighbors);
  CHECK(a.latencies == b.latencies);
  auto c = Topology::generate(100, 5, LatencyHistogram::default_internet(), 1e5, 10);
  CHECK(a.neighbors != c.neighbors);
}

TEST_CASE("degenerate topology parameters are rejected") {
  CHECK_THROWS(Topology::generate(5, 5, LatencyHistogram::default_internet(), 1e5, 1));
}

TEST_CASE("transfer delay arithmetic") {
  CHECK(transfer_delay(0, 0.25, 1e5) == 0.25);  // zero payload rides latency
  // 1 MB over 100 kbit/s serializes in exactly 80 seconds.
  CHECK(transfer_delay(1'000'000, 0.0, 1e5) == Approx(80.0).epsilon(1e-12));
  // Doubling the size doubles the serialization term exactly.
  double lat = 0.1;
  double one = transfer_delay(50'000, lat, 1e5) - lat;
  double two = transfer_delay(100'000, lat, 1e5) - lat;
  CHECK(two == Approx(2.0 * one).epsilon(1e-12));
  // Receiver-side verification is per byte.
  CHECK(transfer_delay(1000, 0.0, 1e9, 1e-3) == Approx(1.0 + 8e-6).epsilon(1e-9));
}

TEST_CASE("flooding a line sums the link delays") {
  Topology line = Topology::from_edges(3, {{0, 1, 0.2}, {1, 2, 0.3}}, 1e5);
  auto arrival = flood_arrival_times(line, 0, 10'000);
  double hop1 = transfer_delay(10'000, 0.2, 1e5);
  double hop2 = transfer_delay(10'000, 0.3, 1e5);
  CHECK(arrival[1] == Approx(hop1).epsilon(1e-12));
  CHECK(arrival[2] == Approx(hop1 + hop2).epsilon(1e-12));
}

TEST_CASE("flooding reaches everyone along shortest delay paths") {
  auto topo = Topology::generate(100, 5, LatencyHistogram::default_internet(),
                                 1e5, 31);
  auto flood = flood_arrival_times(topo, 13, 20'000, 1e-7);
  auto oracle = dijkstra(topo, 13, 20'000, 1e-7);
  for (std::uint32_t u = 0; u < topo.n; ++u) {
    CHECK(std::isfinite(flood[u]));
    CHECK(flood[u] == Approx(oracle[u]).epsilon(1e-12));
  }
}

TEST_CASE("event queue pops in time order with FIFO ties") {
  EventQueue q;
  SimEvent a;
  a.time = 5.0;
  a.node = 1;
  SimEvent b;
  b.time = 3.0;
  b.node = 2;
  SimEvent c;
  c.time = 5.0;
  c.node = 3;
  q.push(a);
  q.push(b);
  q.push(c);
  CHECK(q.pop().node == 2);
  CHECK(q.pop().node == 1);  // inserted before the other 5.0 event
  CHECK(q.pop().node == 3);
  CHECK(q.empty());
}

TEST_CASE("propagation time is affine in block size") {
  auto topo = Topology::generate(100, 5, LatencyHistogram::default_internet(),
                                 1e5, 17);
  std::vector<double> sizes{50e3, 100e3, 200e3, 400e3, 800e3};
  std::vector<double> p90s;
  for (double s : sizes) {
    auto arrival = flood_arrival_times(topo, 0, std::uint64_t(s));
    std::sort(arrival.begin(), arrival.end());
    p90s.push_back(arrival[std::size_t(0.9 * arrival.size())]);
  }
  // Least squares r^2 against size.
  double n = sizes.size(), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sx += sizes[i];
    sy += p90s[i];
    sxx += sizes[i] * sizes[i];
    sxy += sizes[i] * p90s[i];
    syy += p90s[i] * p90s[i];
  }
  double r = (n * sxy - sx * sy) /
             std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(r * r > 0.99);
}
