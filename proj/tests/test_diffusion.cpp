// Copyright 2026 The sourceloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "sourceloc/diffusion.hpp"
#include "sourceloc/error.hpp"

using namespace sourceloc;
using namespace sourceloc::testing;

namespace {

// Minimum delay over all simple paths from `source`, by exhaustive DFS.
std::vector<double> brute_force_arrivals(const Graph& g, NodeId source, const std::vector<double>& w) {
  std::vector<double> best(g.node_count(), kNever);
  std::vector<bool> on_path(g.node_count(), false);
  std::function<void(NodeId, double)> walk = [&](NodeId u, double t) {
    best[u] = std::min(best[u], t);
    on_path[u] = true;
    const auto nbrs = g.neighbors(u);
    const auto ids = g.incident_edges(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (!on_path[nbrs[i]]) walk(nbrs[i], t + w[ids[i]]);
    }
    on_path[u] = false;
  };
  walk(source, 0.0);
  return best;
}

// Random tree on n nodes with `extra` additional random edges.
Graph sparse_graph(std::size_t n, std::size_t extra, std::uint64_t seed) {
  const Graph tree = generate_random_tree(n, seed);
  std::vector<Edge> edges(tree.edges().begin(), tree.edges().end());
  Rng rng = make_rng(derive_seed(seed, 7));
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  while (extra > 0) {
    const NodeId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    const Edge e = make_edge(a, b);
    if (std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
    edges.push_back(e);
    --extra;
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

TEST_SUITE("diffusion") {
  TEST_CASE("delay model validation") {
    CHECK_THROWS_AS((DelayModel{0.0, 1.0}.validate()), InputError);
    CHECK_THROWS_AS((DelayModel{1.0, -1.0}.validate()), InputError);
    CHECK((DelayModel{2.0, 1.0}.low_ratio()));
    CHECK_FALSE((DelayModel{4.0, 1.0}.low_ratio()));
    CHECK_FALSE((DelayModel{4.0, 0.0}.low_ratio()));
  }

  TEST_CASE("zero variance gives constant delays") {
    const auto d = sample_delays(generate_path(50), {3.0, 0.0}, 1);
    for (double x : d) CHECK(x == 3.0);
  }

  TEST_CASE("sampled delays are positive with the requested mean") {
    const Graph g = generate_path(100001);
    const auto d = sample_delays(g, {4.0, 1.0}, 5);
    REQUIRE(d.size() == 100000);
    for (double x : d) REQUIRE(x > 0.0);
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    CHECK(mean >= 3.99);
    CHECK(mean <= 4.01);
    CHECK(sample_delays(g, {4.0, 1.0}, 5) == d);
  }

  TEST_CASE("small worked arrivals") {
    const Graph two = generate_path(2);
    const DiffusionTrace t2 = simulate(two, 0, 0.0, {4.0, 0.0}, 1);
    CHECK(t2.arrival_time[1] == 4.0);
    CHECK(t2.arrival_parent[1] == 0);
    CHECK(t2.arrival_parent[0] == kNoNode);

    const DiffusionTrace chain = simulate(generate_path(5), 0, 10.0, {1.0, 0.0}, 1);
    for (NodeId v = 0; v < 5; ++v) CHECK(chain.arrival_time[v] == 10.0 + v);

    // Triangle with the direct edge slower than the detour.
    const Graph tri = generate_complete(3);
    std::vector<double> w(3);
    w[tri.edge_id(0, 1)] = 1.0;
    w[tri.edge_id(1, 2)] = 1.0;
    w[tri.edge_id(0, 2)] = 5.0;
    const DiffusionTrace tt = propagate(tri, 0, 0.0, w);
    CHECK(tt.arrival_time[2] == 2.0);
    CHECK(tt.arrival_parent[2] == 1);
  }

  TEST_CASE("equal arrivals keep the smaller parent") {
    const DiffusionTrace t = simulate(generate_cycle(4), 0, 0.0, {1.0, 0.0}, 1);
    CHECK(t.arrival_time[2] == 2.0);
    CHECK(t.arrival_parent[2] == 1);
  }

  TEST_CASE("arrivals match exhaustive simple-path search") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Graph g = sparse_graph(20, 6, s);
      const auto w = sample_delays(g, {1.0, 0.5}, s);
      const NodeId src = static_cast<NodeId>(s % 20);
      const DiffusionTrace t = propagate(g, src, 0.0, w);
      const auto expect = brute_force_arrivals(g, src, w);
      for (NodeId v = 0; v < 20; ++v) CHECK(t.arrival_time[v] == doctest::Approx(expect[v]).epsilon(1e-12));
    }
  }

  TEST_CASE("trace invariants") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Graph g = generate_er(60, 0.04, s);
      const DiffusionTrace t = simulate(g, 0, 3.0, {1.0, 0.3}, s);
      const auto hops = hop_distances(g, 0);
      for (NodeId v = 0; v < 60; ++v) {
        CHECK(t.informed(v) == (hops[v] >= 0));
        if (!t.informed(v) || v == 0) continue;
        const NodeId p = t.arrival_parent[v];
        REQUIRE(g.has_edge(p, v));
        CHECK(t.arrival_time[v] == doctest::Approx(t.arrival_time[p] + t.edge_delay[g.edge_id(p, v)]));
        CHECK(t.arrival_time[v] > t.arrival_time[p]);
      }
    }
  }

  TEST_CASE("observe") {
    // o1 - s - o2 with unit delays.
    const Graph g = generate_path(3);
    const DiffusionTrace t = simulate(g, 1, 7.0, {1.0, 0.0}, 1);
    const Observation obs = observe(t, ObserverSet({0, 2}, 3));
    REQUIRE(obs.active_count() == 2);
    CHECK(obs.record(0) == ObservationRecord{0, 1, 8.0});
    CHECK(obs.record(2) == ObservationRecord{2, 1, 8.0});
    CHECK_THROWS_AS(obs.record(1), InputError);

    const Observation with_source = observe(t, ObserverSet({0, 1}, 3));
    CHECK(with_source.active_observers == std::vector<NodeId>{0});
    CHECK(with_source.observers == std::vector<NodeId>{0, 1});

    const Graph split = Graph::from_edges(4, {{0, 1}, {2, 3}});
    const Observation partial = observe(simulate(split, 0, 0.0, {1.0, 0.0}, 1), ObserverSet({1, 3}, 4));
    CHECK(partial.active_observers == std::vector<NodeId>{1});

    const DiffusionTrace chain = simulate(generate_path(6), 0, 5.0, {1.0, 0.0}, 1);
    const Observation limited = observe(chain, ObserverSet({2, 5}, 6), {3.0});
    CHECK(limited.active_observers == std::vector<NodeId>{2});
  }

  TEST_CASE("single cascade equals simulate then observe") {
    const Graph g = generate_random_tree(30, 3);
    const ObserverSet obs({1, 5, 9}, 30);
    const std::uint64_t seeds[] = {42};
    const auto cascades = simulate_cascades(g, 0, {1.0, 0.25}, obs, seeds, {0.0, {}});
    REQUIRE(cascades.size() == 1);
    const Observation direct = observe(simulate(g, 0, 0.0, {1.0, 0.25}, 42), obs);
    CHECK(cascades[0].records == direct.records);
  }

  TEST_CASE("zero-variance cascades differ only by start time") {
    const Graph g = generate_random_tree(30, 3);
    const ObserverSet obs({1, 5, 9}, 30);
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4};
    const auto cascades = simulate_cascades(g, 0, {2.0, 0.0}, obs, seeds);
    for (const auto& c : cascades) {
      REQUIRE(c.active_count() == 3);
      for (std::size_t i = 1; i < 3; ++i) {
        CHECK(c.records[i].time - c.records[0].time ==
              doctest::Approx(cascades[0].records[i].time - cascades[0].records[0].time));
      }
    }
    CHECK(cascades[0].records[0].time != cascades[1].records[0].time);
  }

  TEST_CASE("averaged cascade delays concentrate around the mean") {
    // 0 - 1 - 2 - 3 - 4, source 1, observers 0 and 4: d = (three delays) - (one delay),
    // mean 2 mu, variance 4 sigma^2.
    const Graph g = generate_path(5);
    const ObserverSet obs({0, 4}, 5);
    const std::size_t c = 4000;
    std::vector<std::uint64_t> seeds(c);
    std::iota(seeds.begin(), seeds.end(), 100);
    const double mu = 1.0, sigma = 0.25;
    const auto cascades = simulate_cascades(g, 1, {mu, sigma}, obs, seeds);
    double sum = 0.0, sq = 0.0;
    for (const auto& o : cascades) {
      const double d = o.record(4).time - o.record(0).time;
      sum += d;
      sq += d * d;
    }
    const double mean = sum / static_cast<double>(c);
    const double var = sq / static_cast<double>(c) - mean * mean;
    CHECK(std::abs(mean - 2.0 * mu) <= 4.0 * std::sqrt(4.0 * sigma * sigma / static_cast<double>(c)));
    CHECK(var == doctest::Approx(4.0 * sigma * sigma).epsilon(0.1));
  }

  TEST_CASE("observation csv round trip") {
    const Observation obs = make_observation({{3, 2, 1.5}, {0, 1, 10.0}, {7, 6, 1e-12}});
    std::stringstream ss;
    write_observations(ss, obs);
    CHECK(ss.str().rfind("observer,from_node,time\n", 0) == 0);
    const Observation back = read_observations(ss);
    CHECK(back.records == obs.records);
    CHECK(back.active_observers == std::vector<NodeId>{0, 3, 7});

    std::stringstream bad_header("a,b,c\n0,1,2\n");
    CHECK_THROWS_AS(read_observations(bad_header), InputError);
    std::stringstream dup("observer,from_node,time\n0,1,2\n0,1,3\n");
    CHECK_THROWS_AS(read_observations(dup), InputError);
    std::stringstream junk("observer,from_node,time\n0,1\n");
    CHECK_THROWS_WITH_AS(read_observations(junk, "obs.csv"), doctest::Contains("obs.csv:2"), InputError);
  }

  TEST_CASE("format_time") {
    CHECK(format_time(4.0) == "4.0");
    CHECK(format_time(1.5) == "1.5");
    CHECK(format_time(1e-12) == "1e-12");
    CHECK(format_time(1.0 / 3.0) == "0.333333333");
  }

  TEST_CASE("trace dump marks unreached nodes") {
    const Graph g = Graph::from_edges(3, {{0, 1}});
    std::stringstream ss;
    write_trace(ss, simulate(g, 0, 0.0, {2.0, 0.0}, 1));
    CHECK(ss.str() == "node,arrival_time,parent\n0,0.0,\n1,2.0,0\n2,never,\n");
  }
}
