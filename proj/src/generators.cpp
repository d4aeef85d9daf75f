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

#include <algorithm>
#include <array>
#include <string>

#include "sourceloc/error.hpp"
#include "sourceloc/graph.hpp"
#include "sourceloc/random.hpp"

namespace sourceloc {

Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  if (n < 1) throw InputError("generate_er: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("generate_er: p must lie in [0, 1]");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (unit(rng) < p) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw InputError("generate_ba: requires 1 <= m < n");
  Rng rng = make_rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m * (m + 1) / 2 + (n - m - 1) * m);
  // Every endpoint of every edge, so a uniform pick is degree-proportional.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * edges.capacity());
  for (NodeId u = 0; u <= m; ++u) {
    for (NodeId v = u + 1; v <= m; ++v) {
      edges.push_back({u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  for (NodeId x = static_cast<NodeId>(m + 1); x < n; ++x) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < m) {
      const NodeId t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back(make_edge(t, x));
      endpoints.push_back(t);
      endpoints.push_back(x);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

namespace {

// Runs face subdivision until `limit` nodes exist or `generations` rounds ran.
Graph apollonian(std::size_t generations, std::size_t limit) {
  std::vector<Edge> edges = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<std::array<NodeId, 3>> faces = {{0, 1, 2}};
  NodeId next = 3;
  for (std::size_t g = 0; g < generations && next < limit; ++g) {
    std::vector<std::array<NodeId, 3>> refined;
    refined.reserve(3 * faces.size());
    for (const auto& [a, b, c] : faces) {
      if (next >= limit) break;
      const NodeId x = next++;
      edges.push_back({a, x});
      edges.push_back({b, x});
      edges.push_back({c, x});
      refined.push_back({a, b, x});
      refined.push_back({a, c, x});
      refined.push_back({b, c, x});
    }
    faces = std::move(refined);
  }
  return Graph::from_edges(next, std::move(edges));
}

}  // namespace

Graph generate_apollonian(std::size_t generations) {
  if (generations > 18) throw InputError("generate_apollonian: generations too large");
  return apollonian(generations, std::numeric_limits<std::size_t>::max());
}

Graph generate_apollonian_prefix(std::size_t n) {
  if (n < 3) throw InputError("generate_apollonian_prefix: n must be >= 3");
  return apollonian(std::numeric_limits<std::size_t>::max(), n);
}

Graph generate_random_tree(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InputError("generate_random_tree: n must be >= 1");
  if (n == 1) return Graph::from_edges(1, {});
  if (n == 2) return Graph::from_edges(2, {{0, 1}});
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<NodeId> code(n - 2);
  for (auto& c : code) c = pick(rng);

  // Linear-time Prüfer decoding.
  std::vector<std::size_t> degree(n, 1);
  for (NodeId c : code) ++degree[c];
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  NodeId ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  NodeId leaf = ptr;
  for (NodeId c : code) {
    edges.push_back(make_edge(leaf, c));
    if (--degree[c] == 1 && c < ptr) {
      leaf = c;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back(make_edge(leaf, static_cast<NodeId>(n - 1)));
  return Graph::from_edges(n, std::move(edges));
}

Graph generate_path(std::size_t n) {
  if (n < 1) throw InputError("generate_path: n must be >= 1");
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return Graph::from_edges(n, std::move(edges));
}

Graph generate_star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId u = 1; u <= leaves; ++u) edges.push_back({0, u});
  return Graph::from_edges(leaves + 1, std::move(edges));
}

Graph generate_cycle(std::size_t n) {
  if (n < 3) throw InputError("generate_cycle: n must be >= 3");
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  edges.push_back({0, static_cast<NodeId>(n - 1)});
  return Graph::from_edges(n, std::move(edges));
}

Graph generate_complete(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace sourceloc
