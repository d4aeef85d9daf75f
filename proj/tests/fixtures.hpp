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

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sourceloc/diffusion.hpp"
#include "sourceloc/graph.hpp"
#include "sourceloc/placement.hpp"
#include "sourceloc/random.hpp"
#include "sourceloc/tree.hpp"

namespace sourceloc::testing {

// Three observers around one junction: o1 = 0 reaches junction j = 2 in two hops,
// o2 = 5 sits three hops past j, o3 = 7 two hops past j.
//
//   0 - 1 - 2 - 3 - 4 - 5
//           |
//           6 - 7
inline Graph junction_tree() {
  return Graph::from_edges(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}, {6, 7}});
}
inline constexpr NodeId kJunctionO1 = 0, kJunctionO2 = 5, kJunctionO3 = 7, kJunction = 2;

// Observation built by hand from arrival times (absolute).
inline Observation make_observation(std::vector<ObservationRecord> records,
                                    std::vector<NodeId> observers = {}) {
  Observation obs;
  obs.records = std::move(records);
  obs.observers = std::move(observers);
  obs.normalize();
  return obs;
}

// Random tree plus a random observer set and a non-observer source.
struct TreeInstance {
  Graph graph;
  Tree tree;
  ObserverSet observers;
  NodeId source = 0;
};

inline TreeInstance random_tree_instance(std::size_t n, std::size_t k, std::uint64_t seed) {
  TreeInstance inst;
  inst.graph = generate_random_tree(n, derive_seed(seed, 0));
  inst.tree = Tree::from_graph(inst.graph);
  inst.observers = place_random(inst.graph, k, derive_seed(seed, 1));
  Rng rng = make_rng(derive_seed(seed, 2));
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < n; ++v) {
    if (!inst.observers.contains(v)) pool.push_back(v);
  }
  inst.source = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  return inst;
}

}  // namespace sourceloc::testing
