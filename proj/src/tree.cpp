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

#include "sourceloc/tree.hpp"

#include <algorithm>
#include <string>

#include "sourceloc/error.hpp"

namespace sourceloc {

Tree Tree::from_graph(const Graph& g, NodeId root) {
  if (!g.contains(root)) throw InputError("tree root " + std::to_string(root) + " out of range");
  if (!g.is_tree()) {
    throw InputError("graph is not a tree (" + std::to_string(g.node_count()) + " nodes, " +
                     std::to_string(g.edge_count()) + " edges, must be connected and acyclic)");
  }
  std::vector<NodeId> parent(g.node_count(), kNoNode);
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> queue{root};
  seen[root] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  return from_parents(root, std::move(parent));
}

Tree Tree::from_parents(NodeId root, std::vector<NodeId> parent) {
  const std::size_t n = parent.size();
  if (root >= n) throw InputError("tree root out of range");
  if (parent[root] != kNoNode) throw InputError("tree root must not have a parent");

  // Children in CSR form; a node is a member iff it is reachable from the root
  // through child links.
  std::vector<std::size_t> offsets(n + 1, 0);
  std::size_t linked = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (parent[v] == kNoNode) continue;
    if (parent[v] >= n || parent[v] == v) throw InputError("invalid parent pointer");
    ++offsets[parent[v] + 1];
    ++linked;
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<NodeId> children(linked);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (NodeId v = 0; v < n; ++v) {
    if (parent[v] != kNoNode) children[cursor[parent[v]]++] = v;
  }

  Tree t;
  t.root_ = root;
  t.depth_.assign(n, -1);
  t.order_.reserve(linked + 1);
  t.depth_[root] = 0;
  t.order_.push_back(root);
  for (std::size_t head = 0; head < t.order_.size(); ++head) {
    const NodeId u = t.order_[head];
    for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
      const NodeId c = children[i];
      t.depth_[c] = t.depth_[u] + 1;
      t.order_.push_back(c);
    }
  }
  // Anything with a parent but unreachable from the root sits on a cycle (or
  // hangs off one).
  if (t.order_.size() != linked + 1) throw InputError("parent pointers contain a cycle");

  t.position_.assign(n, kNoNode);
  for (std::size_t i = 0; i < t.order_.size(); ++i) t.position_[t.order_[i]] = static_cast<NodeId>(i);
  t.parent_position_.resize(t.order_.size());
  t.parent_position_[0] = kNoNode;
  for (std::size_t i = 1; i < t.order_.size(); ++i) {
    t.parent_position_[i] = t.position_[parent[t.order_[i]]];
  }

  std::vector<Edge> edges;
  edges.reserve(linked);
  for (NodeId v = 0; v < n; ++v) {
    if (parent[v] != kNoNode) edges.push_back(make_edge(v, parent[v]));
  }
  t.graph_ = Graph::from_edges(n, std::move(edges));
  t.parent_ = std::move(parent);
  return t;
}

void Tree::require(NodeId v) const {
  if (!contains(v)) throw InputError("node " + std::to_string(v) + " is not in the tree");
}

NodeId Tree::lca(NodeId a, NodeId b) const {
  require(a);
  require(b);
  while (depth_[a] > depth_[b]) a = parent_[a];
  while (depth_[b] > depth_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

std::size_t Tree::distance(NodeId a, NodeId b) const {
  const NodeId m = lca(a, b);
  return static_cast<std::size_t>(depth_[a] + depth_[b] - 2 * depth_[m]);
}

Tree Tree::rerooted(NodeId new_root) const {
  require(new_root);
  std::vector<NodeId> parent(node_count(), kNoNode);
  std::vector<bool> seen(node_count(), false);
  std::vector<NodeId> queue{new_root};
  seen[new_root] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : graph_.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  return from_parents(new_root, std::move(parent));
}

Tree bfs_tree(const Graph& g, NodeId root) {
  const auto dist = hop_distances(g, root);
  std::vector<NodeId> parent(g.node_count(), kNoNode);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (dist[v] <= 0) continue;
    // Neighbor lists are ascending, so the first hit is the smallest index.
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == dist[v] - 1) {
        parent[v] = w;
        break;
      }
    }
  }
  return Tree::from_parents(root, std::move(parent));
}

Path path(const Tree& t, NodeId u, NodeId v) {
  const NodeId m = t.lca(u, v);
  Path p{u, v, {}};
  p.edges.reserve(t.distance(u, v));
  for (NodeId x = u; x != m; x = t.parent(x)) p.edges.push_back(make_edge(x, t.parent(x)));
  const std::size_t up = p.edges.size();
  for (NodeId x = v; x != m; x = t.parent(x)) p.edges.push_back(make_edge(x, t.parent(x)));
  std::reverse(p.edges.begin() + static_cast<std::ptrdiff_t>(up), p.edges.end());
  return p;
}

std::size_t path_overlap(const Tree& t, NodeId anchor, NodeId x, NodeId y) {
  // Both paths leave the anchor together and split at the branch point
  // towards x and y, so the shared part has length (|ax| + |ay| - |xy|) / 2.
  return (t.distance(anchor, x) + t.distance(anchor, y) - t.distance(x, y)) / 2;
}

}  // namespace sourceloc
