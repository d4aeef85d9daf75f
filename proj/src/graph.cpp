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

#include "sourceloc/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "sourceloc/error.hpp"

namespace sourceloc {

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges) {
  if (node_count >= kNoNode) throw InputError("graph too large");
  for (Edge& e : edges) {
    if (e.u == e.v) throw InputError("self-loop on node " + std::to_string(e.u));
    if (e.u >= node_count || e.v >= node_count) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") references a node outside [0, " + std::to_string(node_count) + ")");
    }
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    throw InputError("duplicate edge (" + std::to_string(dup->u) + ", " +
                     std::to_string(dup->v) + ")");
  }

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  for (const Edge& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];

  // Edges are sorted by (u, v) with u < v, so filling in edge order leaves
  // every neighbor list ascending: all smaller neighbors of x arrive (via
  // edges (y, x), y < x) before x's own block of larger neighbors.
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  g.neighbors_.resize(2 * edges.size());
  g.incident_.resize(2 * edges.size());
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    g.neighbors_[cursor[e.u]] = e.v;
    g.incident_[cursor[e.u]++] = id;
    g.neighbors_[cursor[e.v]] = e.u;
    g.incident_[cursor[e.v]++] = id;
  }
  g.edges_ = std::move(edges);
  return g;
}

EdgeId Graph::edge_id(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b)) return kNoEdge;
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return kNoEdge;
  return incident_edges(a)[static_cast<std::size_t>(it - nb.begin())];
}

bool Graph::has_edge(NodeId a, NodeId b) const { return edge_id(a, b) != kNoEdge; }

bool Graph::is_tree() const {
  const std::size_t n = node_count();
  if (n == 0 || edge_count() != n - 1) return false;
  const auto dist = hop_distances(*this, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::vector<int> hop_distances(const Graph& g, NodeId source) {
  if (!g.contains(source)) throw InputError("node " + std::to_string(source) + " not in graph");
  std::vector<int> dist(g.node_count(), -1);
  std::vector<NodeId> queue;
  queue.reserve(g.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<std::uint32_t> connected_components(const Graph& g) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(g.node_count(), kUnset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u)) {
        if (label[v] == kUnset) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> relabel(g.node_count(), kNoNode);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!g.contains(nodes[i])) throw InputError("induced_subgraph: node out of range");
    relabel[nodes[i]] = static_cast<NodeId>(i);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (relabel[e.u] != kNoNode && relabel[e.v] != kNoNode) {
      edges.push_back(make_edge(relabel[e.u], relabel[e.v]));
    }
  }
  return Graph::from_edges(nodes.size(), std::move(edges));
}

Graph largest_component(const Graph& g) {
  const auto label = connected_components(g);
  if (label.empty()) return g;
  std::vector<std::size_t> size(*std::max_element(label.begin(), label.end()) + 1, 0);
  for (auto l : label) ++size[l];
  const auto best = static_cast<std::uint32_t>(
      std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (label[v] == best) keep.push_back(v);
  }
  return induced_subgraph(g, keep);
}

}  // namespace sourceloc
