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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sourceloc {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Immutable simple undirected graph on nodes [0, N).
///
/// Adjacency is stored in CSR form; every neighbor list is sorted ascending and
/// carries the id of the edge it belongs to, so per-edge data (sampled delays)
/// can live in flat arrays indexed by EdgeId.
class Graph {
 public:
  Graph() = default;

  /// Throws InputError on self-loops, duplicate edges or ids >= node_count.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Edges sorted lexicographically; EdgeId is the index into this list.
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {neighbors_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::span<const EdgeId> incident_edges(NodeId u) const {
    return {incident_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  bool contains(NodeId u) const { return u < node_count(); }
  bool has_edge(NodeId a, NodeId b) const;
  /// kNoEdge when absent.
  EdgeId edge_id(NodeId a, NodeId b) const;

  bool is_tree() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count() == b.node_count() && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<EdgeId> incident_;
  std::vector<Edge> edges_;
};

/// Hop distances from `source`; unreachable nodes get -1.
std::vector<int> hop_distances(const Graph& g, NodeId source);

/// Component label per node, labels assigned in order of smallest member.
std::vector<std::uint32_t> connected_components(const Graph& g);

/// Subgraph induced by `nodes` (relabelled to 0..size-1 in the given order).
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// Largest connected component, ties to the one holding the smallest id.
/// Node order is preserved.
Graph largest_component(const Graph& g);

// Generators. Identical arguments always yield an identical graph.

/// G(n, p): every pair included independently with probability p.
Graph generate_er(std::size_t n, double p, std::uint64_t seed);

/// Preferential attachment from an (m+1)-clique; every later node attaches to
/// m distinct existing nodes chosen with probability proportional to degree.
Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Apollonian network after `generations` rounds of face subdivision.
/// Nodes are numbered in insertion order, so every prefix of length >= 3
/// induces a connected graph.
Graph generate_apollonian(std::size_t generations);

/// Apollonian network truncated to its first n nodes (n >= 3).
Graph generate_apollonian_prefix(std::size_t n);

/// Uniform random labelled tree on n nodes (Prüfer decoding).
Graph generate_random_tree(std::size_t n, std::uint64_t seed);

Graph generate_path(std::size_t n);
/// Center 0 with leaves 1..leaves.
Graph generate_star(std::size_t leaves);
Graph generate_cycle(std::size_t n);
Graph generate_complete(std::size_t n);

// Edge-list text format: `u v` per line, 0-based, `#` comments. A
// `# nodes: N` comment fixes the node count so trailing isolated nodes
// survive a round trip; otherwise N = max id + 1.

Graph read_edge_list(std::istream& in, const std::string& source_name = "<stream>");
Graph read_edge_list_file(const std::string& path);
/// Writes the `# nodes:` line, then one edge per line.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace sourceloc
