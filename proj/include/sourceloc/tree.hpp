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
#include <span>
#include <vector>

#include "sourceloc/graph.hpp"

namespace sourceloc {

/// Rooted tree over a subset of the node ids [0, node_count).
///
/// Trees built from a whole graph span every id. Trees built by bfs_tree span
/// only the root's connected component; ids outside it are not members.
class Tree {
 public:
  Tree() = default;

  /// Throws InputError unless `g` is connected with N - 1 edges.
  static Tree from_graph(const Graph& g, NodeId root = 0);

  /// `parent[v] == kNoNode` marks non-members (and the root). Throws
  /// InputError if the parent pointers contain a cycle.
  static Tree from_parents(NodeId root, std::vector<NodeId> parent);

  NodeId root() const { return root_; }
  std::size_t node_count() const { return parent_.size(); }
  std::size_t size() const { return order_.size(); }
  bool contains(NodeId v) const { return v < depth_.size() && depth_[v] >= 0; }

  NodeId parent(NodeId v) const { return parent_[v]; }
  int depth(NodeId v) const { return depth_[v]; }
  std::span<const int> depths() const { return depth_; }
  /// Members in breadth-first order from the root.
  std::span<const NodeId> order() const { return order_; }
  /// Index of v in order(); kNoNode for non-members.
  NodeId position(NodeId v) const { return position_[v]; }
  /// Position of each member's parent, indexed by position; kNoNode for the root.
  /// Non-decreasing, so a pass over order() reads parents as a stream.
  std::span<const NodeId> parent_positions() const { return parent_position_; }
  /// The tree's own edges as an undirected graph over the full id range.
  const Graph& graph() const { return graph_; }

  NodeId lca(NodeId a, NodeId b) const;
  std::size_t distance(NodeId a, NodeId b) const;

  Tree rerooted(NodeId new_root) const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.root_ == b.root_ && a.parent_ == b.parent_;
  }

 private:
  void require(NodeId v) const;

  NodeId root_ = kNoNode;
  std::vector<NodeId> parent_;
  std::vector<int> depth_;
  std::vector<NodeId> order_;
  std::vector<NodeId> position_;
  std::vector<NodeId> parent_position_;
  Graph graph_;
};

/// Ordered edge sequence between two nodes.
struct Path {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  std::vector<Edge> edges;

  std::size_t length() const { return edges.size(); }
};

/// Shortest-hop spanning tree of root's component. The parent of v is its
/// smallest-index neighbor one level closer to the root.
Tree bfs_tree(const Graph& g, NodeId root);

/// The unique u-v path, ordered from u.
Path path(const Tree& t, NodeId u, NodeId v);

/// Number of edges shared by P(anchor, x) and P(anchor, y).
std::size_t path_overlap(const Tree& t, NodeId anchor, NodeId x, NodeId y);

}  // namespace sourceloc
