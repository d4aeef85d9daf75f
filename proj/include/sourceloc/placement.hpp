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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sourceloc/graph.hpp"

namespace sourceloc {

/// Sorted set of K >= 1 distinct observer nodes.
class ObserverSet {
 public:
  ObserverSet() = default;
  /// Sorts; throws InputError on duplicates, empty input or ids >= node_count.
  ObserverSet(std::vector<NodeId> nodes, std::size_t node_count);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId v) const;

  friend bool operator==(const ObserverSet&, const ObserverSet&) = default;

 private:
  std::vector<NodeId> nodes_;
};

/// The k highest-degree nodes; equal degrees go to the smaller index.
ObserverSet place_high_degree(const Graph& g, std::size_t k);

/// The k lowest-degree nodes (leaves first on trees); ties by smaller index.
ObserverSet place_low_degree(const Graph& g, std::size_t k);

/// k nodes drawn uniformly without replacement.
ObserverSet place_random(const Graph& g, std::size_t k, std::uint64_t seed);

/// One node id per line, `#` comments allowed.
ObserverSet read_observer_file(const std::string& path, const Graph& g);

/// Parses `random:K`, `degree:K`, `low-degree:K` or a file path.
ObserverSet parse_observer_spec(const std::string& spec, const Graph& g, std::uint64_t seed);

}  // namespace sourceloc
