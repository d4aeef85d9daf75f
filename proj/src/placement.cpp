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

#include "sourceloc/placement.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <string>

#include "sourceloc/error.hpp"
#include "sourceloc/random.hpp"

namespace sourceloc {

ObserverSet::ObserverSet(std::vector<NodeId> nodes, std::size_t node_count)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InputError("observer set must not be empty");
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw InputError("duplicate observer");
  }
  if (nodes_.back() >= node_count) {
    throw InputError("observer " + std::to_string(nodes_.back()) + " out of range");
  }
}

bool ObserverSet::contains(NodeId v) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

namespace {

void check_k(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.node_count()) {
    throw InputError("observer count " + std::to_string(k) + " outside [1, " +
                     std::to_string(g.node_count()) + "]");
  }
}

}  // namespace

ObserverSet place_high_degree(const Graph& g, std::size_t k) {
  check_k(g, k);
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  order.resize(k);
  return ObserverSet(std::move(order), g.node_count());
}

ObserverSet place_low_degree(const Graph& g, std::size_t k) {
  check_k(g, k);
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) < g.degree(b); });
  order.resize(k);
  return ObserverSet(std::move(order), g.node_count());
}

ObserverSet place_random(const Graph& g, std::size_t k, std::uint64_t seed) {
  check_k(g, k);
  Rng rng = make_rng(seed);
  std::vector<NodeId> pool(g.node_count());
  std::iota(pool.begin(), pool.end(), NodeId{0});
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return ObserverSet(std::move(pool), g.node_count());
}

ObserverSet read_observer_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open observer file '" + path + "'");
  std::vector<NodeId> nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    NodeId id = 0;
    auto [ptr, ec] = std::from_chars(begin, end, id);
    if (ec != std::errc() || ptr != end) {
      throw InputError(path + ":" + std::to_string(line_no) + ": malformed node id");
    }
    if (id >= g.node_count()) {
      throw InputError(path + ":" + std::to_string(line_no) + ": node " + std::to_string(id) +
                       " out of range");
    }
    nodes.push_back(id);
  }
  return ObserverSet(std::move(nodes), g.node_count());
}

ObserverSet parse_observer_spec(const std::string& spec, const Graph& g, std::uint64_t seed) {
  auto count_after = [&](std::size_t prefix) {
    std::size_t k = 0;
    const char* begin = spec.data() + prefix;
    const char* end = spec.data() + spec.size();
    auto [ptr, ec] = std::from_chars(begin, end, k);
    if (ec != std::errc() || ptr != end) throw InputError("malformed observer spec '" + spec + "'");
    return k;
  };
  if (spec.starts_with("random:")) return place_random(g, count_after(7), seed);
  if (spec.starts_with("degree:")) return place_high_degree(g, count_after(7));
  if (spec.starts_with("low-degree:")) return place_low_degree(g, count_after(11));
  return read_observer_file(spec, g);
}

}  // namespace sourceloc
