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

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "sourceloc/error.hpp"
#include "sourceloc/graph.hpp"

namespace sourceloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_id(std::string_view token, NodeId& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Graph read_edge_list(std::istream& in, const std::string& source_name) {
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::size_t declared = 0;
  bool has_declared = false;
  NodeId max_id = 0;
  bool any = false;

  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw InputError(source_name + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::string_view comment = trim(body.substr(1));
      constexpr std::string_view kNodes = "nodes:";
      if (comment.starts_with(kNodes)) {
        NodeId n = 0;
        if (!parse_id(trim(comment.substr(kNodes.size())), n)) fail("malformed node count");
        declared = n;
        has_declared = true;
      }
      continue;
    }
    const auto split = body.find_first_of(" \t");
    if (split == std::string_view::npos) fail("expected two node ids");
    std::string_view a = body.substr(0, split);
    std::string_view b = trim(body.substr(split));
    NodeId u = 0, v = 0;
    if (!parse_id(a, u) || !parse_id(b, v) || u == kNoNode || v == kNoNode) {
      fail("malformed node id in '" + std::string(body) + "'");
    }
    if (u == v) fail("self-loop on node " + std::to_string(u));
    const Edge e = make_edge(u, v);
    if (!seen.insert(e).second) {
      fail("duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    edges.push_back(e);
    max_id = std::max({max_id, u, v});
    any = true;
  }
  std::size_t n = any ? std::size_t{max_id} + 1 : 0;
  if (has_declared) {
    if (declared < n) {
      throw InputError(source_name + ": declared node count " + std::to_string(declared) +
                       " is smaller than max id + 1 = " + std::to_string(n));
    }
    n = declared;
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return read_edge_list(in, path);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes: " << g.node_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace sourceloc
