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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "sourceloc/diffusion.hpp"
#include "sourceloc/error.hpp"

namespace sourceloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

template <typename T>
bool parse_field(std::string_view token, T& out) {
  token = trim(token);
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && !token.empty();
}

}  // namespace

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", t);
  std::string s(buf);
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

Observation read_observations(std::istream& in, const std::string& source_name) {
  Observation obs;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  auto fail = [&](const std::string& what) {
    throw InputError(source_name + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header) {
      if (body != "observer,from_node,time") fail("expected header 'observer,from_node,time'");
      header = true;
      continue;
    }
    const auto c1 = body.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
    if (c2 == std::string_view::npos || body.find(',', c2 + 1) != std::string_view::npos) {
      fail("expected 3 comma-separated fields");
    }
    ObservationRecord r;
    if (!parse_field(body.substr(0, c1), r.observer) || r.observer == kNoNode) {
      fail("malformed observer id");
    }
    if (!parse_field(body.substr(c1 + 1, c2 - c1 - 1), r.from_node) || r.from_node == kNoNode) {
      fail("malformed from_node id");
    }
    if (!parse_field(body.substr(c2 + 1), r.time) || !std::isfinite(r.time)) {
      fail("malformed time");
    }
    obs.records.push_back(r);
  }
  if (!header) throw InputError(source_name + ": missing header 'observer,from_node,time'");
  obs.normalize();
  return obs;
}

Observation read_observations_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open observation file '" + path + "'");
  return read_observations(in, path);
}

void write_observations(std::ostream& out, const Observation& obs) {
  out << "observer,from_node,time\n";
  for (const auto& r : obs.records) {
    out << r.observer << ',' << r.from_node << ',' << format_time(r.time) << '\n';
  }
}

void write_trace(std::ostream& out, const DiffusionTrace& trace) {
  out << "node,arrival_time,parent\n";
  for (std::size_t v = 0; v < trace.arrival_time.size(); ++v) {
    out << v << ',';
    if (trace.arrival_time[v] == kNever) {
      out << "never,";
    } else {
      out << format_time(trace.arrival_time[v]) << ',';
      if (trace.arrival_parent[v] != kNoNode) out << trace.arrival_parent[v];
    }
    out << '\n';
  }
}

}  // namespace sourceloc
