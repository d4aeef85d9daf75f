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
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "sourceloc/error.hpp"
#include "sourceloc/experiments.hpp"

namespace sourceloc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return std::string(s.substr(first, s.find_last_not_of(" \t\r") - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw InputError(key + ": cannot parse '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "infinity") return kNever;
  return parse_number<double>(key, value);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InputError(key + ": expected true or false, got '" + value + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse(key, trim(item)));
  if (out.empty()) throw InputError(key + ": empty list");
  return out;
}

constexpr std::pair<std::string_view, Family> kFamilies[] = {
    {"er", Family::er},       {"ba", Family::ba},     {"apollonian", Family::apollonian},
    {"random_tree", Family::random_tree}, {"path", Family::path}, {"star", Family::star},
    {"file", Family::file}};
constexpr std::pair<std::string_view, PlacementStrategy> kPlacements[] = {
    {"high_degree", PlacementStrategy::high_degree}, {"random", PlacementStrategy::random},
    {"low_degree", PlacementStrategy::low_degree}};
constexpr std::pair<std::string_view, EstimatorMode> kModes[] = {
    {"auto", EstimatorMode::automatic}, {"tree", EstimatorMode::tree}, {"graph", EstimatorMode::graph}};
constexpr std::pair<std::string_view, ExperimentKind> kKinds[] = {
    {"trials", ExperimentKind::trials}, {"sweep", ExperimentKind::sweep},
    {"threshold", ExperimentKind::threshold}, {"convergence", ExperimentKind::convergence}};

template <typename E, std::size_t N>
E lookup(const std::string& key, const std::string& value,
         const std::pair<std::string_view, E> (&names)[N]) {
  for (const auto& [name, e] : names) {
    if (value == name) return e;
  }
  std::string valid;
  for (const auto& [name, e] : names) valid += (valid.empty() ? "" : ", ") + std::string(name);
  throw InputError(key + ": unknown value '" + value + "' (expected one of " + valid + ")");
}

template <typename E, std::size_t N>
std::string name_of(E e, const std::pair<std::string_view, E> (&names)[N]) {
  for (const auto& [name, v] : names) {
    if (v == e) return std::string(name);
  }
  return "?";
}

std::string real(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  auto size = [](const std::string& k, const std::string& v) { return parse_number<std::size_t>(k, v); };
  static const std::map<std::string, Setter> table = {
      {"experiment", [](auto& c, auto& k, auto& v) { c.kind = lookup(k, v, kKinds); }},
      {"family", [](auto& c, auto& k, auto& v) { c.family = lookup(k, v, kFamilies); }},
      {"n", [=](auto& c, auto& k, auto& v) { c.n = size(k, v); }},
      {"p", [](auto& c, auto& k, auto& v) { c.p = parse_real(k, v); }},
      {"np", [](auto& c, auto& k, auto& v) { c.np = parse_real(k, v); }},
      {"m", [=](auto& c, auto& k, auto& v) { c.m = size(k, v); }},
      {"generations", [=](auto& c, auto& k, auto& v) { c.generations = size(k, v); }},
      {"graph", [](auto& c, auto&, auto& v) { c.graph_path = v; }},
      {"resample_graph", [](auto& c, auto& k, auto& v) { c.resample_graph = parse_bool(k, v); }},
      {"largest_component", [](auto& c, auto& k, auto& v) { c.largest_component = parse_bool(k, v); }},
      {"placement", [](auto& c, auto& k, auto& v) { c.placement = lookup(k, v, kPlacements); }},
      {"k", [=](auto& c, auto& k, auto& v) { c.k = size(k, v); }},
      {"density", [](auto& c, auto& k, auto& v) { c.density = parse_real(k, v); }},
      {"k_grid", [=](auto& c, auto& k, auto& v) { c.k_grid = parse_list<std::size_t>(k, v, size); }},
      {"density_grid", [](auto& c, auto& k, auto& v) { c.density_grid = parse_list<double>(k, v, parse_real); }},
      {"mu", [](auto& c, auto& k, auto& v) { c.mu = parse_real(k, v); }},
      {"sigma", [](auto& c, auto& k, auto& v) { c.sigma = parse_real(k, v); }},
      {"cascades", [=](auto& c, auto& k, auto& v) { c.cascades = size(k, v); }},
      {"cascade_grid", [=](auto& c, auto& k, auto& v) { c.cascade_grid = parse_list<std::size_t>(k, v, size); }},
      {"start_window", [](auto& c, auto& k, auto& v) { c.start_window = parse_real(k, v); }},
      {"horizon", [](auto& c, auto& k, auto& v) { c.horizon = parse_real(k, v); }},
      {"trials", [=](auto& c, auto& k, auto& v) { c.trials = size(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"mode", [](auto& c, auto& k, auto& v) { c.mode = lookup(k, v, kModes); }},
      {"graph_directions", [](auto& c, auto& k, auto& v) { c.graph_directions = parse_bool(k, v); }},
      {"target_p_loc", [](auto& c, auto& k, auto& v) { c.target_p_loc = parse_real(k, v); }},
      {"compute_pmax", [](auto& c, auto& k, auto& v) { c.compute_pmax = parse_bool(k, v); }},
      {"threads", [=](auto& c, auto& k, auto& v) { c.threads = size(k, v); }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw InputError("trials: must be >= 1");
  if (n < 2) throw InputError("n: must be >= 2");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InputError("mu: must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("sigma: must be non-negative");
  if (cascades < 1) throw InputError("cascades: must be >= 1");
  if (!(horizon > 0.0)) throw InputError("horizon: must be positive");
  if (!(start_window >= 0.0)) throw InputError("start_window: must be non-negative");
  if (k < 1) throw InputError("k: must be >= 1");
  if (density && !(*density > 0.0 && *density < 1.0)) throw InputError("density: must lie in (0, 1)");
  for (double d : density_grid) {
    if (!(d > 0.0 && d < 1.0)) throw InputError("density_grid: entries must lie in (0, 1)");
  }
  for (std::size_t c : cascade_grid) {
    if (c < 1) throw InputError("cascade_grid: entries must be >= 1");
  }
  if (family == Family::er) {
    const double prob = np ? *np / static_cast<double>(n) : p;
    if (!(prob >= 0.0)) throw InputError(np ? "np: must be non-negative" : "p: must lie in [0, 1]");
    if (!np && p > 1.0) throw InputError("p: must lie in [0, 1]");
  }
  if (family == Family::ba && (m < 1 || m >= n)) throw InputError("m: requires 1 <= m < n");
  if (family == Family::file && graph_path.empty()) throw InputError("graph: required for family = file");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw InputError(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw InputError(where + key + ": unknown key");
    try {
      it->second(cfg, key, value);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::vector<std::string> config_echo(const ExperimentConfig& c) {
  std::vector<std::string> out;
  auto add = [&](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
  auto join = [](const auto& xs, auto fmt) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ",") + fmt(x);
    return s;
  };
  add("experiment", name_of(c.kind, kKinds));
  add("family", name_of(c.family, kFamilies));
  add("n", std::to_string(c.n));
  if (c.family == Family::er) {
    if (c.np) add("np", real(*c.np)); else add("p", real(c.p));
  }
  if (c.family == Family::ba) add("m", std::to_string(c.m));
  if (c.generations) add("generations", std::to_string(*c.generations));
  if (c.family == Family::file) add("graph", c.graph_path);
  add("resample_graph", c.resample_graph ? "true" : "false");
  add("largest_component", c.largest_component ? "true" : "false");
  add("placement", name_of(c.placement, kPlacements));
  add("k", std::to_string(c.k));
  if (c.density) add("density", real(*c.density));
  if (!c.k_grid.empty()) add("k_grid", join(c.k_grid, [](auto x) { return std::to_string(x); }));
  if (!c.density_grid.empty()) add("density_grid", join(c.density_grid, real));
  add("mu", real(c.mu));
  add("sigma", real(c.sigma));
  add("cascades", std::to_string(c.cascades));
  if (!c.cascade_grid.empty()) add("cascade_grid", join(c.cascade_grid, [](auto x) { return std::to_string(x); }));
  add("start_window", real(c.start_window));
  add("horizon", real(c.horizon));
  add("trials", std::to_string(c.trials));
  add("seed", std::to_string(c.seed));
  add("mode", name_of(c.mode, kModes));
  add("graph_directions", c.graph_directions ? "true" : "false");
  add("target_p_loc", real(c.target_p_loc));
  add("compute_pmax", c.compute_pmax ? "true" : "false");
  return out;
}

}  // namespace sourceloc
