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

#include "sourceloc/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "sourceloc/error.hpp"
#include "sourceloc/random.hpp"

namespace sourceloc {

void DelayModel::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InputError("delay mean mu must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InputError("delay standard deviation sigma must be non-negative");
  }
}

const ObservationRecord& Observation::record(NodeId o) const {
  auto it = std::lower_bound(records.begin(), records.end(), o,
                             [](const ObservationRecord& r, NodeId id) { return r.observer < id; });
  if (it == records.end() || it->observer != o) {
    throw InputError("observer " + std::to_string(o) + " has no record");
  }
  return *it;
}

void Observation::normalize() {
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.observer < b.observer; });
  active_observers.clear();
  for (const auto& r : records) {
    if (!active_observers.empty() && active_observers.back() == r.observer) {
      throw InputError("observer " + std::to_string(r.observer) + " reported twice");
    }
    active_observers.push_back(r.observer);
  }
  observers.insert(observers.end(), active_observers.begin(), active_observers.end());
  std::sort(observers.begin(), observers.end());
  observers.erase(std::unique(observers.begin(), observers.end()), observers.end());
}

std::vector<double> sample_delays(const Graph& g, const DelayModel& model, std::uint64_t seed) {
  model.validate();
  std::vector<double> delay(g.edge_count(), model.mu);
  if (model.sigma == 0.0) return delay;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(model.mu, model.sigma);
  for (double& d : delay) {
    do {
      d = normal(rng);
    } while (!(d > 0.0));
  }
  return delay;
}

DiffusionTrace propagate(const Graph& g, NodeId source, double start_time,
                         std::vector<double> edge_delay) {
  if (!g.contains(source)) {
    throw InputError("source " + std::to_string(source) + " not in graph");
  }
  if (edge_delay.size() != g.edge_count()) throw InputError("one delay per edge required");

  DiffusionTrace trace;
  trace.source = source;
  trace.start_time = start_time;
  trace.arrival_time.assign(g.node_count(), kNever);
  trace.arrival_parent.assign(g.node_count(), kNoNode);
  trace.edge_delay = std::move(edge_delay);

  // Dijkstra over the positive delays; the first arrival at v is the shortest
  // weighted path. Equal arrivals keep the smaller parent index.
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<bool> done(g.node_count(), false);
  trace.arrival_time[source] = start_time;
  heap.emplace(start_time, source);
  while (!heap.empty()) {
    const auto [t, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = true;
    const auto nbrs = g.neighbors(u);
    const auto ids = g.incident_edges(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const NodeId v = nbrs[i];
      if (done[v]) continue;
      const double arrival = t + trace.edge_delay[ids[i]];
      double& best = trace.arrival_time[v];
      if (arrival < best) {
        best = arrival;
        trace.arrival_parent[v] = u;
        heap.emplace(arrival, v);
      } else if (arrival == best && u < trace.arrival_parent[v]) {
        trace.arrival_parent[v] = u;
      }
    }
  }
  return trace;
}

DiffusionTrace simulate(const Graph& g, NodeId source, double start_time, const DelayModel& model,
                        std::uint64_t seed) {
  return propagate(g, source, start_time, sample_delays(g, model, seed));
}

Observation observe(const DiffusionTrace& trace, const ObserverSet& observers,
                    const ObserveOptions& options) {
  Observation obs;
  obs.observers = observers.nodes();
  for (NodeId o : observers.nodes()) {
    if (o >= trace.arrival_time.size()) {
      throw InputError("observer " + std::to_string(o) + " not in graph");
    }
    if (o == trace.source || !trace.informed(o)) continue;
    if (trace.arrival_time[o] - trace.start_time > options.horizon) continue;
    obs.records.push_back({o, trace.arrival_parent[o], trace.arrival_time[o]});
    obs.active_observers.push_back(o);
  }
  return obs;
}

std::vector<Observation> simulate_cascades(const Graph& g, NodeId source, const DelayModel& model,
                                           const ObserverSet& observers,
                                           std::span<const std::uint64_t> seeds,
                                           const CascadeOptions& options) {
  if (seeds.empty()) throw InputError("at least one cascade required");
  std::vector<Observation> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    Rng clock = make_rng(derive_seed(seed, 1));
    const double start =
        options.start_window > 0.0
            ? std::uniform_real_distribution<double>(0.0, options.start_window)(clock)
            : 0.0;
    out.push_back(observe(simulate(g, source, start, model, seed), observers, options.observe));
  }
  return out;
}

}  // namespace sourceloc
