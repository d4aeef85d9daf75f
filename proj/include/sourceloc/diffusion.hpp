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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sourceloc/graph.hpp"
#include "sourceloc/placement.hpp"

namespace sourceloc {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// i.i.d. Gaussian per-edge propagation delay N(mu, sigma^2).
struct DelayModel {
  double mu = 1.0;
  double sigma = 0.0;

  /// Throws InputError unless mu > 0 and sigma >= 0.
  void validate() const;
  /// Below this ratio a noticeable share of the Gaussian mass is negative and
  /// the truncation in sample_delays starts to bias the model.
  static constexpr double kMinSafeRatio = 3.0;
  bool low_ratio() const { return sigma > 0.0 && mu / sigma < kMinSafeRatio; }
};

/// One sampled cascade.
struct DiffusionTrace {
  NodeId source = kNoNode;
  double start_time = 0.0;
  std::vector<double> arrival_time;   // kNever when not reached
  std::vector<NodeId> arrival_parent; // kNoNode for the source and unreached nodes
  std::vector<double> edge_delay;     // indexed by EdgeId

  bool informed(NodeId v) const { return arrival_time[v] != kNever; }
};

/// (observer, neighbor it first heard from, absolute arrival time).
struct ObservationRecord {
  NodeId observer = kNoNode;
  NodeId from_node = kNoNode;
  double time = 0.0;

  friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

struct Observation {
  /// Sorted by observer; one record per active observer.
  std::vector<ObservationRecord> records;
  /// Ascending ids of observers that were informed.
  std::vector<NodeId> active_observers;
  /// Every deployed observer, active or not. Estimators never propose these.
  std::vector<NodeId> observers;

  std::size_t active_count() const { return active_observers.size(); }
  /// Throws InputError when `o` is not active.
  const ObservationRecord& record(NodeId o) const;

  /// Rebuilds active_observers from records; adds record observers to
  /// `observers` when missing. Throws InputError on duplicate observers.
  void normalize();
};

/// Per-edge delays, i.i.d. N(mu, sigma^2) redrawn until strictly positive.
std::vector<double> sample_delays(const Graph& g, const DelayModel& model, std::uint64_t seed);

/// First-arrival times of the relay process from `source`: every informed node
/// forwards to all neighbors, and each node keeps the earliest arrival.
DiffusionTrace simulate(const Graph& g, NodeId source, double start_time, const DelayModel& model,
                        std::uint64_t seed);

/// Same process over caller-provided positive edge delays.
DiffusionTrace propagate(const Graph& g, NodeId source, double start_time,
                         std::vector<double> edge_delay);

struct ObserveOptions {
  /// Observers informed later than start_time + horizon stay inactive.
  double horizon = kNever;
};

/// Measurements visible to `observers`. The source never reports, even if it
/// is an observer.
Observation observe(const DiffusionTrace& trace, const ObserverSet& observers,
                    const ObserveOptions& options = {});

struct CascadeOptions {
  /// Start time of each cascade is uniform in [0, start_window).
  double start_window = 100.0;
  ObserveOptions observe;
};

/// One Observation per seed; every cascade redraws its delays and start time.
std::vector<Observation> simulate_cascades(const Graph& g, NodeId source, const DelayModel& model,
                                           const ObserverSet& observers,
                                           std::span<const std::uint64_t> seeds,
                                           const CascadeOptions& options = {});

// Observation CSV: header `observer,from_node,time`.
Observation read_observations(std::istream& in, const std::string& source_name = "<stream>");
Observation read_observations_file(const std::string& path);
void write_observations(std::ostream& out, const Observation& obs);

/// Debug dump, header `node,arrival_time,parent`; unreached nodes print
/// `never` and an empty parent.
void write_trace(std::ostream& out, const DiffusionTrace& trace);

/// Decimal with 9 significant digits, always containing a '.' or exponent.
std::string format_time(double t);

}  // namespace sourceloc
