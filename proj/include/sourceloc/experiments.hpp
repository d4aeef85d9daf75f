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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sourceloc/diffusion.hpp"
#include "sourceloc/estimator.hpp"
#include "sourceloc/graph.hpp"

namespace sourceloc {

enum class Family { er, ba, apollonian, random_tree, path, star, file };
enum class PlacementStrategy { high_degree, random, low_degree };
enum class EstimatorMode { automatic, tree, graph };
enum class ExperimentKind { trials, sweep, threshold, convergence };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::trials;

  Family family = Family::random_tree;
  std::size_t n = 100;
  double p = 0.0;                          // er
  std::optional<double> np;                // er, overrides p with np / n
  std::size_t m = 2;                       // ba
  std::optional<std::size_t> generations;  // apollonian; default: first n nodes
  std::string graph_path;                  // file
  bool resample_graph = true;              // new random graph every trial
  bool largest_component = false;          // restrict each graph to its giant component

  PlacementStrategy placement = PlacementStrategy::random;
  std::size_t k = 5;
  std::optional<double> density;  // K/N, overrides k
  std::vector<std::size_t> k_grid;
  std::vector<double> density_grid;

  double mu = 1.0;
  double sigma = 0.25;
  std::size_t cascades = 1;
  std::vector<std::size_t> cascade_grid;
  double start_window = 100.0;
  double horizon = kNever;

  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  EstimatorMode mode = EstimatorMode::automatic;
  bool graph_directions = true;  // see EstimatorOptions
  double target_p_loc = 0.9;
  bool compute_pmax = true;

  /// Execution only: results never depend on it.
  std::size_t threads = 1;

  /// Throws InputError naming the offending key.
  void validate() const;
};

/// Flat `key = value` text, `#` comments. Unknown keys and bad values raise
/// InputError with the line number and key.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
ExperimentConfig parse_config_file(const std::string& path);

/// `key = value` lines reproducing the config, minus execution-only keys.
std::vector<std::string> config_echo(const ExperimentConfig& cfg);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// p +- 1.96 sqrt(p (1 - p) / n), clipped to [0, 1].
Interval binomial_ci(std::size_t successes, std::size_t n);

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t nodes = 0;
  std::size_t observers = 0;
  std::size_t active = 0;
  NodeId source = kNoNode;
  NodeId estimate = kNoNode;  // kNoNode when the trial failed
  bool correct = false;
  int hops = -1;              // -1 when no estimate
  bool uninformed = false;    // no observer heard the cascade
  bool degenerate = false;    // estimator rejected the observations
  EstimateStatus status = EstimateStatus::unique;
  double p_max = -1.0;        // per-trial oracle, -1 when not computed
};

struct MetricsReport {
  std::size_t trials = 0;
  std::size_t correct = 0;
  double p_loc = 0.0;
  Interval p_loc_ci;
  double mean_hop_error = 0.0;
  Interval hop_ci;
  std::size_t hop_samples = 0;
  std::size_t uninformed = 0;
  std::size_t degenerate = 0;
  std::size_t ties = 0;
  std::size_t direction_only = 0;
  std::optional<double> p_max;  // mean of the per-trial oracle
  std::vector<TrialRecord> log;
};

/// Monte Carlo estimate of P_loc and hop error for one configuration point.
MetricsReport run_trials(const ExperimentConfig& cfg);

struct CurvePoint {
  double param = 0.0;  // K/N for density curves, C for cascade curves
  MetricsReport report;
};

/// One report per entry of k_grid or density_grid, same trial seeds throughout.
std::vector<CurvePoint> sweep_density(const ExperimentConfig& cfg);

struct ThresholdResult {
  std::optional<double> density;  // empty: target unreachable on the grid
  std::vector<CurvePoint> curve;  // grid points evaluated, ascending
};

/// Smallest grid density whose lower CI bound reaches target - 0.05.
ThresholdResult find_threshold_density(const ExperimentConfig& cfg);

struct ConvergenceResult {
  double p_max = 0.0;
  std::vector<CurvePoint> curve;  // param = C
  double gap(std::size_t i) const { return p_max - curve[i].report.p_loc; }
};

/// P_loc against the number of fused cascades on tree networks.
ConvergenceResult cascade_convergence(const ExperimentConfig& cfg);

/// Results CSV: header `param,p_loc,ci_low,ci_high,hop_err,trials` preceded by
/// `# ` metadata lines.
void write_results_csv(std::ostream& out, const std::vector<CurvePoint>& rows,
                       const std::vector<std::string>& metadata);

}  // namespace sourceloc
