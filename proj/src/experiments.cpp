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

#include "sourceloc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "sourceloc/error.hpp"
#include "sourceloc/random.hpp"

namespace sourceloc {

namespace {

// Seed streams below a trial seed.
constexpr std::uint64_t kGraphStream = 0;
constexpr std::uint64_t kPlacementStream = 1;
constexpr std::uint64_t kSourceStream = 2;
constexpr std::uint64_t kCascadeStream = 100;
// Stream of the base seed used for the shared graph when resample_graph is off.
constexpr std::uint64_t kSharedGraphStream = ~std::uint64_t{0};

Graph build_graph(const ExperimentConfig& cfg, std::uint64_t seed) {
  Graph g;
  switch (cfg.family) {
    case Family::er:
      g = generate_er(cfg.n, cfg.np ? std::min(1.0, *cfg.np / static_cast<double>(cfg.n)) : cfg.p,
                      seed);
      break;
    case Family::ba:
      g = generate_ba(cfg.n, cfg.m, seed);
      break;
    case Family::apollonian:
      g = cfg.generations ? generate_apollonian(*cfg.generations)
                          : generate_apollonian_prefix(cfg.n);
      break;
    case Family::random_tree:
      g = generate_random_tree(cfg.n, seed);
      break;
    case Family::path:
      g = generate_path(cfg.n);
      break;
    case Family::star:
      g = generate_star(cfg.n - 1);
      break;
    case Family::file:
      g = read_edge_list_file(cfg.graph_path);
      break;
  }
  if (cfg.largest_component) g = largest_component(g);
  return g;
}

bool family_is_random(Family f) {
  return f == Family::er || f == Family::ba || f == Family::random_tree;
}

std::size_t observer_count(const ExperimentConfig& cfg, std::size_t nodes) {
  std::size_t k = cfg.k;
  if (cfg.density) {
    k = static_cast<std::size_t>(std::lround(*cfg.density * static_cast<double>(nodes)));
  }
  // Leave at least one possible source.
  return std::clamp<std::size_t>(k, 1, nodes > 1 ? nodes - 1 : 1);
}

struct TrialContext {
  const ExperimentConfig& cfg;
  const Graph* shared = nullptr;
};

TrialRecord run_one(const TrialContext& ctx, std::size_t trial) {
  const ExperimentConfig& cfg = ctx.cfg;
  const std::uint64_t seed = derive_seed(cfg.seed, trial);
  TrialRecord rec;
  rec.trial = trial;

  Graph own;
  if (!ctx.shared) own = build_graph(cfg, derive_seed(seed, kGraphStream));
  const Graph& g = ctx.shared ? *ctx.shared : own;
  rec.nodes = g.node_count();
  if (g.node_count() < 2) throw InputError("graph needs at least two nodes");

  const bool tree_mode = cfg.mode == EstimatorMode::tree ||
                         (cfg.mode == EstimatorMode::automatic && g.is_tree());
  std::optional<Tree> tree;
  if (tree_mode) tree = Tree::from_graph(g);

  const std::size_t k = observer_count(cfg, g.node_count());
  ObserverSet observers;
  switch (cfg.placement) {
    case PlacementStrategy::high_degree:
      observers = place_high_degree(g, k);
      break;
    case PlacementStrategy::low_degree:
      observers = place_low_degree(g, k);
      break;
    case PlacementStrategy::random:
      observers = place_random(g, k, derive_seed(seed, kPlacementStream));
      break;
  }
  rec.observers = observers.size();

  // Source prior: uniform over the non-observers.
  std::vector<NodeId> pool;
  pool.reserve(g.node_count() - k);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!observers.contains(v)) pool.push_back(v);
  }
  Rng pick = make_rng(derive_seed(seed, kSourceStream));
  rec.source = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(pick)];

  std::vector<std::uint64_t> cascade_seeds(cfg.cascades);
  for (std::size_t c = 0; c < cfg.cascades; ++c) {
    cascade_seeds[c] = derive_seed(seed, kCascadeStream + c);
  }
  CascadeOptions copts;
  copts.start_window = cfg.start_window;
  copts.observe.horizon = cfg.horizon;
  const DelayModel model{cfg.mu, cfg.sigma};
  const auto cascades = simulate_cascades(g, rec.source, model, observers, cascade_seeds, copts);

  if (tree && cfg.compute_pmax) rec.p_max = pmax_oracle(*tree, observers);

  std::vector<NodeId> common = cascades.front().active_observers;
  for (const auto& obs : cascades) {
    std::vector<NodeId> next;
    std::set_intersection(common.begin(), common.end(), obs.active_observers.begin(),
                          obs.active_observers.end(), std::back_inserter(next));
    common = std::move(next);
  }
  rec.active = common.size();
  if (common.empty()) {
    rec.uninformed = true;
    return rec;
  }

  try {
    EstimatorResult result;
    if (tree) {
      result = cascades.size() == 1 ? estimate_tree(*tree, cascades.front(), model)
                                    : estimate_multi(*tree, cascades, model);
    } else {
      EstimatorOptions opts;
      opts.graph_directions = cfg.graph_directions;
      result = cascades.size() == 1 ? estimate_graph(g, cascades.front(), model, opts)
                                    : estimate_multi(g, cascades, model, opts);
    }
    rec.estimate = result.estimate;
    rec.status = result.status;
  } catch (const EstimationError&) {
    rec.degenerate = true;
    return rec;
  }
  rec.correct = rec.estimate == rec.source;
  rec.hops = hop_distances(g, rec.source)[rec.estimate];
  return rec;
}

MetricsReport aggregate(std::vector<TrialRecord> log) {
  MetricsReport r;
  r.trials = log.size();
  double hop_sum = 0.0, hop_sq = 0.0, pmax_sum = 0.0;
  std::size_t pmax_count = 0;
  for (const auto& t : log) {
    r.correct += t.correct;
    r.uninformed += t.uninformed;
    r.degenerate += t.degenerate;
    if (t.estimate != kNoNode) {
      r.ties += t.status == EstimateStatus::tie;
      r.direction_only += t.status == EstimateStatus::direction_only;
    }
    if (t.hops >= 0) {
      hop_sum += t.hops;
      hop_sq += static_cast<double>(t.hops) * t.hops;
      ++r.hop_samples;
    }
    if (t.p_max >= 0.0) {
      pmax_sum += t.p_max;
      ++pmax_count;
    }
  }
  r.p_loc = r.trials ? static_cast<double>(r.correct) / static_cast<double>(r.trials) : 0.0;
  r.p_loc_ci = binomial_ci(r.correct, r.trials);
  if (r.hop_samples > 0) {
    const double n = static_cast<double>(r.hop_samples);
    r.mean_hop_error = hop_sum / n;
    const double var = r.hop_samples > 1 ? std::max(0.0, (hop_sq - n * r.mean_hop_error * r.mean_hop_error) / (n - 1)) : 0.0;
    const double half = 1.96 * std::sqrt(var / n);
    r.hop_ci = {std::max(0.0, r.mean_hop_error - half), r.mean_hop_error + half};
  } else {
    r.mean_hop_error = std::numeric_limits<double>::infinity();
    r.hop_ci = {r.mean_hop_error, r.mean_hop_error};
  }
  if (pmax_count == r.trials && r.trials > 0) r.p_max = pmax_sum / static_cast<double>(pmax_count);
  r.log = std::move(log);
  return r;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

Interval binomial_ci(std::size_t successes, std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  const double half = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

MetricsReport run_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<Graph> shared;
  if (!cfg.resample_graph || !family_is_random(cfg.family)) {
    shared = build_graph(cfg, derive_seed(cfg.seed, kSharedGraphStream));
  }
  const TrialContext ctx{cfg, shared ? &*shared : nullptr};

  std::vector<TrialRecord> log(cfg.trials);
  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, cfg.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < cfg.trials; t = next++) {
      try {
        log[t] = run_one(ctx, t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(std::move(log));
}

std::vector<CurvePoint> sweep_density(const ExperimentConfig& cfg) {
  if (cfg.k_grid.empty() && cfg.density_grid.empty()) {
    throw InputError("k_grid or density_grid: grid must not be empty");
  }
  std::vector<CurvePoint> curve;
  ExperimentConfig point = cfg;
  if (!cfg.density_grid.empty()) {
    for (double density : cfg.density_grid) {
      point.density = density;
      curve.push_back({density, run_trials(point)});
    }
  } else {
    point.density.reset();
    for (std::size_t k : cfg.k_grid) {
      point.k = k;
      curve.push_back({static_cast<double>(k) / static_cast<double>(cfg.n), run_trials(point)});
    }
  }
  return curve;
}

ThresholdResult find_threshold_density(const ExperimentConfig& cfg) {
  if (!(cfg.target_p_loc > 0.0 && cfg.target_p_loc <= 1.0)) {
    throw InputError("target_p_loc: must lie in (0, 1]");
  }
  if (cfg.k_grid.empty() && cfg.density_grid.empty()) {
    throw InputError("k_grid or density_grid: grid must not be empty");
  }
  ThresholdResult out;
  ExperimentConfig point = cfg;
  std::vector<double> grid = cfg.density_grid;
  if (grid.empty()) {
    for (std::size_t k : cfg.k_grid) grid.push_back(static_cast<double>(k) / static_cast<double>(cfg.n));
  }
  std::sort(grid.begin(), grid.end());
  for (double density : grid) {
    point.density = density;
    auto report = run_trials(point);
    const bool reached = report.p_loc_ci.low >= cfg.target_p_loc - 0.05;
    out.curve.push_back({density, std::move(report)});
    if (reached) {
      out.density = density;
      break;
    }
  }
  return out;
}

ConvergenceResult cascade_convergence(const ExperimentConfig& cfg) {
  if (cfg.cascade_grid.empty()) throw InputError("cascade_grid: grid must not be empty");
  if (cfg.mode == EstimatorMode::graph) throw InputError("mode: cascade convergence needs trees");
  if (cfg.family == Family::er || cfg.family == Family::ba || cfg.family == Family::apollonian) {
    throw InputError("family: cascade convergence is defined on tree networks");
  }
  ConvergenceResult out;
  ExperimentConfig point = cfg;
  point.mode = EstimatorMode::tree;
  point.compute_pmax = true;
  for (std::size_t c : cfg.cascade_grid) {
    point.cascades = c;
    out.curve.push_back({static_cast<double>(c), run_trials(point)});
  }
  // Trials share seeds across C, so every point sees the same trees and
  // observers and the oracle value is identical.
  out.p_max = out.curve.front().report.p_max.value_or(0.0);
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<CurvePoint>& rows,
                       const std::vector<std::string>& metadata) {
  for (const auto& line : metadata) out << "# " << line << '\n';
  out << "param,p_loc,ci_low,ci_high,hop_err,trials\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << format_number(row.param) << ',' << format_number(r.p_loc) << ','
        << format_number(r.p_loc_ci.low) << ',' << format_number(r.p_loc_ci.high) << ','
        << format_number(r.mean_hop_error) << ',' << r.trials << '\n';
  }
}

}  // namespace sourceloc
