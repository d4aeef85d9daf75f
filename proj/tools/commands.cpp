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

#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "sourceloc/diffusion.hpp"
#include "sourceloc/error.hpp"
#include "sourceloc/estimator.hpp"
#include "sourceloc/experiments.hpp"
#include "sourceloc/graph.hpp"
#include "sourceloc/placement.hpp"
#include "sourceloc/random.hpp"
#include "sourceloc/tree.hpp"

namespace sourceloc::cli {

namespace fs = std::filesystem;

namespace {

std::string number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Writes to `path`, or to `fallback` when path is "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write '" + path + "'");
  write(file);
  if (!file) throw InputError("error while writing '" + path + "'");
}

struct GenerateArgs {
  std::string family;
  std::size_t n = 100;
  double p = 0.0;
  std::optional<double> np;
  std::size_t m = 2;
  std::size_t generations = 0;
  std::uint64_t seed = 1;
  std::string out = "-";
};

int cmd_generate(const GenerateArgs& a, const RunManifest& manifest, std::ostream& out) {
  Graph g;
  if (a.family == "er") {
    g = generate_er(a.n, a.np ? std::min(1.0, *a.np / static_cast<double>(a.n)) : a.p, a.seed);
  } else if (a.family == "ba") {
    g = generate_ba(a.n, a.m, a.seed);
  } else if (a.family == "apollonian") {
    g = generate_apollonian(a.generations);
  } else if (a.family == "tree") {
    g = generate_random_tree(a.n, a.seed);
  } else if (a.family == "path") {
    g = generate_path(a.n);
  } else if (a.family == "star") {
    g = generate_star(a.n - 1);
  } else if (a.family == "cycle") {
    g = generate_cycle(a.n);
  } else {
    throw InputError("unknown family '" + a.family + "'");
  }
  emit(a.out, out, [&](std::ostream& os) {
    for (const auto& line : manifest.comment_lines()) os << "# " << line << '\n';
    write_edge_list(os, g);
  });
  if (a.out != "-") out << "nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
  return kOk;
}

struct SimulateArgs {
  std::string graph;
  NodeId source = 0;
  double mu = 1.0;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::string observers;
  std::string out;
  std::string trace;
  std::size_t cascades = 1;
  double start_time = 0.0;
  double start_window = 100.0;
  double horizon = kNever;
};

int cmd_simulate(const SimulateArgs& a, RunManifest manifest, std::ostream& out, std::ostream& err) {
  const Graph g = read_edge_list_file(a.graph);
  manifest.add_input(a.graph);
  if (!g.contains(a.source)) {
    throw InputError("source " + std::to_string(a.source) + " out of range [0, " +
                     std::to_string(g.node_count()) + ")");
  }
  const DelayModel model{a.mu, a.sigma};
  model.validate();
  if (model.low_ratio()) {
    err << "warning: mu/sigma = " << number(a.mu / a.sigma)
        << " < 3; negative delays are frequent and get resampled\n";
  }
  const ObserverSet observers = parse_observer_spec(a.observers, g, derive_seed(a.seed, 7));
  if (fs::exists(a.observers)) manifest.add_input(a.observers);
  if (observers.contains(a.source)) {
    err << "warning: source " << a.source << " is an observer; it never reports an arrival\n";
  }

  if (a.cascades <= 1) {
    const auto trace = simulate(g, a.source, a.start_time, model, a.seed);
    const auto obs = observe(trace, observers, {a.horizon});
    emit(a.out, out, [&](std::ostream& os) { write_observations(os, obs); });
    if (!a.trace.empty()) emit(a.trace, out, [&](std::ostream& os) { write_trace(os, trace); });
    if (obs.active_count() == 0) err << "warning: no observer was informed\n";
    if (a.out != "-") manifest.write_sidecar(a.out);
    return kOk;
  }

  // Several cascades go to one file each in the output directory.
  fs::create_directories(a.out);
  std::vector<std::uint64_t> seeds;
  for (std::size_t c = 0; c < a.cascades; ++c) seeds.push_back(derive_seed(a.seed, c));
  CascadeOptions opts;
  opts.start_window = a.start_window;
  opts.observe.horizon = a.horizon;
  const auto all = simulate_cascades(g, a.source, model, observers, seeds, opts);
  for (std::size_t c = 0; c < all.size(); ++c) {
    char name[32];
    std::snprintf(name, sizeof name, "cascade_%04zu.csv", c);
    emit((fs::path(a.out) / name).string(), out,
         [&](std::ostream& os) { write_observations(os, all[c]); });
  }
  manifest.write_sidecar((fs::path(a.out) / "cascades").string());
  return kOk;
}

struct EstimateArgs {
  std::string graph;
  std::string observations;
  std::string cascades;
  double mu = 1.0;
  double sigma = 0.0;
  std::string mode = "auto";
  std::string observers;
  std::optional<NodeId> reference;
  bool graph_directions = true;
  std::string out = "-";
};

std::vector<std::string> cascade_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InputError("'" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no .csv cascade files in '" + dir + "'");
  return files;
}

int cmd_estimate(const EstimateArgs& a, RunManifest manifest, std::ostream& out, std::ostream& err) {
  if (a.observations.empty() == a.cascades.empty()) {
    throw InputError("give exactly one of --observations or --cascades");
  }
  const Graph g = read_edge_list_file(a.graph);
  manifest.add_input(a.graph);

  std::vector<Observation> cascades;
  const auto files = a.cascades.empty() ? std::vector<std::string>{a.observations}
                                        : cascade_files(a.cascades);
  for (const auto& f : files) {
    cascades.push_back(read_observations_file(f));
    manifest.add_input(f);
  }
  std::optional<ObserverSet> deployed;
  if (!a.observers.empty()) deployed = parse_observer_spec(a.observers, g, 0);
  for (auto& obs : cascades) {
    if (deployed) obs.observers.insert(obs.observers.end(), deployed->nodes().begin(), deployed->nodes().end());
    obs.normalize();
    for (const auto& r : obs.records) {
      if (!g.contains(r.observer) || !g.contains(r.from_node)) {
        throw InputError("observation references node outside the graph");
      }
      if (!g.has_edge(r.observer, r.from_node)) {
        throw InputError("observer " + std::to_string(r.observer) + " reports non-neighbor " +
                         std::to_string(r.from_node));
      }
    }
  }

  const DelayModel model{a.mu, a.sigma};
  model.validate();
  EstimatorOptions opts;
  opts.reference = a.reference;
  opts.graph_directions = a.graph_directions;

  bool tree_mode = false;
  if (a.mode == "tree") {
    if (!g.is_tree()) throw InputError("--mode tree: '" + a.graph + "' is not a tree");
    tree_mode = true;
  } else if (a.mode == "auto") {
    tree_mode = g.is_tree();
  } else if (a.mode != "graph") {
    throw InputError("--mode must be tree, graph or auto");
  }

  EstimatorResult result;
  if (tree_mode) {
    const Tree t = Tree::from_graph(g);
    result = cascades.size() == 1 ? estimate_tree(t, cascades[0], model, opts)
                                  : estimate_multi(t, cascades, model, opts);
  } else {
    result = cascades.size() == 1 ? estimate_graph(g, cascades[0], model, opts)
                                  : estimate_multi(g, cascades, model, opts);
  }

  emit(a.out, out, [&](std::ostream& os) {
    os << "rank,node,score\n";
    std::size_t rank = 0;
    for (const auto& c : result.ranked()) os << ++rank << ',' << c.node << ',' << number(c.score) << '\n';
  });
  if (a.out != "-") manifest.write_sidecar(a.out);

  switch (result.status) {
    case EstimateStatus::unique:
      err << "estimate: " << result.estimate << '\n';
      return kOk;
    case EstimateStatus::tie:
      err << "estimate: " << result.estimate << " (tied with " << result.tied_top.size() - 1
          << " other candidates)\n";
      return kDegenerate;
    case EstimateStatus::direction_only:
      err << "estimate: " << result.estimate << " (direction-only: fewer than two active observers, "
          << result.tied_top.size() << " candidates)\n";
      return kDegenerate;
  }
  return kInternal;
}

struct ExperimentArgs {
  std::string config;
  std::string out = "-";
  std::optional<std::size_t> threads;
};

std::vector<std::string> report_notes(const std::vector<CurvePoint>& rows) {
  std::vector<std::string> notes;
  for (const auto& row : rows) {
    const auto& r = row.report;
    std::string line = "point " + number(row.param) + ": uninformed=" + std::to_string(r.uninformed) +
                       " degenerate=" + std::to_string(r.degenerate) +
                       " ties=" + std::to_string(r.ties) +
                       " direction_only=" + std::to_string(r.direction_only);
    if (r.p_max) line += " p_max=" + number(*r.p_max);
    notes.push_back(line);
  }
  return notes;
}

int cmd_experiment(const ExperimentArgs& a, RunManifest manifest, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = parse_config_file(a.config);
  manifest.add_input(a.config);
  if (a.threads) cfg.threads = *a.threads;
  if (cfg.threads == 0) cfg.threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  manifest.seed = cfg.seed;

  // Embedded metadata must not depend on execution-only settings, so the
  // argument echo (which holds --threads) stays in the sidecar.
  std::vector<std::string> meta = {"command: experiment", "version: " + manifest.version,
                                   "seed: " + std::to_string(cfg.seed),
                                   "source_prior: uniform over non-observer nodes"};
  for (const auto& line : config_echo(cfg)) meta.push_back("config: " + line);

  std::vector<CurvePoint> rows;
  switch (cfg.kind) {
    case ExperimentKind::trials: {
      const auto report = run_trials(cfg);
      const double param = cfg.density ? *cfg.density
                                       : static_cast<double>(cfg.k) / static_cast<double>(cfg.n);
      rows.push_back({param, report});
      break;
    }
    case ExperimentKind::sweep:
      rows = sweep_density(cfg);
      break;
    case ExperimentKind::threshold: {
      auto result = find_threshold_density(cfg);
      rows = std::move(result.curve);
      meta.push_back(result.density ? "threshold: " + number(*result.density)
                                    : "threshold: unreachable (target " + number(cfg.target_p_loc) +
                                          " not met on the grid)");
      err << meta.back() << '\n';
      break;
    }
    case ExperimentKind::convergence: {
      auto result = cascade_convergence(cfg);
      meta.push_back("p_max: " + number(result.p_max));
      for (std::size_t i = 0; i < result.curve.size(); ++i) {
        meta.push_back("gap C=" + number(result.curve[i].param) + ": " + number(result.gap(i)));
      }
      rows = std::move(result.curve);
      break;
    }
  }
  for (const auto& note : report_notes(rows)) meta.push_back(note);
  emit(a.out, out, [&](std::ostream& os) { write_results_csv(os, rows, meta); });
  if (a.out != "-") manifest.write_sidecar(a.out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diffusion source localization from sparse observers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SOURCELOC_VERSION));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic network as an edge list");
  generate->add_option("family", gen.family, "er | ba | apollonian | tree | path | star | cycle")->required();
  generate->add_option("--n", gen.n, "Node count");
  generate->add_option("--p", gen.p, "Edge probability (er)");
  generate->add_option("--np", gen.np, "Expected degree N*p (er), overrides --p");
  generate->add_option("--m", gen.m, "Edges per new node (ba)");
  generate->add_option("--generations", gen.generations, "Subdivision rounds (apollonian)");
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--out", gen.out, "Output path, - for stdout");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Sample a cascade and record observer measurements");
  simulate_cmd->add_option("--graph", sim.graph, "Edge-list file")->required();
  simulate_cmd->add_option("--source", sim.source, "Source node")->required();
  simulate_cmd->add_option("--mu", sim.mu, "Mean edge delay")->required();
  simulate_cmd->add_option("--sigma", sim.sigma, "Edge delay standard deviation")->required();
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
  simulate_cmd->add_option("--observers", sim.observers, "File, random:K, degree:K or low-degree:K")->required();
  simulate_cmd->add_option("--out", sim.out, "Observation CSV (directory when --cascades > 1)")->required();
  simulate_cmd->add_option("--trace", sim.trace, "Optional per-node arrival dump (single cascade)");
  simulate_cmd->add_option("--cascades", sim.cascades, "Number of independent cascades");
  simulate_cmd->add_option("--start-time", sim.start_time, "Start time of a single cascade");
  simulate_cmd->add_option("--start-window", sim.start_window, "Start times uniform in [0, w) for several cascades");
  simulate_cmd->add_option("--horizon", sim.horizon, "Observers informed later than this stay inactive");

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Rank candidate sources");
  estimate_cmd->add_option("--graph", est.graph, "Edge-list file")->required();
  estimate_cmd->add_option("--observations", est.observations, "Observation CSV");
  estimate_cmd->add_option("--cascades", est.cascades, "Directory of observation CSVs, one per cascade");
  estimate_cmd->add_option("--mu", est.mu, "Mean edge delay")->required();
  estimate_cmd->add_option("--sigma", est.sigma, "Edge delay standard deviation")->required();
  estimate_cmd->add_option("--mode", est.mode, "tree | graph | auto");
  estimate_cmd->add_option("--observers", est.observers, "Deployed observers (file, random:K, degree:K, low-degree:K)");
  estimate_cmd->add_option("--reference", est.reference, "Reference observer");
  estimate_cmd->add_flag("--graph-directions,!--no-graph-directions", est.graph_directions,
                         "Graph mode: prefer candidates whose shortest paths match the reported neighbors (default on)");
  estimate_cmd->add_option("--out", est.out, "Ranked CSV, - for stdout");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a config file");
  experiment->add_option("--config", exp.config, "Key-value config file")->required();
  experiment->add_option("--out", exp.out, "Results CSV, - for stdout");
  experiment->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SOURCELOC_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  RunManifest manifest;
  manifest.arguments.assign(args.begin() + 1, args.end());
  try {
    if (*generate) {
      manifest.command = "generate";
      manifest.seed = gen.seed;
      return cmd_generate(gen, manifest, out);
    }
    if (*simulate_cmd) {
      manifest.command = "simulate";
      manifest.seed = sim.seed;
      return cmd_simulate(sim, manifest, out, err);
    }
    if (*estimate_cmd) {
      manifest.command = "estimate";
      return cmd_estimate(est, manifest, out, err);
    }
    if (*experiment) {
      manifest.command = "experiment";
      return cmd_experiment(exp, manifest, out, err);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace sourceloc::cli
