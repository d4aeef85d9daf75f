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

#include "sourceloc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "estimator_internal.hpp"
#include "sourceloc/error.hpp"

namespace sourceloc {

namespace detail {

EstimatorResult finalize(std::vector<CandidateScore> scores, double tie_tolerance) {
  if (scores.empty()) throw EstimationError("no candidate sources");
  EstimatorResult r;
  const auto by_node = [](const auto& a, const auto& b) { return a.node < b.node; };
  if (!std::is_sorted(scores.begin(), scores.end(), by_node)) {
    std::sort(scores.begin(), scores.end(), by_node);
  }
  double best = scores.front().score;
  for (const auto& c : scores) best = std::max(best, c.score);
  const double tol = tie_tolerance * std::max(1.0, std::abs(best));
  for (const auto& c : scores) {
    if (best - c.score <= tol) r.tied_top.push_back(c.node);
  }
  r.estimate = r.tied_top.front();
  r.status = r.tied_top.size() == 1 ? EstimateStatus::unique : EstimateStatus::tie;
  r.scores = std::move(scores);
  return r;
}

EstimatorResult direction_only(const std::vector<NodeId>& candidates) {
  if (candidates.empty()) throw EstimationError("no candidate sources");
  EstimatorResult r;
  for (NodeId c : candidates) r.scores.push_back({c, 0.0});
  r.tied_top = candidates;
  r.estimate = candidates.front();
  r.status = EstimateStatus::direction_only;
  return r;
}

std::vector<NodeId> reference_order(std::span<const NodeId> active,
                                    std::optional<NodeId> reference) {
  const NodeId ref = reference.value_or(active.front());
  if (!sorted_contains(active, ref)) {
    throw InputError("reference observer " + std::to_string(ref) + " is not active");
  }
  std::vector<NodeId> order{ref};
  for (NodeId o : active) {
    if (o != ref) order.push_back(o);
  }
  return order;
}

bool sorted_contains(std::span<const NodeId> sorted, NodeId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace detail

namespace {

// Hop distance and first step from each of `width` observers to every tree
// member, laid out by breadth-first position: entry i * width + j describes
// member order()[i] as seen from observer j.
struct Reach {
  std::size_t width = 0;
  std::vector<int> dist;
  std::vector<NodeId> first_hop;  // position of the observer's first step

  int distance(std::size_t pos, std::size_t j) const { return dist[pos * width + j]; }
  NodeId step(std::size_t pos, std::size_t j) const { return first_hop[pos * width + j]; }
};

void require_in_tree(const Tree& t, NodeId v) {
  if (!t.contains(v)) throw InputError("observer " + std::to_string(v) + " is not in the tree");
}

// Marks each observer's ancestors, then fills everything else in one pass
// down the breadth-first order.
Reach explore(const Tree& t, std::span<const NodeId> observers) {
  const std::size_t w = observers.size();
  const auto up = t.parent_positions();
  Reach r;
  r.width = w;
  r.dist.assign(t.size() * w, -1);
  r.first_hop.assign(t.size() * w, kNoNode);
  for (std::size_t j = 0; j < w; ++j) {
    require_in_tree(t, observers[j]);
    const NodeId at = t.position(observers[j]);
    r.dist[at * w + j] = 0;
    int steps = 0;
    for (NodeId a = up[at]; a != kNoNode; a = up[a]) {
      r.dist[a * w + j] = ++steps;
      r.first_hop[a * w + j] = up[at];
    }
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    const std::size_t p = up[i];
    for (std::size_t j = 0; j < w; ++j) {
      if (r.dist[i * w + j] >= 0) continue;
      const int above = r.dist[p * w + j];
      r.dist[i * w + j] = above + 1;
      r.first_hop[i * w + j] = above == 0 ? static_cast<NodeId>(i) : r.first_hop[p * w + j];
    }
  }
  return r;
}

// Marks the positions of deployed observers that belong to t.
std::vector<char> observer_mask(const Tree& t, std::span<const NodeId> observers) {
  std::vector<char> mask(t.size(), 0);
  for (NodeId o : observers) {
    if (t.contains(o)) mask[t.position(o)] = 1;
  }
  return mask;
}

// The same positions, reordered by ascending node id.
std::vector<NodeId> by_node(const Tree& t, std::span<const NodeId> positions) {
  std::vector<char> hit(t.node_count(), 0);
  for (NodeId p : positions) hit[t.order()[p]] = 1;
  std::vector<NodeId> out;
  out.reserve(positions.size());
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (hit[v]) out.push_back(t.position(v));
  }
  return out;
}

std::vector<NodeId> to_nodes(const Tree& t, std::span<const NodeId> positions) {
  auto out = by_node(t, positions);
  for (NodeId& p : out) p = t.order()[p];
  return out;
}

// Positions consistent with the directions reported by `order` (the observers
// `reach` was built over), minus every deployed observer.
std::vector<NodeId> consistent_positions(const Tree& t, const Observation& obs,
                                         std::span<const NodeId> order, const Reach& reach) {
  std::vector<NodeId> from(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    const NodeId o = order[j];
    const NodeId f = obs.record(o).from_node;
    if (!t.graph().contains(f) || !t.graph().has_edge(o, f)) {
      throw InputError("observer " + std::to_string(o) + " reports neighbor " + std::to_string(f) +
                       ", which is not adjacent in the tree");
    }
    from[j] = t.position(f);
  }
  const auto excluded = observer_mask(t, obs.observers);
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (excluded[i]) continue;
    bool ok = true;
    for (std::size_t j = 0; ok && j < from.size(); ++j) ok = reach.step(i, j) == from[j];
    if (ok) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

struct Explored {
  Reach reach;
  std::vector<NodeId> candidates;  // positions
};

Explored explore_candidates(const Tree& t, const Observation& obs, std::span<const NodeId> order) {
  Explored e{explore(t, order), {}};
  e.candidates = consistent_positions(t, obs, order, e.reach);
  if (e.candidates.empty()) {
    throw EstimationError("arrival directions are inconsistent: no node agrees with all of them");
  }
  return e;
}

Eigen::VectorXd delays_for(const Observation& obs, std::span<const NodeId> order) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(order.size() - 1));
  const double t1 = obs.record(order[0]).time;
  for (std::size_t k = 1; k < order.size(); ++k) {
    d[static_cast<Eigen::Index>(k - 1)] = obs.record(order[k]).time - t1;
  }
  return d;
}

// Scores candidate positions against observers `order` (reference first,
// `reach` built over them). The covariance is shared by all candidates and
// factored once.
EstimatorResult score_on_tree(const Tree& t, std::span<const NodeId> candidates,
                              std::span<const NodeId> order, const Reach& reach,
                              const Eigen::VectorXd& d, const DelayModel& model, double tie_tolerance) {
  const auto dim = static_cast<Eigen::Index>(order.size() - 1);
  std::vector<NodeId> at(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) at[j] = t.position(order[j]);
  Eigen::MatrixXd cov(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto kk = static_cast<std::size_t>(k + 1);
    for (Eigen::Index i = 0; i <= k; ++i) {
      const auto ii = static_cast<std::size_t>(i + 1);
      const int shared = (reach.distance(at[kk], 0) + reach.distance(at[ii], 0) - reach.distance(at[ii], kk)) / 2;
      cov(k, i) = cov(i, k) = shared;
    }
  }
  const auto chol = factor_covariance<double>(cov * detail::variance_scale(model.sigma));
  detail::SharedCovarianceScorer scorer(chol, d);

  // Scored in position order so the reach rows stream; results land by node id.
  std::vector<double> by_id(t.node_count());
  std::vector<char> hit(t.node_count(), 0);
  Eigen::VectorXd mu_s(dim);
  for (NodeId pos : candidates) {
    const int base = reach.distance(pos, 0);
    for (Eigen::Index k = 0; k < dim; ++k) {
      mu_s[k] = model.mu * (reach.distance(pos, static_cast<std::size_t>(k + 1)) - base);
    }
    const NodeId v = t.order()[pos];
    by_id[v] = scorer(mu_s);
    hit[v] = 1;
  }
  std::vector<CandidateScore> scores;
  scores.reserve(candidates.size());
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (hit[v]) scores.push_back({v, by_id[v]});
  }
  return detail::finalize(std::move(scores), tie_tolerance);
}

// Shortest-hop tree per candidate; covariance rebuilt for each.
EstimatorResult score_on_graph(const Graph& g, const std::vector<NodeId>& candidates,
                               std::span<const NodeId> order, const Eigen::VectorXd& d,
                               const DelayModel& model, double tie_tolerance) {
  const auto dim = static_cast<Eigen::Index>(order.size() - 1);
  const double scale = detail::variance_scale(model.sigma);
  std::vector<CandidateScore> scores;
  scores.reserve(candidates.size());
  Eigen::MatrixXd cov(dim, dim);
  Eigen::VectorXd mu_s(dim);
  std::vector<int> from_anchor(order.size());
  for (NodeId s : candidates) {
    const Tree t = bfs_tree(g, s);
    const NodeId o1 = order[0];
    for (std::size_t k = 0; k < order.size(); ++k) {
      from_anchor[k] = static_cast<int>(t.distance(o1, order[k]));
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto kk = static_cast<std::size_t>(k + 1);
      mu_s[k] = model.mu * (t.depth(order[kk]) - t.depth(o1));
      cov(k, k) = from_anchor[kk] * scale;
      for (Eigen::Index i = 0; i < k; ++i) {
        const auto ii = static_cast<std::size_t>(i + 1);
        const int between = static_cast<int>(t.distance(order[kk], order[ii]));
        cov(k, i) = cov(i, k) = ((from_anchor[kk] + from_anchor[ii] - between) / 2) * scale;
      }
    }
    const auto chol = factor_covariance<double>(cov);
    scores.push_back({s, detail::SharedCovarianceScorer(chol, d)(mu_s)});
  }
  return detail::finalize(std::move(scores), tie_tolerance);
}

// Non-observers sharing a component with all of `order`.
std::vector<NodeId> component_candidates(const Graph& g, std::span<const NodeId> order,
                                         std::span<const NodeId> observers) {
  const auto label = connected_components(g);
  for (NodeId o : order) {
    if (!g.contains(o)) throw InputError("observer " + std::to_string(o) + " not in graph");
    if (label[o] != label[order[0]]) {
      throw EstimationError("active observers lie in different connected components");
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (label[v] == label[order[0]] && !detail::sorted_contains(observers, v)) out.push_back(v);
  }
  if (out.empty()) throw EstimationError("no candidate sources");
  return out;
}

// Keeps the candidates s violating the fewest records, where a record
// (o, from) is met when hop(s, from) = hop(s, o) - 1.
std::vector<NodeId> shortest_path_consistent(const Graph& g, std::vector<NodeId> candidates,
                                             std::span<const Observation> cascades) {
  std::vector<std::size_t> violations(candidates.size(), 0);
  for (const auto& obs : cascades) {
    for (const auto& r : obs.records) {
      if (!g.has_edge(r.observer, r.from_node)) {
        throw InputError("observer " + std::to_string(r.observer) + " reports neighbor " +
                         std::to_string(r.from_node) + ", which is not adjacent");
      }
      const auto to_observer = hop_distances(g, r.observer);
      const auto to_from = hop_distances(g, r.from_node);
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        violations[i] += to_from[candidates[i]] != to_observer[candidates[i]] - 1;
      }
    }
  }
  const std::size_t fewest = *std::min_element(violations.begin(), violations.end());
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (violations[i] == fewest) out.push_back(candidates[i]);
  }
  return out;
}

struct Fused {
  std::vector<NodeId> common;     // observers active in every cascade
  std::vector<NodeId> observers;  // union of deployed observers
};

Fused fuse_observers(std::span<const Observation> cascades) {
  if (cascades.empty()) throw InputError("at least one cascade required");
  Fused f{cascades[0].active_observers, {}};
  for (const auto& obs : cascades) {
    std::vector<NodeId> next;
    std::set_intersection(f.common.begin(), f.common.end(), obs.active_observers.begin(),
                          obs.active_observers.end(), std::back_inserter(next));
    f.common = std::move(next);
    f.observers.insert(f.observers.end(), obs.observers.begin(), obs.observers.end());
    f.observers.insert(f.observers.end(), obs.active_observers.begin(),
                       obs.active_observers.end());
  }
  std::sort(f.observers.begin(), f.observers.end());
  f.observers.erase(std::unique(f.observers.begin(), f.observers.end()), f.observers.end());
  if (f.common.empty()) throw EstimationError("no observer is active in every cascade");
  return f;
}

Eigen::VectorXd mean_delays(std::span<const Observation> cascades, std::span<const NodeId> order) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(order.size() - 1));
  for (const auto& obs : cascades) sum += delays_for(obs, order);
  return sum / static_cast<double>(cascades.size());
}

}  // namespace

std::vector<CandidateScore> EstimatorResult::ranked() const {
  auto out = scores;
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  return out;
}

std::optional<double> EstimatorResult::score_of(NodeId v) const {
  auto it = std::lower_bound(scores.begin(), scores.end(), v,
                             [](const CandidateScore& c, NodeId id) { return c.node < id; });
  if (it == scores.end() || it->node != v) return std::nullopt;
  return it->score;
}

std::vector<NodeId> active_subtree(const Tree& t, const Observation& obs) {
  if (obs.active_count() == 0) throw EstimationError("no active observers");
  return to_nodes(t, explore_candidates(t, obs, obs.active_observers).candidates);
}

DelayVector delay_vector(const Observation& obs, std::optional<NodeId> reference) {
  if (obs.active_count() < 2) {
    throw EstimationError("delay vector needs at least two active observers");
  }
  DelayVector d;
  d.observers = detail::reference_order(obs.active_observers, reference);
  d.entries = delays_for(obs, d.observers);
  return d;
}

DeterministicDelay deterministic_delay(const Tree& t, NodeId s, std::span<const NodeId> observers,
                                       double mu) {
  if (observers.empty()) throw InputError("deterministic_delay: no observers");
  DeterministicDelay out{s, Eigen::VectorXd(static_cast<Eigen::Index>(observers.size() - 1))};
  const auto base = static_cast<double>(t.distance(s, observers[0]));
  for (std::size_t k = 1; k < observers.size(); ++k) {
    out.entries[static_cast<Eigen::Index>(k - 1)] =
        mu * (static_cast<double>(t.distance(s, observers[k])) - base);
  }
  return out;
}

DelayCovariance delay_covariance(const Tree& t, std::span<const NodeId> observers, double sigma) {
  if (observers.size() < 2) throw EstimationError("delay covariance needs two observers");
  const auto dim = static_cast<Eigen::Index>(observers.size() - 1);
  DelayCovariance out{Eigen::MatrixXd(dim, dim)};
  const double var = sigma * sigma;
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index i = 0; i <= k; ++i) {
      const NodeId ok = observers[static_cast<std::size_t>(k + 1)];
      const NodeId oi = observers[static_cast<std::size_t>(i + 1)];
      out.matrix(k, i) = out.matrix(i, k) =
          var * static_cast<double>(path_overlap(t, observers[0], ok, oi));
    }
  }
  return out;
}

double score(const DeterministicDelay& mu_s, const DelayCovariance& cov, const DelayVector& d) {
  if (mu_s.entries.size() != d.entries.size() || cov.matrix.rows() != d.entries.size() ||
      cov.matrix.cols() != d.entries.size()) {
    throw InputError("score: dimension mismatch");
  }
  return gaussian_score<double>(factor_covariance<double>(cov.matrix), mu_s.entries, d.entries);
}

EstimatorResult estimate_tree(const Tree& t, const Observation& obs, const DelayModel& model,
                              const EstimatorOptions& options) {
  model.validate();
  if (obs.active_count() == 0) throw EstimationError("no active observers");
  const auto order = detail::reference_order(obs.active_observers, options.reference);
  const Explored e = explore_candidates(t, obs, order);
  if (order.size() == 1) return detail::direction_only(to_nodes(t, e.candidates));
  return score_on_tree(t, e.candidates, order, e.reach, delays_for(obs, order), model,
                       options.tie_tolerance);
}

EstimatorResult estimate_graph(const Graph& g, const Observation& obs, const DelayModel& model,
                               const EstimatorOptions& options) {
  model.validate();
  if (obs.active_count() == 0) throw EstimationError("no active observers");
  const auto order = detail::reference_order(obs.active_observers, options.reference);
  auto candidates = component_candidates(g, order, obs.observers);
  if (options.graph_directions) {
    candidates = shortest_path_consistent(g, std::move(candidates), std::span(&obs, 1));
  }
  if (order.size() == 1) return detail::direction_only(candidates);
  return score_on_graph(g, candidates, order, delays_for(obs, order), model,
                        options.tie_tolerance);
}

EstimatorResult estimate_multi(const Tree& t, std::span<const Observation> cascades,
                               const DelayModel& model, const EstimatorOptions& options) {
  model.validate();
  const Fused fused = fuse_observers(cascades);
  std::vector<std::size_t> votes(t.size(), 0);
  for (const auto& obs : cascades) {
    for (NodeId p : explore_candidates(t, obs, obs.active_observers).candidates) ++votes[p];
  }
  const auto excluded = observer_mask(t, fused.observers);
  std::vector<NodeId> candidates;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (votes[i] == cascades.size() && !excluded[i]) candidates.push_back(static_cast<NodeId>(i));
  }
  if (candidates.empty()) throw EstimationError("cascades disagree on the arrival directions");
  if (fused.common.size() == 1) return detail::direction_only(to_nodes(t, candidates));
  const auto order = detail::reference_order(fused.common, options.reference);
  return score_on_tree(t, candidates, order, explore(t, order), mean_delays(cascades, order), model,
                       options.tie_tolerance);
}

EstimatorResult estimate_multi(const Graph& g, std::span<const Observation> cascades,
                               const DelayModel& model, const EstimatorOptions& options) {
  model.validate();
  const Fused fused = fuse_observers(cascades);
  const auto order = detail::reference_order(fused.common, options.reference);
  auto candidates = component_candidates(g, order, fused.observers);
  if (options.graph_directions) {
    candidates = shortest_path_consistent(g, std::move(candidates), cascades);
  }
  if (order.size() == 1) return detail::direction_only(candidates);
  return score_on_graph(g, candidates, order, mean_delays(cascades, order), model,
                        options.tie_tolerance);
}

double pmax_oracle(const Tree& t, const ObserverSet& observers) {
  const auto& obs = observers.nodes();
  const Reach reach = explore(t, obs);
  const auto excluded = observer_mask(t, obs);
  // Under deterministic delays every observer hears the source, the
  // directions pin the active subtree and the timings pin mu_s. Sources with
  // the same signature are indistinguishable; the estimator gets exactly one
  // per class right.
  std::map<std::vector<int>, std::size_t> classes;
  std::size_t sources = 0;
  std::vector<int> key(2 * obs.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (excluded[i]) continue;
    for (std::size_t j = 0; j < obs.size(); ++j) {
      key[j] = static_cast<int>(reach.step(i, j));
      key[obs.size() + j] = reach.distance(i, j) - reach.distance(i, 0);
    }
    ++classes[key];
    ++sources;
  }
  if (sources == 0) throw InputError("pmax_oracle: every node is an observer");
  return static_cast<double>(classes.size()) / static_cast<double>(sources);
}

}  // namespace sourceloc
