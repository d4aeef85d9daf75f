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

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "estimator_internal.hpp"
#include "sourceloc/error.hpp"
#include "sourceloc/estimator.hpp"

namespace sourceloc {

namespace {

std::vector<Edge> sorted_edges(const Path& p) {
  std::vector<Edge> e = p.edges;
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

// Deliberately shares nothing with estimate_tree beyond the Tree itself:
// directions are checked by walking each observer-to-candidate path, overlaps
// come from explicit edge-set intersection and the score is the full
// log-density through an LU inverse.
EstimatorResult gaussian_likelihood_oracle(const Tree& t, const Observation& obs,
                                           const DelayModel& model,
                                           const EstimatorOptions& options) {
  model.validate();
  if (obs.active_count() < 2) throw EstimationError("oracle needs two active observers");

  std::vector<NodeId> candidates;
  for (NodeId x = 0; x < t.node_count(); ++x) {
    if (!t.contains(x) || detail::sorted_contains(obs.observers, x)) continue;
    bool consistent = true;
    for (const auto& r : obs.records) {
      const Path p = path(t, r.observer, x);
      if (p.edges.empty() || p.edges.front() != make_edge(r.observer, r.from_node)) {
        consistent = false;
        break;
      }
    }
    if (consistent) candidates.push_back(x);
  }
  if (candidates.empty()) throw EstimationError("arrival directions are inconsistent");

  const auto order = detail::reference_order(obs.active_observers, options.reference);
  const auto dim = static_cast<Eigen::Index>(order.size() - 1);
  const double var = model.sigma > 0.0 ? model.sigma * model.sigma : 1.0;

  Eigen::VectorXd d(dim);
  Eigen::MatrixXd cov(dim, dim);
  std::vector<std::vector<Edge>> legs;
  for (std::size_t k = 1; k < order.size(); ++k) legs.push_back(sorted_edges(path(t, order[0], order[k])));
  for (Eigen::Index k = 0; k < dim; ++k) {
    d[k] = obs.record(order[static_cast<std::size_t>(k + 1)]).time - obs.record(order[0]).time;
    for (Eigen::Index i = 0; i < dim; ++i) {
      std::vector<Edge> shared;
      const auto& a = legs[static_cast<std::size_t>(k)];
      const auto& b = legs[static_cast<std::size_t>(i)];
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
      cov(k, i) = var * static_cast<double>(shared.size());
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
  if (!lu.isInvertible()) throw EstimationError("delay covariance is singular");
  const Eigen::MatrixXd precision = lu.inverse();
  const double log_norm =
      -0.5 * (static_cast<double>(dim) * std::log(2.0 * std::numbers::pi) +
              std::log(std::abs(lu.determinant())));

  std::vector<CandidateScore> scores;
  Eigen::VectorXd mean(dim);
  for (NodeId s : candidates) {
    const auto to_reference = static_cast<double>(path(t, s, order[0]).length());
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto to_other =
          static_cast<double>(path(t, s, order[static_cast<std::size_t>(k + 1)]).length());
      mean[k] = model.mu * (to_other - to_reference);
    }
    const Eigen::VectorXd r = d - mean;
    scores.push_back({s, log_norm - 0.5 * r.dot(precision * r)});
  }
  return detail::finalize(std::move(scores), options.tie_tolerance);
}

}  // namespace sourceloc
