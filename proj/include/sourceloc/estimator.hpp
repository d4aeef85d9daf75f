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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "sourceloc/diffusion.hpp"
#include "sourceloc/error.hpp"
#include "sourceloc/graph.hpp"
#include "sourceloc/placement.hpp"
#include "sourceloc/tree.hpp"

namespace sourceloc {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Arrival-time differences relative to a reference observer:
/// entries[k] = t(observers[k + 1]) - t(observers[0]).
struct DelayVector {
  std::vector<NodeId> observers;  // reference first, the rest ascending
  Eigen::VectorXd entries;

  NodeId reference() const { return observers.front(); }
};

/// Expected DelayVector if `candidate` were the source:
/// entries[k] = mu * (|P(s, o_{k+1})| - |P(s, o_1)|).
struct DeterministicDelay {
  NodeId candidate = kNoNode;
  Eigen::VectorXd entries;
};

/// Covariance of the DelayVector: sigma^2 times the path overlaps
/// |P(o_1, o_{k+1}) ∩ P(o_1, o_{i+1})| (the diagonal is the full path length).
struct DelayCovariance {
  Eigen::MatrixXd matrix;
};

/// Log-likelihood ratio score mu_s' cov^-1 (d - mu_s / 2) through an existing
/// Cholesky factor. Equals the Gaussian log-density of d up to a term that does
/// not depend on the candidate.
template <typename Scalar, typename MuDerived, typename DDerived>
Scalar gaussian_score(const Eigen::LLT<Matrix<Scalar>>& cov, const Eigen::MatrixBase<MuDerived>& mu_s,
                      const Eigen::MatrixBase<DDerived>& d) {
  const Vector<Scalar> centered = d - Scalar(0.5) * mu_s;
  return mu_s.dot(cov.solve(centered));
}

/// Factors `cov`; throws EstimationError when it is not positive definite.
template <typename Scalar>
Eigen::LLT<Matrix<Scalar>> factor_covariance(const Matrix<Scalar>& cov) {
  Eigen::LLT<Matrix<Scalar>> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw EstimationError("delay covariance is not positive definite (duplicate observers?)");
  }
  return llt;
}

enum class EstimateStatus {
  unique,         // one best candidate
  tie,            // several candidates within the tie tolerance
  direction_only  // fewer than two active observers, no timing information
};

struct CandidateScore {
  NodeId node = kNoNode;
  double score = 0.0;
};

struct EstimatorResult {
  std::vector<CandidateScore> scores;  // ascending node id
  NodeId estimate = kNoNode;           // smallest id in tied_top
  std::vector<NodeId> tied_top;        // ascending
  EstimateStatus status = EstimateStatus::unique;

  /// Best first; equal scores by ascending id.
  std::vector<CandidateScore> ranked() const;
  std::optional<double> score_of(NodeId v) const;
};

struct EstimatorOptions {
  /// Reference observer o_1; defaults to the smallest active observer.
  std::optional<NodeId> reference;
  /// Scores within tie_tolerance * max(1, |best|) of the best are ties.
  double tie_tolerance = 1e-9;
  /// Graph estimators only: keep the candidates with the fewest records whose
  /// reported neighbor is off every shortest path to the observer.
  bool graph_directions = true;
};

/// Nodes consistent with every arrival direction: for each active observer o
/// that heard from v, the side of edge (o, v) containing v. Observers are
/// removed. Throws EstimationError if the directions are inconsistent.
std::vector<NodeId> active_subtree(const Tree& t, const Observation& obs);

/// Throws EstimationError with fewer than two active observers.
DelayVector delay_vector(const Observation& obs, std::optional<NodeId> reference = {});

/// `observers` in DelayVector order (reference first).
DeterministicDelay deterministic_delay(const Tree& t, NodeId s, std::span<const NodeId> observers,
                                       double mu);

DelayCovariance delay_covariance(const Tree& t, std::span<const NodeId> observers, double sigma);

double score(const DeterministicDelay& mu_s, const DelayCovariance& cov, const DelayVector& d);

/// Maximum-likelihood source on a tree over the active subtree.
EstimatorResult estimate_tree(const Tree& t, const Observation& obs, const DelayModel& model,
                              const EstimatorOptions& options = {});

/// Brute-force check for estimate_tree: enumerates candidates by explicit path
/// walks and evaluates the full multivariate normal log-density per candidate.
EstimatorResult gaussian_likelihood_oracle(const Tree& t, const Observation& obs,
                                           const DelayModel& model,
                                           const EstimatorOptions& options = {});

/// Scores every non-observer in the active observers' component against the
/// breadth-first tree rooted at that candidate.
EstimatorResult estimate_graph(const Graph& g, const Observation& obs, const DelayModel& model,
                               const EstimatorOptions& options = {});

/// Fuses independent cascades from one source: averages the delay vectors over
/// the observers active in every cascade and intersects the direction
/// constraints, then scores once.
EstimatorResult estimate_multi(const Tree& t, std::span<const Observation> cascades,
                               const DelayModel& model, const EstimatorOptions& options = {});
EstimatorResult estimate_multi(const Graph& g, std::span<const Observation> cascades,
                               const DelayModel& model, const EstimatorOptions& options = {});

/// Localization probability of the optimal estimator under deterministic
/// delays, for a source uniform over the non-observers.
double pmax_oracle(const Tree& t, const ObserverSet& observers);

}  // namespace sourceloc
