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

#include <optional>
#include <span>
#include <vector>

#include "sourceloc/estimator.hpp"

namespace sourceloc::detail {

/// Picks the best score, collects ties, sets status.
EstimatorResult finalize(std::vector<CandidateScore> scores, double tie_tolerance);

/// Every candidate scores 0 and ties; used when timing carries no information.
EstimatorResult direction_only(const std::vector<NodeId>& candidates);

/// `active` (ascending) reordered so `reference` comes first.
std::vector<NodeId> reference_order(std::span<const NodeId> active,
                                    std::optional<NodeId> reference);

/// Scale applied to unit-variance covariances. For sigma = 0 the normalized
/// covariance is kept: scores then equal the sigma -> 0 limit up to a positive
/// factor, so the ranking is unchanged.
inline double variance_scale(double sigma) { return sigma > 0.0 ? sigma * sigma : 1.0; }

/// gaussian_score for many candidates under one covariance, rewritten as
/// mu_s' w - |L^-1 mu_s|^2 / 2 with w = cov^-1 d: one triangular solve per
/// candidate and no allocation.
class SharedCovarianceScorer {
 public:
  SharedCovarianceScorer(const Eigen::LLT<Eigen::MatrixXd>& chol, const Eigen::VectorXd& d)
      : chol_(chol), w_(chol.solve(d)), scratch_(d.size()) {}

  double operator()(const Eigen::VectorXd& mu_s) {
    scratch_ = mu_s;
    chol_.matrixL().solveInPlace(scratch_);
    return mu_s.dot(w_) - 0.5 * scratch_.squaredNorm();
  }

 private:
  const Eigen::LLT<Eigen::MatrixXd>& chol_;
  Eigen::VectorXd w_;
  Eigen::VectorXd scratch_;
};

bool sorted_contains(std::span<const NodeId> sorted, NodeId v);

}  // namespace sourceloc::detail
