// Copyright 2026 The qdl Authors
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

#include <cmath>

#include <Eigen/Dense>

#include "qdl/amplitude.hpp"
#include "qdl/error.hpp"

namespace qdl {

/// Below this squared norm the nonlinear output state is undefined.
inline constexpr double kCollapseThreshold = 1e-24;

struct NonlinearResult {
  Eigen::VectorXd beta;  // unnormalized
  double a;              // sum of beta_i^2
};

/// Quadratic amplitude map of the hidden and output layers. With
/// S = sum_j alpha_j, every component is scaled by S except the last, which
/// is scaled by S - 2 alpha_last.
inline NonlinearResult nonlinear_map(const Eigen::VectorXd& alpha) {
  const Eigen::Index last = alpha.size() - 1;
  const double sum = alpha.sum();
  Eigen::VectorXd beta = alpha * sum;
  beta[last] = alpha[last] * (sum - 2.0 * alpha[last]);
  const double a = beta.squaredNorm();
  return {std::move(beta), a};
}

inline NonlinearResult nonlinear_map(const AmplitudeVector& alpha) {
  return nonlinear_map(alpha.values());
}

/// Nonlinear layer followed by branch renormalization. The |0> branch picks
/// up a factor sqrt(a) before renormalizing, so after layers a_1..a_L
/// gamma^2 = prod(a) / (prod(a) + 1).
inline BranchState apply_nonlinear(BranchState state, double* layer_factor = nullptr) {
  NonlinearResult nl = nonlinear_map(state.out_vec);
  if (layer_factor != nullptr) *layer_factor = nl.a;
  if (!(nl.a >= kCollapseThreshold)) {
    throw NonlinearCollapse(nl.a);
  }
  state.out_vec = AmplitudeVector(nl.beta / std::sqrt(nl.a));
  state.raw_weight *= std::sqrt(nl.a);
  const double denom = std::sqrt(state.raw_weight * state.raw_weight + 1.0);
  state.gamma = state.raw_weight / denom;
  state.lambda = 1.0 / denom;
  return state;
}

}  // namespace qdl
