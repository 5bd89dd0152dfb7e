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

/**
 * @file measurement.hpp
 * Loss extraction from ancilla measurements on
 *
 *     gamma |0>|k> + lambda |1>|v>.
 *
 * Measurement 1 (Z basis) yields gamma^2 and lambda^2. Measurement 2 uses
 * |phi> = lambda|0> - gamma|1>, whose projection leaves gamma*lambda (|k>-|v>)
 * on the data register, so P(phi) = gamma^2 lambda^2 E and
 * E = P / (gamma^2 lambda^2).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "qdl/amplitude.hpp"
#include "qdl/error.hpp"

namespace qdl {

/// Floor on gamma^2 and lambda^2 before E = P / (gamma^2 lambda^2) is refused.
inline constexpr double kDegenerateBranch = 1e-12;

struct MseEstimate {
  double gamma_sq;
  double lambda_sq;
  double p_phi;
  double mse;
};

/// Which |phi> the second measurement is rotated to.
enum class PhiBasis {
  Exact,      // from the true gamma, lambda of the state
  Estimated,  // from the first measurement's shot estimates
};

struct ShotPlan {
  std::uint64_t shots_weights = 10000;
  std::uint64_t shots_projection = 10000;
  std::uint64_t rng_seed = 0;
  PhiBasis basis = PhiBasis::Exact;

  void validate() const {
    if (shots_weights < 1 || shots_projection < 1) {
      throw Error(ErrorKind::Usage, "shot counts must be >= 1");
    }
  }

  /// Independent stream for the sample at `index`, so evaluation order does
  /// not change the draws.
  [[nodiscard]] ShotPlan for_sample(std::uint64_t index) const {
    std::seed_seq seq{static_cast<std::uint32_t>(rng_seed),
                      static_cast<std::uint32_t>(rng_seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    ShotPlan plan = *this;
    plan.rng_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return plan;
  }
};

/// Rotates the |1...1> branch to the sample label.
inline BranchState prepare_label(BranchState state, const AmplitudeVector& label) {
  detail::require_same_dim(state.label_vec, label);
  detail::require_normalized(label, "label");
  state.label_vec = label;
  return state;
}

namespace detail {

/// Probability of projecting the ancilla onto phi_0|0> + phi_1|1>:
/// the data-register residue is phi_0 gamma |k> + phi_1 lambda |v>.
inline double projection_probability(const BranchState& s, double phi_0, double phi_1) {
  const Eigen::VectorXd residue =
      (phi_0 * s.gamma) * s.out_vec.values() + (phi_1 * s.lambda) * s.label_vec.values();
  return residue.squaredNorm();
}

inline void require_nondegenerate(const BranchState& s) {
  const double g2 = s.gamma * s.gamma;
  const double l2 = s.lambda * s.lambda;
  if (g2 < kDegenerateBranch || l2 < kDegenerateBranch) {
    throw Error(ErrorKind::DegenerateBranch,
                "gamma^2=" + std::to_string(g2) + ", lambda^2=" + std::to_string(l2));
  }
}

}  // namespace detail

inline MseEstimate measure_exact(const BranchState& state) {
  detail::require_nondegenerate(state);
  const double g2 = state.gamma * state.gamma;
  const double l2 = state.lambda * state.lambda;
  const double p_phi = detail::projection_probability(state, state.lambda, -state.gamma);
  return {g2, l2, p_phi, p_phi / (g2 * l2)};
}

/// Finite-repetition version of measure_exact: each measurement is a run of
/// Bernoulli trials, deterministic for a given plan.
inline MseEstimate measure_shots(const BranchState& state, const ShotPlan& plan) {
  plan.validate();
  detail::require_nondegenerate(state);
  std::mt19937_64 rng(plan.rng_seed);

  const double g2 = state.gamma * state.gamma;
  std::binomial_distribution<std::uint64_t> zero_outcomes(plan.shots_weights,
                                                          std::clamp(g2, 0.0, 1.0));
  const double g2_hat =
      static_cast<double>(zero_outcomes(rng)) / static_cast<double>(plan.shots_weights);
  const double l2_hat = 1.0 - g2_hat;

  double phi_0 = state.lambda;
  double phi_1 = -state.gamma;
  if (plan.basis == PhiBasis::Estimated) {
    phi_0 = std::sqrt(l2_hat);
    phi_1 = -std::sqrt(g2_hat);
  }
  const double p_exact = std::clamp(detail::projection_probability(state, phi_0, phi_1), 0.0, 1.0);
  std::binomial_distribution<std::uint64_t> phi_outcomes(plan.shots_projection, p_exact);
  const double p_hat =
      static_cast<double>(phi_outcomes(rng)) / static_cast<double>(plan.shots_projection);

  const double denom = g2_hat * l2_hat;
  if (denom == 0.0) {
    throw Error(ErrorKind::DegenerateEstimate,
                "estimated gamma^2=" + std::to_string(g2_hat) + " leaves E undefined");
  }
  return {g2_hat, l2_hat, p_hat, p_hat / denom};
}

}  // namespace qdl
