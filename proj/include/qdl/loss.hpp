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

#include <cstddef>
#include <span>
#include <string>
#include <variant>

#include "qdl/error.hpp"
#include "qdl/measurement.hpp"
#include "qdl/network.hpp"

namespace qdl {

struct ExactMeasurement {};

/// Exact probabilities, or finite repetitions described by a ShotPlan.
using MeasurementMode = std::variant<ExactMeasurement, ShotPlan>;

struct LossEvaluation {
  double acc_mse = 0.0;
  std::size_t evaluated = 0;
  std::size_t collapsed = 0;   // NonlinearCollapse, skipped
  std::size_t degenerate = 0;  // shot estimate with gamma_hat^2 lambda_hat^2 == 0, skipped

  [[nodiscard]] std::size_t skipped() const noexcept { return collapsed + degenerate; }
};

/// MSE for one sample through the two-measurement protocol.
inline MseEstimate sample_mse(const CompiledNetwork& net, const LabeledSample& sample,
                              const MeasurementMode& mode, std::size_t sample_index) {
  const BranchState state = forward(net, sample.input, sample.label);
  if (const auto* plan = std::get_if<ShotPlan>(&mode)) {
    return measure_shots(state, plan->for_sample(sample_index));
  }
  return measure_exact(state);
}

/// AccEk: mean per-sample MSE. Samples are summed in index order so the
/// result does not depend on how evaluation is scheduled.
inline LossEvaluation accumulated_mse(const CompiledNetwork& net,
                                      std::span<const LabeledSample> samples,
                                      const MeasurementMode& mode) {
  if (samples.empty()) {
    throw Error(ErrorKind::EmptyDataset, "no samples to evaluate");
  }
  LossEvaluation eval;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      sum += sample_mse(net, samples[i], mode, i).mse;
      ++eval.evaluated;
    } catch (const NonlinearCollapse&) {
      ++eval.collapsed;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateEstimate) throw;
      ++eval.degenerate;
    }
  }
  if (eval.evaluated == 0) {
    throw Error(ErrorKind::AllSamplesCollapsed,
                "all " + std::to_string(samples.size()) + " samples were skipped");
  }
  eval.acc_mse = sum / static_cast<double>(eval.evaluated);
  return eval;
}

inline LossEvaluation accumulated_mse(const NetworkConfig& config,
                                      std::span<const LabeledSample> samples,
                                      const MeasurementMode& mode = ExactMeasurement{}) {
  return accumulated_mse(CompiledNetwork(config), samples, mode);
}

}  // namespace qdl
