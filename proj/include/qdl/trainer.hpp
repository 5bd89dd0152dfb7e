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
 * @file trainer.hpp
 * Finite-difference training of the mesh angles.
 *
 * Each iteration evaluates AccEk at the current angles, then once more per
 * angle with that angle shifted by +epsilon, and moves every angle at once:
 *
 *     grad_m = (AccEk(zeta + epsilon e_m) - AccEk(zeta)) / epsilon
 *     zeta  <- zeta - learning_rate * grad
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <future>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qdl/error.hpp"
#include "qdl/loss.hpp"
#include "qdl/network.hpp"

namespace qdl {

struct TrainingConfig {
  double epsilon = 0.001;       // radians
  double learning_rate = 0.05;  // radians
  std::size_t iterations = 5000;
  std::uint64_t seed = 0;  // initialization seed, recorded for lineage
  MeasurementMode mode = ExactMeasurement{};
  // Worker threads for the per-angle evaluations. Results do not depend on it.
  std::size_t threads = 1;

  void validate() const {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::Usage, "epsilon must be > 0");
    if (!(learning_rate >= 0.0)) throw Error(ErrorKind::Usage, "learning rate must be >= 0");
    if (iterations < 1) throw Error(ErrorKind::Usage, "iterations must be >= 1");
    if (const auto* plan = std::get_if<ShotPlan>(&mode)) plan->validate();
  }
};

struct Gradient {
  std::vector<double> components;
  // Set where every sample collapsed at the shifted point; that component is 0.
  std::vector<bool> collapsed_at_perturbation;
};

struct TrainingTrace {
  std::vector<double> acc_mse_per_iteration;
  std::size_t best_iteration = 0;
  std::vector<double> best_params;
  std::vector<std::size_t> collapsed_sample_counts;
};

struct TrainingResult {
  NetworkConfig best;
  TrainingTrace trace;
};

/// Training stopped because no sample survived at the current angles.
class TrainingAborted : public Error {
 public:
  TrainingAborted(const std::string& what, TrainingTrace partial)
      : Error(ErrorKind::AllSamplesCollapsed, what), trace_(std::move(partial)) {}

  [[nodiscard]] const TrainingTrace& trace() const noexcept { return trace_; }

 private:
  TrainingTrace trace_;
};

namespace detail {

/// Runs body(m) for m in [0, count) on up to `threads` workers, each owning a
/// contiguous block of indices.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t m = 0; m < count; ++m) body(m);
    return;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t begin = 0; begin < count; begin += chunk) {
    const std::size_t end = std::min(count, begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&body, begin, end] {
      for (std::size_t m = begin; m < end; ++m) body(m);
    }));
  }
  std::exception_ptr first_error;
  for (auto& job : jobs) {
    try {
      job.get();
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Forward-difference gradient at `config`; `base_loss` is AccEk there.
inline Gradient gradient(const NetworkConfig& config, std::span<const LabeledSample> dataset,
                         const TrainingConfig& train_cfg, double base_loss) {
  const std::vector<double> base = param_view(config);
  Gradient grad{std::vector<double>(base.size(), 0.0), std::vector<bool>(base.size(), false)};
  std::vector<char> collapsed(base.size(), 0);

  detail::parallel_for(base.size(), train_cfg.threads, [&](std::size_t m) {
    std::vector<double> shifted = base;
    shifted[m] += train_cfg.epsilon;
    try {
      const double loss =
          accumulated_mse(with_params(config, shifted), dataset, train_cfg.mode).acc_mse;
      grad.components[m] = (loss - base_loss) / train_cfg.epsilon;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AllSamplesCollapsed) throw;
      collapsed[m] = 1;
    }
  });
  for (std::size_t m = 0; m < base.size(); ++m) grad.collapsed_at_perturbation[m] = collapsed[m] != 0;
  return grad;
}

inline TrainingResult train(const NetworkConfig& config, std::span<const LabeledSample> dataset,
                            const TrainingConfig& train_cfg) {
  train_cfg.validate();
  if (dataset.empty()) throw Error(ErrorKind::EmptyDataset, "training set is empty");

  TrainingTrace trace;
  trace.acc_mse_per_iteration.reserve(train_cfg.iterations);
  trace.collapsed_sample_counts.reserve(train_cfg.iterations);

  std::vector<double> params = param_view(config);
  double best_loss = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0; it < train_cfg.iterations; ++it) {
    const NetworkConfig current = with_params(config, params);
    LossEvaluation base;
    try {
      base = accumulated_mse(current, dataset, train_cfg.mode);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AllSamplesCollapsed) throw;
      throw TrainingAborted("iteration " + std::to_string(it) + ": " + e.what(),
                            std::move(trace));
    }
    trace.acc_mse_per_iteration.push_back(base.acc_mse);
    trace.collapsed_sample_counts.push_back(base.skipped());
    if (base.acc_mse < best_loss) {
      best_loss = base.acc_mse;
      trace.best_iteration = it;
      trace.best_params = params;
    }

    const Gradient grad = gradient(current, dataset, train_cfg, base.acc_mse);
    for (std::size_t m = 0; m < params.size(); ++m) {
      params[m] -= train_cfg.learning_rate * grad.components[m];
    }
  }
  return {with_params(config, trace.best_params), std::move(trace)};
}

}  // namespace qdl
