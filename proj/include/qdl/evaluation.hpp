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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdl/amplitude.hpp"
#include "qdl/error.hpp"
#include "qdl/network.hpp"

namespace qdl {

inline const std::vector<double> kDefaultThresholds{0.5, 0.6, 0.7, 0.8, 0.9};

/// F = <v|k><k|v>.
inline double fidelity(const AmplitudeVector& k, const AmplitudeVector& v) {
  const double overlap = inner(k, v);
  return overlap * overlap;
}

struct SampleRecognition {
  std::size_t true_class = 0;
  std::optional<double> fidelity;  // empty when the forward pass collapsed
  std::vector<bool> recognized;    // one flag per threshold
  // Class whose label state has the highest fidelity. Supplementary only.
  std::optional<std::size_t> argmax_class;
};

struct RecognitionReport {
  std::vector<double> thresholds;
  std::vector<double> rate_per_threshold;
  std::vector<SampleRecognition> per_sample;
  std::size_t collapsed = 0;
  // Fraction whose argmax_class equals the true class. Supplementary only.
  double argmax_accuracy = 0.0;
};

/// A sample counts as recognized at threshold t iff its fidelity to its own
/// label is strictly greater than t. Collapsed samples are never recognized.
inline RecognitionReport recognition_report(const NetworkConfig& config,
                                            std::span<const LabeledSample> test,
                                            const std::vector<double>& thresholds = kDefaultThresholds) {
  if (test.empty()) throw Error(ErrorKind::EmptyDataset, "test set is empty");
  const CompiledNetwork net(config);

  std::map<std::size_t, const AmplitudeVector*> labels;
  for (const auto& s : test) labels.emplace(s.class_index, &s.label);

  RecognitionReport report;
  report.thresholds = thresholds;
  std::vector<std::size_t> hits(thresholds.size(), 0);
  std::size_t argmax_hits = 0;

  for (const auto& sample : test) {
    SampleRecognition row;
    row.true_class = sample.class_index;
    row.recognized.assign(thresholds.size(), false);
    try {
      const AmplitudeVector k = output_state(net, sample.input);
      const double f = fidelity(k, sample.label);
      row.fidelity = f;
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        if (f > thresholds[t]) {
          row.recognized[t] = true;
          ++hits[t];
        }
      }
      double best = -1.0;
      for (const auto& [cls, label] : labels) {
        const double fc = fidelity(k, *label);
        if (fc > best) {
          best = fc;
          row.argmax_class = cls;
        }
      }
      if (row.argmax_class == sample.class_index) ++argmax_hits;
    } catch (const NonlinearCollapse&) {
      ++report.collapsed;
    }
    report.per_sample.push_back(std::move(row));
  }

  const auto total = static_cast<double>(test.size());
  for (std::size_t h : hits) report.rate_per_threshold.push_back(static_cast<double>(h) / total);
  report.argmax_accuracy = static_cast<double>(argmax_hits) / total;
  return report;
}

struct ProjectionRow {
  std::array<double, 4> x;  // (x1/A, x2/A) and (x3/A, x4/A)
  std::size_t class_index;
};

/// Plot-ready rows for the two 2-D projections of 4-dimensional states.
inline std::vector<ProjectionRow> projection_data(
    std::span<const std::pair<AmplitudeVector, std::size_t>> vectors) {
  std::vector<ProjectionRow> rows;
  rows.reserve(vectors.size());
  for (const auto& [v, cls] : vectors) {
    if (v.dim() != 4) {
      throw Error(ErrorKind::BadDimension,
                  "projection needs dim 4, got " + std::to_string(v.dim()));
    }
    rows.push_back({{v[0], v[1], v[2], v[3]}, cls});
  }
  return rows;
}

struct ResourceCount {
  std::size_t qubits;
  std::size_t paths;
  std::size_t combiners;
  std::size_t detectors;

  friend bool operator==(const ResourceCount&, const ResourceCount&) = default;
};

/// Hardware needed to estimate the distance between two N-dimensional unit
/// vectors with the GHZ scheme.
inline ResourceCount resource_estimate(std::size_t dim) {
  if (dim < 2 || !is_power_of_two(dim)) {
    throw Error(ErrorKind::BadDimension, "N=" + std::to_string(dim) + " is not a power of two >= 2");
  }
  const std::size_t n = log2_exact(dim);
  return {1 + n, 2 + 2 * n, n, 2 + n};
}

}  // namespace qdl
