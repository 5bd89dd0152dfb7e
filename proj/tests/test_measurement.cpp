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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qdl/loss.hpp"
#include "qdl/measurement.hpp"
#include "support/oracles.hpp"

namespace qdl {
namespace {

BranchState weighted_state(double gamma_sq, const AmplitudeVector& k, const AmplitudeVector& v) {
  const double g = std::sqrt(gamma_sq);
  const double l = std::sqrt(1.0 - gamma_sq);
  return BranchState{g, l, k, v, g / l};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TEST(PrepareLabel, SetsOnlyLabelBranch) {
  const BranchState base = set_input(ghz_init(2), AmplitudeVector{0.6, 0.8, 0, 0});
  const BranchState s = prepare_label(base, AmplitudeVector{1, 0, 0, 0});
  EXPECT_EQ(s.label_vec, (AmplitudeVector{1, 0, 0, 0}));
  EXPECT_EQ(s.out_vec, base.out_vec);
  EXPECT_EQ(s.gamma, base.gamma);
  EXPECT_EQ(prepare_label(s, s.label_vec).label_vec, s.label_vec);
  EXPECT_EQ(prepare_label(base, AmplitudeVector{0, 0, 1, 0}).label_vec,
            (AmplitudeVector{0, 0, 1, 0}));
  EXPECT_THROW(prepare_label(base, AmplitudeVector{1, 1, 0, 0}), Error);
  EXPECT_THROW(prepare_label(base, AmplitudeVector{1, 0}), Error);
}

TEST(MeasureExact, IdenticalBranchesGiveZero) {
  const AmplitudeVector k{0.6, 0.8, 0, 0};
  const MseEstimate e = measure_exact(prepare_label(set_input(ghz_init(2), k), k));
  EXPECT_EQ(e.p_phi, 0.0);
  EXPECT_EQ(e.mse, 0.0);
}

TEST(MeasureExact, OrthogonalEqualWeights) {
  // P = 1/4 * 2.
  const MseEstimate e = measure_exact(
      prepare_label(ghz_init(2), AmplitudeVector::basis(4, 1)));
  EXPECT_NEAR(e.gamma_sq, 0.5, 1e-15);
  EXPECT_NEAR(e.lambda_sq, 0.5, 1e-15);
  EXPECT_NEAR(e.p_phi, 0.5, 1e-15);
  EXPECT_NEAR(e.mse, 2.0, 1e-12);
}

TEST(MeasureExact, UnequalWeightsRoundTrip) {
  // |k - v|^2 = 2 - 2 * 0.5 = 1, so P = 0.9 * 0.1 * 1.
  const AmplitudeVector k{1.0, 0.0};
  const AmplitudeVector v{0.5, std::sqrt(0.75)};
  const MseEstimate e = measure_exact(weighted_state(0.9, k, v));
  EXPECT_NEAR(e.gamma_sq, 0.9, 1e-15);
  EXPECT_NEAR(e.p_phi, 0.09, 1e-15);
  EXPECT_NEAR(e.mse, 1.0, 1e-12);
}

TEST(MeasureExact, DegenerateBranch) {
  const AmplitudeVector k{1.0, 0.0};
  BranchState s{1.0, 0.0, k, k, 1e9};
  try {
    measure_exact(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateBranch);
  }
}

TEST(MeasureExact, AgreesWithDistanceAndFullStateProjection) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    const NetworkConfig config = NetworkConfig::random(4, 1 + trial % 3, rng());
    const AmplitudeVector x = testing::random_unit(4, rng);
    const AmplitudeVector v = testing::random_unit(4, rng);
    const BranchState s = forward(config, x, v);
    const MseEstimate e = measure_exact(s);
    EXPECT_NEAR(e.mse, distance_squared(s.out_vec, s.label_vec), 1e-12);
    EXPECT_GE(e.mse, 0.0);
    EXPECT_LE(e.mse, 4.0);
    if (inner(s.out_vec, s.label_vec) >= 0.0) EXPECT_LE(e.mse, 2.0 + 1e-12);

    const testing::FullState full = testing::scripted_forward(config, x, v);
    const double g = full.branch0.norm();
    const double l = full.branch1.norm();
    EXPECT_NEAR(e.p_phi, testing::full_projection_probability(full, l, -g), 1e-12);
  }
}

TEST(MeasureExact, ComplementaryOutcomeProbability) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 1000; ++trial) {
    BranchState s = weighted_state(std::uniform_real_distribution<double>(0.05, 0.95)(rng),
                                   testing::random_unit(8, rng), testing::random_unit(8, rng));
    const double g2 = s.gamma * s.gamma;
    const double l2 = s.lambda * s.lambda;
    const double kv = inner(s.out_vec, s.label_vec);
    const MseEstimate e = measure_exact(s);
    EXPECT_NEAR(e.p_phi, g2 * l2 * (2.0 - 2.0 * kv), 1e-12);
    EXPECT_NEAR(1.0 - e.p_phi, g2 * g2 + l2 * l2 + 2.0 * g2 * l2 * kv, 1e-12);
  }
}

TEST(MeasureShots, ZeroProbabilityStaysZero) {
  const AmplitudeVector k{0.6, 0.8, 0, 0};
  const BranchState s = prepare_label(set_input(ghz_init(2), k), k);
  for (std::uint64_t shots : {1u, 10u, 1000u}) {
    ShotPlan plan{1000, shots, 5};
    const MseEstimate e = measure_shots(s, plan);
    EXPECT_EQ(e.p_phi, 0.0);
    EXPECT_EQ(e.mse, 0.0);
  }
}

TEST(MeasureShots, BinomialStandardError) {
  // p = 1/2 with 1000 repetitions: sd = sqrt(0.25 / 1000) ~ 0.0158.
  const BranchState s = prepare_label(ghz_init(2), AmplitudeVector::basis(4, 1));
  ASSERT_NEAR(measure_exact(s).p_phi, 0.5, 1e-15);
  const int reps = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double p = measure_shots(s, ShotPlan{1000, 1000, static_cast<std::uint64_t>(r)}).p_phi;
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / reps;
  const double sd = std::sqrt(sum_sq / reps - mean * mean);
  EXPECT_NEAR(mean, 0.5, 0.001);
  EXPECT_NEAR(sd, std::sqrt(0.25 / 1000.0), 0.03 * std::sqrt(0.25 / 1000.0));
}

TEST(MeasureShots, ConvergesWithMoreShots) {
  std::mt19937_64 rng(71);
  const BranchState s = weighted_state(0.7, testing::random_unit(4, rng), testing::random_unit(4, rng));
  const double exact = measure_exact(s).mse;
  std::vector<double> medians;
  for (std::uint64_t shots : {100u, 1000u, 10000u, 100000u}) {
    std::vector<double> errors;
    for (std::uint64_t t = 0; t < 100; ++t) {
      errors.push_back(std::abs(measure_shots(s, ShotPlan{shots, shots, 1000 + t}).mse - exact));
    }
    medians.push_back(median(errors));
  }
  int inversions = 0;
  for (std::size_t i = 1; i < medians.size(); ++i) inversions += medians[i] > medians[i - 1];
  EXPECT_LE(inversions, 1);
  EXPECT_LT(medians.back(), 0.02);
}

TEST(MeasureShots, Deterministic) {
  std::mt19937_64 rng(73);
  const BranchState s = weighted_state(0.4, testing::random_unit(4, rng), testing::random_unit(4, rng));
  const ShotPlan plan{500, 700, 99};
  const MseEstimate a = measure_shots(s, plan);
  const MseEstimate b = measure_shots(s, plan);
  EXPECT_EQ(a.gamma_sq, b.gamma_sq);
  EXPECT_EQ(a.p_phi, b.p_phi);
  EXPECT_EQ(a.mse, b.mse);
}

TEST(MeasureShots, SingleShotIsDegenerate) {
  const BranchState s = prepare_label(ghz_init(2), AmplitudeVector::basis(4, 1));
  try {
    measure_shots(s, ShotPlan{1, 10, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateEstimate);
  }
  EXPECT_THROW(measure_shots(s, ShotPlan{0, 10, 3}), Error);
}

TEST(MeasureShots, EstimatedBasisStillConverges) {
  std::mt19937_64 rng(79);
  const BranchState s = weighted_state(0.3, testing::random_unit(4, rng), testing::random_unit(4, rng));
  ShotPlan plan{1000000, 1000000, 7, PhiBasis::Estimated};
  EXPECT_NEAR(measure_shots(s, plan).mse, measure_exact(s).mse, 0.02);
}

TEST(ShotPlan, PerSampleSeedsDiffer) {
  const ShotPlan plan{10, 10, 42};
  EXPECT_NE(plan.for_sample(0).rng_seed, plan.for_sample(1).rng_seed);
  EXPECT_EQ(plan.for_sample(5).rng_seed, plan.for_sample(5).rng_seed);
}

TEST(AccumulatedMse, MeanOfSamples) {
  const NetworkConfig id = NetworkConfig::identity(4, 1);
  const AmplitudeVector e0 = AmplitudeVector::basis(4, 0);
  const AmplitudeVector e1 = AmplitudeVector::basis(4, 1);
  const std::vector<LabeledSample> one{{e0, e0, 0}};
  EXPECT_EQ(accumulated_mse(id, one).acc_mse, 0.0);
  const std::vector<LabeledSample> two{{e0, e0, 0}, {e0, e1, 1}};
  EXPECT_NEAR(accumulated_mse(id, two).acc_mse, 1.0, 1e-12);
}

TEST(AccumulatedMse, IrisTrainingSetEqualsPerSampleSum) {
  const auto data = iris::split(iris::load_iris(testing::iris_path()), 7);
  const NetworkConfig config = NetworkConfig::random(4, 2, 8);
  double sum = 0.0;
  for (const auto& s : data.train) sum += measure_exact(forward(config, s.input, s.label)).mse;
  const LossEvaluation eval = accumulated_mse(config, data.train);
  EXPECT_EQ(eval.evaluated, 120u);
  EXPECT_NEAR(eval.acc_mse, sum / 120.0, 1e-12);
  EXPECT_NEAR(eval.acc_mse, testing::scripted_acc_mse(config, data.train), 1e-12);
}

TEST(AccumulatedMse, SkipsAndCountsCollapsedSamples) {
  const NetworkConfig id = NetworkConfig::identity(4, 1);
  const double x = 1.0 / std::sqrt(2.0);
  const AmplitudeVector e0 = AmplitudeVector::basis(4, 0);
  const AmplitudeVector bad{x, -x, 0, 0};
  const std::vector<LabeledSample> mixed{{e0, e0, 0}, {bad, e0, 0}};
  const LossEvaluation eval = accumulated_mse(id, mixed);
  EXPECT_EQ(eval.collapsed, 1u);
  EXPECT_EQ(eval.evaluated, 1u);
  EXPECT_EQ(eval.acc_mse, 0.0);

  const std::vector<LabeledSample> all_bad{{bad, e0, 0}};
  try {
    accumulated_mse(id, all_bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AllSamplesCollapsed);
  }
  try {
    accumulated_mse(id, std::vector<LabeledSample>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyDataset);
  }
}

TEST(AccumulatedMse, ShotModeIsDeterministicAndClose) {
  const auto data = iris::split(iris::load_iris(testing::iris_path()), 3);
  const NetworkConfig config = NetworkConfig::random(4, 2, 4);
  const MeasurementMode mode = ShotPlan{200000, 200000, 11};
  const LossEvaluation a = accumulated_mse(config, data.train, mode);
  const LossEvaluation b = accumulated_mse(config, data.train, mode);
  EXPECT_EQ(a.acc_mse, b.acc_mse);
  EXPECT_NEAR(a.acc_mse, accumulated_mse(config, data.train).acc_mse, 0.02);
}

}  // namespace
}  // namespace qdl
