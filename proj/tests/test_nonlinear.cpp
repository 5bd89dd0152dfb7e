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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qdl/nonlinear.hpp"
#include "support/oracles.hpp"

namespace qdl {
namespace {

TEST(NonlinearMap, BasisVectors) {
  const NonlinearResult r0 = nonlinear_map(AmplitudeVector{1, 0, 0, 0});
  EXPECT_EQ(r0.beta, Eigen::Vector4d(1, 0, 0, 0));
  EXPECT_EQ(r0.a, 1.0);

  // The last component is scaled by S - 2 alpha_3 = 1 - 2.
  const NonlinearResult r3 = nonlinear_map(AmplitudeVector{0, 0, 0, 1});
  EXPECT_EQ(r3.beta, Eigen::Vector4d(0, 0, 0, -1));
  EXPECT_EQ(r3.a, 1.0);
}

TEST(NonlinearMap, UniformSuperposition) {
  // S = 2: beta = (0.5*2, 0.5*2, 0.5*2, 0.5*(2-1)); a = 3 + 0.25.
  const NonlinearResult r = nonlinear_map(AmplitudeVector{0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(r.beta, Eigen::Vector4d(1, 1, 1, 0.5));
  EXPECT_DOUBLE_EQ(r.a, 3.25);
}

TEST(NonlinearMap, SquaredNormIsA) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const NonlinearResult r = nonlinear_map(testing::random_unit(std::size_t{2} << (trial % 4), rng));
    EXPECT_NEAR(r.a, r.beta.squaredNorm(), 1e-12);
  }
}

TEST(NonlinearMap, DegreeTwoHomogeneous) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::VectorXd alpha = testing::random_unit(std::size_t{2} << (trial % 4), rng).values();
    const double c = scale(rng);
    const NonlinearResult base = nonlinear_map(alpha);
    const NonlinearResult scaled = nonlinear_map(Eigen::VectorXd(c * alpha));
    EXPECT_LT((scaled.beta - c * c * base.beta).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ApplyNonlinear, FreshStateKeepsEqualWeights) {
  const BranchState s = apply_nonlinear(ghz_init(2));
  EXPECT_DOUBLE_EQ(s.gamma, 1.0 / std::sqrt(2.0));
  EXPECT_EQ(s.out_vec, (AmplitudeVector{1, 0, 0, 0}));
}

TEST(ApplyNonlinear, SingleLayerWeights) {
  const BranchState in = set_input(ghz_init(2), AmplitudeVector{0.5, 0.5, 0.5, 0.5});
  double a = 0.0;
  const BranchState s = apply_nonlinear(in, &a);
  EXPECT_DOUBLE_EQ(a, 3.25);
  EXPECT_NEAR(s.gamma, std::sqrt(3.25) / std::sqrt(4.25), 1e-15);
  EXPECT_NEAR(s.lambda, 1.0 / std::sqrt(4.25), 1e-15);
  EXPECT_NEAR(s.out_vec[3], 0.5 / std::sqrt(3.25), 1e-15);
  EXPECT_TRUE(s.valid()) << s.violation();
  EXPECT_EQ(s.label_vec, in.label_vec);
}

TEST(ApplyNonlinear, ZeroSumCollapses) {
  const double x = 1.0 / std::sqrt(2.0);
  try {
    apply_nonlinear(set_input(ghz_init(2), AmplitudeVector{x, -x, 0, 0}));
    FAIL();
  } catch (const NonlinearCollapse& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonlinearCollapse);
    EXPECT_EQ(e.a(), 0.0);
  }
}

TEST(ApplyNonlinear, RestoresInvariants) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    const BranchState s = apply_nonlinear(set_input(ghz_init(2), testing::random_unit(4, rng)));
    EXPECT_NEAR(s.gamma * s.gamma + s.lambda * s.lambda, 1.0, 1e-12);
    EXPECT_NEAR(s.out_vec.norm_squared(), 1.0, 1e-12);
    EXPECT_TRUE(s.valid()) << s.violation();
  }
}

TEST(ApplyNonlinear, TwoLayersMultiplyFactors) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    double a1 = 0.0;
    double a2 = 0.0;
    BranchState s = apply_nonlinear(set_input(ghz_init(2), testing::random_unit(4, rng)), &a1);
    s = apply_nonlinear(s, &a2);
    EXPECT_NEAR(s.gamma * s.gamma, a1 * a2 / (a1 * a2 + 1.0), 1e-12);
  }
}

}  // namespace
}  // namespace qdl
