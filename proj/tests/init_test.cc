/*
 * Copyright 2026 The fslsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fslsim/init.h"

#include <cmath>

#include "fslsim/supermask.h"
#include "gtest/gtest.h"

namespace fslsim {
namespace {

struct Moments {
  double mean;
  double stddev;
};

Moments moments(const Matrix& m) {
  double sum = 0, sq = 0;
  for (float v : m.values()) {
    sum += v;
    sq += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(m.size());
  const double mean = sum / n;
  return {mean, std::sqrt(sq / n - mean * mean)};
}

TEST(InitWeightsTest, SignedKaimingConstantUsesTwoValues) {
  RngStream rng(1);
  const Matrix w = init_weights({16, 8}, InitKind::kSignedKaimingConstant, rng);
  int positive = 0;
  for (float v : w.values()) {
    ASSERT_TRUE(v == 0.5f || v == -0.5f) << v;
    positive += v > 0;
  }
  EXPECT_GT(positive, 0);
  EXPECT_LT(positive, 128);
}

TEST(InitWeightsTest, KaimingNormalStdForFanInTwo) {
  RngStream rng(2);
  const Matrix w = init_weights({50000, 2}, InitKind::kKaimingNormal, rng);
  const Moments m = moments(w);
  EXPECT_NEAR(m.stddev, 1.0, 0.02);
}

TEST(InitWeightsTest, DistributionsMatchTargets) {
  constexpr std::size_t kFanOut = 1000;
  constexpr std::size_t kFanIn = 100;
  const double n = kFanOut * kFanIn;
  struct Case {
    InitKind kind;
    double stddev;
  };
  const double b = std::sqrt(6.0 / kFanIn);
  for (const Case& c : {Case{InitKind::kGlorotNormal, std::sqrt(2.0 / (kFanIn + kFanOut))},
                        Case{InitKind::kKaimingNormal, std::sqrt(2.0 / kFanIn)},
                        Case{InitKind::kSignedKaimingConstant, std::sqrt(2.0 / kFanIn)},
                        Case{InitKind::kKaimingUniform, b / std::sqrt(3.0)}}) {
    RngStream rng(3);
    const Moments m = moments(init_weights({kFanOut, kFanIn}, c.kind, rng));
    EXPECT_NEAR(m.mean, 0.0, 3 * c.stddev / std::sqrt(n)) << to_string(c.kind);
    // Loose bound on the sample std: 3 standard errors of a normal-ish variance.
    EXPECT_NEAR(m.stddev, c.stddev, 3 * c.stddev * std::sqrt(2.0 / n) + 1e-12) << to_string(c.kind);
  }
}

TEST(InitWeightsTest, RejectsZeroFan) {
  RngStream rng(1);
  EXPECT_THROW(init_weights({0, 4}, InitKind::kKaimingNormal, rng), std::invalid_argument);
  EXPECT_THROW(init_weights({4, 0}, InitKind::kKaimingNormal, rng), std::invalid_argument);
  EXPECT_THROW(init_scores({4, 0}, rng), std::invalid_argument);
}

TEST(InitWeightsTest, SameSeedSameMatrix) {
  for (InitKind kind : {InitKind::kGlorotNormal, InitKind::kKaimingNormal, InitKind::kSignedKaimingConstant,
                        InitKind::kKaimingUniform}) {
    RngStream a(9), b(9);
    EXPECT_EQ(init_weights({7, 5}, kind, a), init_weights({7, 5}, kind, b));
  }
}

TEST(InitScoresTest, StaysInsideKaimingUniformBound) {
  RngStream rng(4);
  const Matrix s = init_scores({200, 6}, rng);
  for (float v : s.values()) {
    EXPECT_GT(v, -1.0f);
    EXPECT_LT(v, 1.0f);
  }
}

TEST(InitScoresTest, SameSeedSameScores) {
  RngStream a(5), b(5);
  EXPECT_EQ(init_scores({3, 4}, a), init_scores({3, 4}, b));
}

TEST(InitScoresTest, DifferFromWeightsOfSameSeed) {
  const Architecture arch{{6, 4, Activation::kIdentity}};
  const Supernetwork net = Supernetwork::from_seed(12, arch, InitKind::kKaimingUniform);
  EXPECT_NE(net.weights(0), net.scores(0));
  RngStream w = derive(12, {kWeightStreamTag});
  RngStream s = derive(12, {kScoreStreamTag});
  EXPECT_EQ(net.weights(0), init_weights({4, 6}, InitKind::kKaimingUniform, w));
  EXPECT_EQ(net.scores(0), init_scores({4, 6}, s));
}

TEST(InitKindTest, NamesRoundTrip) {
  for (InitKind kind : {InitKind::kGlorotNormal, InitKind::kKaimingNormal, InitKind::kSignedKaimingConstant,
                        InitKind::kKaimingUniform}) {
    EXPECT_EQ(parse_init_kind(to_string(kind)), kind);
  }
  EXPECT_FALSE(parse_init_kind("xavier").has_value());
}

}  // namespace
}  // namespace fslsim
