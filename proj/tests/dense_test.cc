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

#include "fslsim/dense.h"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "test_util.h"

namespace fslsim {
namespace {

const Architecture kArch{{3, 5, Activation::kReLU}, {5, 4, Activation::kIdentity}};

double loss(const DenseNetwork& net, const Minibatch& batch) {
  const MatrixD logits = net.forward(batch.inputs);
  double total = 0;
  for (std::size_t b = 0; b < logits.rows(); ++b) {
    double peak = -INFINITY;
    for (std::size_t c = 0; c < logits.cols(); ++c) peak = std::max(peak, logits(b, c));
    double z = 0;
    for (std::size_t c = 0; c < logits.cols(); ++c) z += std::exp(logits(b, c) - peak);
    total += std::log(z) + peak - logits(b, batch.labels[b]);
  }
  return total / static_cast<double>(logits.rows());
}

TEST(DenseNetworkTest, FlattenAssignRoundTrip) {
  DenseNetwork net = DenseNetwork::from_seed(1, kArch, InitKind::kKaimingNormal);
  EXPECT_EQ(net.parameter_count(), 35u);
  std::vector<float> flat = net.flatten();
  ASSERT_EQ(flat.size(), 35u);
  for (float& v : flat) v += 1.0f;
  net.assign(flat);
  EXPECT_EQ(net.flatten(), flat);
  EXPECT_THROW(net.assign(std::vector<float>(3)), std::invalid_argument);
}

TEST(DenseNetworkTest, SeedMatchesSupernetworkWeights) {
  const DenseNetwork dense = DenseNetwork::from_seed(9, kArch, InitKind::kSignedKaimingConstant);
  const Supernetwork super = Supernetwork::from_seed(9, kArch, InitKind::kSignedKaimingConstant);
  for (std::size_t l = 0; l < kArch.size(); ++l) EXPECT_EQ(dense.weights()[l], super.weights(l));
}

TEST(DenseNetworkTest, GradientsMatchFiniteDifferences) {
  RngStream rng(2);
  DenseNetwork net = DenseNetwork::from_seed(3, kArch, InitKind::kKaimingNormal);
  const Minibatch batch = testing::random_batch(rng, 6, 3, 4);
  const std::vector<MatrixD> grads = net.gradients(batch);
  const std::vector<float> base = net.flatten();
  std::size_t offset = 0;
  for (std::size_t l = 0; l < kArch.size(); ++l) {
    for (std::size_t i = 0; i < grads[l].size(); ++i) {
      constexpr float kH = 1e-2f;
      std::vector<float> plus = base, minus = base;
      plus[offset + i] += kH;
      minus[offset + i] -= kH;
      DenseNetwork a = net, b = net;
      a.assign(plus);
      b.assign(minus);
      const double numeric = (loss(a, batch) - loss(b, batch)) / (2.0 * kH);
      EXPECT_NEAR(grads[l][i], numeric, 2e-3) << "layer " << l << " entry " << i;
    }
    offset += grads[l].size();
  }
}

TEST(DenseNetworkTest, TrainingFitsBlobs) {
  const Dataset data = testing::small_blobs(4, 2, 3, 100);
  DenseNetwork net = DenseNetwork::from_seed(5, {{3, 8, Activation::kReLU}, {8, 2, Activation::kIdentity}},
                                             InitKind::kKaimingNormal);
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  RngStream rng(1);
  net.train(data, idx, 5, SgdConfig{0.05, 0.9, 1e-4, 8}, rng);
  EXPECT_GT(net.evaluate(data, idx), 0.95);
}

}  // namespace
}  // namespace fslsim
