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

#ifndef FSLSIM_SUPERMASK_H_
#define FSLSIM_SUPERMASK_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fslsim/data.h"
#include "fslsim/init.h"
#include "fslsim/matrix.h"
#include "fslsim/rng.h"

namespace fslsim {

enum class Activation { kReLU, kIdentity };

std::string_view to_string(Activation a);
std::optional<Activation> parse_activation(std::string_view name);

// One bias-free fully connected layer.
struct LayerSpec {
  std::size_t fan_in = 0;
  std::size_t fan_out = 0;
  Activation activation = Activation::kReLU;

  std::size_t edges() const { return fan_in * fan_out; }
  LayerShape shape() const { return {fan_out, fan_in}; }
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

using Architecture = std::vector<LayerSpec>;

// Throws std::invalid_argument unless the architecture is non-empty, every
// fan is positive and consecutive layers chain (fan_out == next fan_in).
void validate_architecture(const Architecture& arch);

struct Minibatch {
  Matrix inputs;  // batch x fan_in of the first layer
  std::vector<uint32_t> labels;
};

Minibatch make_batch(const Dataset& ds, std::span<const std::size_t> indices);

struct SgdConfig {
  double learning_rate = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  std::size_t batch_size = 8;

  void validate() const;
};

// The fixed random network plus its trainable scores.
//
// Weights are shared read-only between copies of a Supernetwork; scores are
// per-instance state. Copying a Supernetwork is the way to hand a private
// score copy to a client.
class Supernetwork {
 public:
  // Weights come from derive(seed, {kWeightStreamTag}) and scores from
  // derive(seed, {kScoreStreamTag}), layer by layer in order.
  static Supernetwork from_seed(uint64_t seed, const Architecture& arch, InitKind weight_init);
  // Explicit weights and scores, shaped fan_out x fan_in per layer. seed() is 0.
  static Supernetwork from_parts(const Architecture& arch, std::vector<Matrix> weights,
                                 std::vector<Matrix> scores);

  const Architecture& architecture() const { return arch_; }
  std::size_t num_layers() const { return arch_.size(); }
  uint64_t seed() const { return seed_; }

  const Matrix& weights(std::size_t layer) const { return (*weights_)[layer]; }
  const Matrix& scores(std::size_t layer) const { return scores_[layer]; }
  const std::vector<Matrix>& all_scores() const { return scores_; }

  // Every mutation bumps the score version, which invalidates forward caches.
  Matrix& mutable_scores(std::size_t layer);
  void set_scores(std::vector<Matrix> scores);
  uint64_t score_version() const { return score_version_; }

 private:
  Supernetwork() = default;

  Architecture arch_;
  uint64_t seed_ = 0;
  std::shared_ptr<const std::vector<Matrix>> weights_;
  std::vector<Matrix> scores_;
  uint64_t score_version_ = 0;
};

// Keeps the n - floor((1 - k) n) highest scores. Ties: stable ascending sort
// by (score, flat index), so among equal scores the higher index survives.
Matrix mask_layer(const Matrix& scores, double k);

// Per-layer values saved by the forward pass.
struct ForwardCache {
  std::vector<MatrixD> inputs;   // Z: input of each layer
  std::vector<MatrixD> preacts;  // I: pre-activation of each layer
  std::vector<Matrix> masks;
  uint64_t score_version = 0;
  std::size_t batch_rows = 0;
};

// Logits of the masked network, batch x classes. Throws std::invalid_argument
// on an input width mismatch.
MatrixD ep_forward(const Supernetwork& net, double k, const Minibatch& batch,
                   ForwardCache* cache = nullptr);

// One layer's straight-through score gradient from the upstream gradient
// dL/dI (batch x fan_out) and the layer input Z (batch x fan_in):
// G[v][u] = sum_b dL/dI[b][v] * Z[b][u] * W[v][u].
MatrixD score_gradient(const MatrixD& upstream, const MatrixD& inputs, const Matrix& weights);

// Straight-through score gradients of the batch-mean softmax cross-entropy:
// dL/ds_uv = dL/dI_v * Z_u * W_uv for every edge, masked or not. Throws
// std::logic_error when `cache` was not produced from the current scores and
// this batch.
std::vector<MatrixD> ep_backward(const Supernetwork& net, const Minibatch& batch,
                                 const ForwardCache& cache);

// Runs `epochs` passes of minibatch SGD over the score tensors only.
// The sample order is reshuffled from `rng` every epoch; the mask is
// recomputed from the current scores before every batch.
const std::vector<Matrix>& edge_popup_train(Supernetwork& net, const Dataset& data,
                                            std::span<const std::size_t> indices,
                                            std::size_t epochs, double k, const SgdConfig& sgd,
                                            RngStream& rng);
const std::vector<Matrix>& edge_popup_train(Supernetwork& net, const Dataset& data,
                                            std::size_t epochs, double k, const SgdConfig& sgd,
                                            RngStream& rng);

// Fraction of argmax-correct predictions under the score mask at k.
double evaluate(const Supernetwork& net, double k, const Dataset& data,
                std::span<const std::size_t> indices);
double evaluate(const Supernetwork& net, double k, const Dataset& data);

// Same, under an explicit per-layer mask set.
double evaluate_masked(const Supernetwork& net, std::span<const Matrix> masks,
                       const Dataset& data, std::span<const std::size_t> indices);

}  // namespace fslsim

#endif  // FSLSIM_SUPERMASK_H_
