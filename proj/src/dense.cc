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

#include <algorithm>
#include <stdexcept>

#include "mlp_kernels.h"

namespace fslsim {

DenseNetwork::DenseNetwork(Architecture arch, std::vector<Matrix> weights)
    : arch_(std::move(arch)), weights_(std::move(weights)) {
  validate_architecture(arch_);
  if (weights_.size() != arch_.size()) throw std::invalid_argument("DenseNetwork: layer count mismatch");
  for (std::size_t l = 0; l < arch_.size(); ++l) {
    if (weights_[l].rows() != arch_[l].fan_out || weights_[l].cols() != arch_[l].fan_in) {
      throw std::invalid_argument("DenseNetwork: weight shape mismatch");
    }
  }
}

DenseNetwork DenseNetwork::from_seed(uint64_t seed, const Architecture& arch, InitKind init) {
  validate_architecture(arch);
  RngStream rng = derive(seed, {kWeightStreamTag});
  std::vector<Matrix> weights;
  for (const LayerSpec& spec : arch) weights.push_back(init_weights(spec.shape(), init, rng));
  return DenseNetwork(arch, std::move(weights));
}

std::size_t DenseNetwork::parameter_count() const {
  std::size_t total = 0;
  for (const LayerSpec& spec : arch_) total += spec.edges();
  return total;
}

std::vector<float> DenseNetwork::flatten() const {
  std::vector<float> flat;
  flat.reserve(parameter_count());
  for (const Matrix& w : weights_) flat.insert(flat.end(), w.values().begin(), w.values().end());
  return flat;
}

void DenseNetwork::assign(std::span<const float> flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("assign: parameter count mismatch");
  std::size_t offset = 0;
  for (Matrix& w : weights_) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), w.size(), w.flat().begin());
    offset += w.size();
  }
}

MatrixD DenseNetwork::forward(const Matrix& inputs) const {
  return detail::mlp_forward(arch_, weights_, inputs, nullptr);
}

std::vector<MatrixD> DenseNetwork::gradients(const Minibatch& batch) const {
  detail::Trace trace;
  detail::mlp_forward(arch_, weights_, batch.inputs, &trace);
  return detail::mlp_backward(arch_, weights_, trace, batch.labels);
}

void DenseNetwork::train(const Dataset& data, std::span<const std::size_t> indices,
                         std::size_t epochs, const SgdConfig& sgd, RngStream& rng) {
  if (indices.empty()) throw std::invalid_argument("DenseNetwork::train: empty dataset");
  sgd.validate();
  std::vector<MatrixD> velocity;
  for (const Matrix& w : weights_) velocity.emplace_back(w.rows(), w.cols());
  std::vector<std::size_t> order(indices.begin(), indices.end());
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += sgd.batch_size) {
      const std::size_t stop = std::min(order.size(), start + sgd.batch_size);
      Minibatch batch = make_batch(data, std::span(order).subspan(start, stop - start));
      std::vector<MatrixD> grads = gradients(batch);
      for (std::size_t l = 0; l < weights_.size(); ++l) {
        Matrix& w = weights_[l];
        for (std::size_t i = 0; i < w.size(); ++i) {
          const double value = w[i];
          velocity[l][i] = sgd.momentum * velocity[l][i] + grads[l][i] + sgd.weight_decay * value;
          w[i] = static_cast<float>(value - sgd.learning_rate * velocity[l][i]);
        }
      }
    }
  }
}

double DenseNetwork::evaluate(const Dataset& data, std::span<const std::size_t> indices) const {
  if (indices.empty()) throw std::invalid_argument("evaluate: empty dataset");
  constexpr std::size_t kChunk = 256;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < indices.size(); start += kChunk) {
    const std::size_t stop = std::min(indices.size(), start + kChunk);
    Minibatch batch = make_batch(data, indices.subspan(start, stop - start));
    std::vector<uint32_t> pred = detail::argmax_rows(forward(batch.inputs));
    for (std::size_t b = 0; b < pred.size(); ++b) correct += pred[b] == batch.labels[b];
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

}  // namespace fslsim
