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

#include "fslsim/supermask.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fslsim/fraction.h"
#include "mlp_kernels.h"

namespace fslsim {
namespace {

std::vector<Matrix> masked_weights(const Supernetwork& net, std::span<const Matrix> masks) {
  std::vector<Matrix> out;
  out.reserve(net.num_layers());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    Matrix w = net.weights(l);
    const Matrix& m = masks[l];
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= m[i];
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Matrix> score_masks(const Supernetwork& net, double k) {
  std::vector<Matrix> masks;
  masks.reserve(net.num_layers());
  for (std::size_t l = 0; l < net.num_layers(); ++l) masks.push_back(mask_layer(net.scores(l), k));
  return masks;
}

void check_k(double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("subnetwork fraction k must lie in [0, 1]");
}

}  // namespace

std::string_view to_string(Activation a) {
  return a == Activation::kReLU ? "relu" : "identity";
}

std::optional<Activation> parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kReLU;
  if (name == "identity") return Activation::kIdentity;
  return std::nullopt;
}

void validate_architecture(const Architecture& arch) {
  if (arch.empty()) throw std::invalid_argument("architecture has no layers");
  for (std::size_t l = 0; l < arch.size(); ++l) {
    if (arch[l].fan_in == 0 || arch[l].fan_out == 0) {
      throw std::invalid_argument("layer " + std::to_string(l) + " has a zero fan");
    }
    if (l > 0 && arch[l - 1].fan_out != arch[l].fan_in) {
      throw std::invalid_argument("layer " + std::to_string(l) +
                                  " fan_in does not match the previous fan_out");
    }
  }
}

Minibatch make_batch(const Dataset& ds, std::span<const std::size_t> indices) {
  Minibatch batch{Matrix(indices.size(), ds.dims()), {}};
  batch.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    auto src = ds.features.row(indices[r]);
    std::copy(src.begin(), src.end(), batch.inputs.row(r).begin());
    batch.labels.push_back(ds.labels[indices[r]]);
  }
  return batch;
}

void SgdConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must lie in [0, 1)");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight_decay must be non-negative");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
}

Supernetwork Supernetwork::from_seed(uint64_t seed, const Architecture& arch, InitKind weight_init) {
  validate_architecture(arch);
  Supernetwork net;
  net.arch_ = arch;
  net.seed_ = seed;
  RngStream weight_rng = derive(seed, {kWeightStreamTag});
  RngStream score_rng = derive(seed, {kScoreStreamTag});
  auto weights = std::make_shared<std::vector<Matrix>>();
  for (const LayerSpec& spec : arch) {
    weights->push_back(init_weights(spec.shape(), weight_init, weight_rng));
    net.scores_.push_back(init_scores(spec.shape(), score_rng));
  }
  net.weights_ = std::move(weights);
  return net;
}

Supernetwork Supernetwork::from_parts(const Architecture& arch, std::vector<Matrix> weights,
                                      std::vector<Matrix> scores) {
  validate_architecture(arch);
  if (weights.size() != arch.size() || scores.size() != arch.size()) {
    throw std::invalid_argument("from_parts: layer count mismatch");
  }
  for (std::size_t l = 0; l < arch.size(); ++l) {
    const bool ok = weights[l].rows() == arch[l].fan_out && weights[l].cols() == arch[l].fan_in &&
                    scores[l].rows() == arch[l].fan_out && scores[l].cols() == arch[l].fan_in;
    if (!ok) throw std::invalid_argument("from_parts: shape mismatch in layer " + std::to_string(l));
  }
  Supernetwork net;
  net.arch_ = arch;
  net.weights_ = std::make_shared<const std::vector<Matrix>>(std::move(weights));
  net.scores_ = std::move(scores);
  return net;
}

Matrix& Supernetwork::mutable_scores(std::size_t layer) {
  ++score_version_;
  return scores_[layer];
}

void Supernetwork::set_scores(std::vector<Matrix> scores) {
  if (scores.size() != scores_.size()) throw std::invalid_argument("set_scores: layer count mismatch");
  for (std::size_t l = 0; l < scores.size(); ++l) {
    if (scores[l].rows() != scores_[l].rows() || scores[l].cols() != scores_[l].cols()) {
      throw std::invalid_argument("set_scores: shape mismatch in layer " + std::to_string(l));
    }
  }
  scores_ = std::move(scores);
  ++score_version_;
}

Matrix mask_layer(const Matrix& scores, double k) {
  check_k(k);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  Matrix mask(scores.rows(), scores.cols(), 0.0f);
  for (std::size_t j = dropped_count(n, k); j < n; ++j) mask[order[j]] = 1.0f;
  return mask;
}

MatrixD ep_forward(const Supernetwork& net, double k, const Minibatch& batch, ForwardCache* cache) {
  if (batch.inputs.cols() != net.architecture().front().fan_in) {
    throw std::invalid_argument("ep_forward: input width " + std::to_string(batch.inputs.cols()) +
                                " does not match fan_in " +
                                std::to_string(net.architecture().front().fan_in));
  }
  std::vector<Matrix> masks = score_masks(net, k);
  std::vector<Matrix> weights = masked_weights(net, masks);
  detail::Trace trace;
  MatrixD logits = detail::mlp_forward(net.architecture(), weights, batch.inputs, cache ? &trace : nullptr);
  if (cache) {
    cache->inputs = std::move(trace.inputs);
    cache->preacts = std::move(trace.preacts);
    cache->masks = std::move(masks);
    cache->score_version = net.score_version();
    cache->batch_rows = batch.inputs.rows();
  }
  return logits;
}

MatrixD score_gradient(const MatrixD& upstream, const MatrixD& inputs, const Matrix& weights) {
  if (upstream.rows() != inputs.rows() || upstream.cols() != weights.rows() ||
      inputs.cols() != weights.cols()) {
    throw std::invalid_argument("score_gradient: shape mismatch");
  }
  MatrixD g(weights.rows(), weights.cols());
  for (std::size_t b = 0; b < inputs.rows(); ++b) {
    for (std::size_t v = 0; v < weights.rows(); ++v) {
      const double d = upstream(b, v);
      if (d == 0.0) continue;
      for (std::size_t u = 0; u < weights.cols(); ++u) g(v, u) += d * inputs(b, u);
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= static_cast<double>(weights[i]);
  return g;
}

std::vector<MatrixD> ep_backward(const Supernetwork& net, const Minibatch& batch,
                                 const ForwardCache& cache) {
  if (cache.score_version != net.score_version() || cache.batch_rows != batch.inputs.rows() ||
      cache.masks.size() != net.num_layers()) {
    throw std::logic_error("ep_backward: stale forward cache");
  }
  std::vector<Matrix> weights = masked_weights(net, cache.masks);
  detail::Trace trace{cache.inputs, cache.preacts};
  std::vector<MatrixD> grads = detail::mlp_backward(net.architecture(), weights, trace, batch.labels);
  // Straight-through: h() is the identity backwards, so every edge gets
  // dL/dI_v * Z_u * W_uv with the unmasked weight.
  for (std::size_t l = 0; l < grads.size(); ++l) {
    const Matrix& w = net.weights(l);
    for (std::size_t i = 0; i < w.size(); ++i) grads[l][i] *= static_cast<double>(w[i]);
  }
  return grads;
}

const std::vector<Matrix>& edge_popup_train(Supernetwork& net, const Dataset& data,
                                            std::span<const std::size_t> indices,
                                            std::size_t epochs, double k, const SgdConfig& sgd,
                                            RngStream& rng) {
  if (epochs == 0) throw std::invalid_argument("edge_popup_train: epochs must be at least 1");
  if (indices.empty()) throw std::invalid_argument("edge_popup_train: empty dataset");
  check_k(k);
  sgd.validate();

  std::vector<MatrixD> velocity;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    velocity.emplace_back(net.scores(l).rows(), net.scores(l).cols());
  }
  std::vector<std::size_t> order(indices.begin(), indices.end());
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += sgd.batch_size) {
      const std::size_t stop = std::min(order.size(), start + sgd.batch_size);
      Minibatch batch = make_batch(data, std::span(order).subspan(start, stop - start));
      ForwardCache cache;
      ep_forward(net, k, batch, &cache);
      std::vector<MatrixD> grads = ep_backward(net, batch, cache);
      for (std::size_t l = 0; l < net.num_layers(); ++l) {
        Matrix& scores = net.mutable_scores(l);
        MatrixD& v = velocity[l];
        const MatrixD& g = grads[l];
        for (std::size_t i = 0; i < scores.size(); ++i) {
          const double s = scores[i];
          const double step = g[i] + sgd.weight_decay * s;
          v[i] = sgd.momentum * v[i] + step;
          scores[i] = static_cast<float>(s - sgd.learning_rate * v[i]);
        }
      }
    }
  }
  return net.all_scores();
}

const std::vector<Matrix>& edge_popup_train(Supernetwork& net, const Dataset& data,
                                            std::size_t epochs, double k, const SgdConfig& sgd,
                                            RngStream& rng) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return edge_popup_train(net, data, all, epochs, k, sgd, rng);
}

double evaluate_masked(const Supernetwork& net, std::span<const Matrix> masks, const Dataset& data,
                       std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("evaluate: empty dataset");
  std::vector<Matrix> weights = masked_weights(net, masks);
  constexpr std::size_t kChunk = 256;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < indices.size(); start += kChunk) {
    const std::size_t stop = std::min(indices.size(), start + kChunk);
    Minibatch batch = make_batch(data, indices.subspan(start, stop - start));
    MatrixD logits = detail::mlp_forward(net.architecture(), weights, batch.inputs, nullptr);
    std::vector<uint32_t> pred = detail::argmax_rows(logits);
    for (std::size_t b = 0; b < pred.size(); ++b) correct += pred[b] == batch.labels[b];
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

double evaluate(const Supernetwork& net, double k, const Dataset& data,
                std::span<const std::size_t> indices) {
  check_k(k);
  std::vector<Matrix> masks = score_masks(net, k);
  return evaluate_masked(net, masks, data, indices);
}

double evaluate(const Supernetwork& net, double k, const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return evaluate(net, k, data, all);
}

}  // namespace fslsim
