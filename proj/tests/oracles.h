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

#ifndef FSLSIM_TESTS_ORACLES_H_
#define FSLSIM_TESTS_ORACLES_H_

// Slow, loop-by-loop reference implementations used to cross-check the
// library. They share no code with src/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "fslsim/supermask.h"

namespace fslsim::oracle {

// Top-k mask by explicit (score, index) pair sorting.
inline std::vector<double> mask(const Matrix& scores, double k) {
  const std::size_t n = scores.size();
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < n; ++i) keyed.emplace_back(scores[i], i);
  std::sort(keyed.begin(), keyed.end());
  const auto t = static_cast<std::size_t>((1.0 - k) * static_cast<double>(n));
  std::vector<double> m(n, 0.0);
  for (std::size_t j = t; j < n; ++j) m[keyed[j].second] = 1.0;
  return m;
}

struct Pass {
  std::vector<std::vector<double>> z;  // layer inputs, z[L] = logits
  std::vector<std::vector<double>> pre;
};

inline Pass forward_one(const Supernetwork& net, const std::vector<std::vector<double>>& masks,
                        std::span<const float> x) {
  Pass p;
  p.z.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const LayerSpec& spec = net.architecture()[l];
    std::vector<double> pre(spec.fan_out, 0.0);
    for (std::size_t v = 0; v < spec.fan_out; ++v) {
      for (std::size_t u = 0; u < spec.fan_in; ++u) {
        const std::size_t e = v * spec.fan_in + u;
        pre[v] += static_cast<double>(net.weights(l)[e]) * masks[l][e] * p.z[l][u];
      }
    }
    std::vector<double> out = pre;
    if (spec.activation == Activation::kReLU) {
      for (double& o : out) o = o > 0 ? o : 0;
    }
    p.pre.push_back(std::move(pre));
    p.z.push_back(std::move(out));
  }
  return p;
}

inline std::vector<std::vector<double>> all_masks(const Supernetwork& net, double k) {
  std::vector<std::vector<double>> masks;
  for (std::size_t l = 0; l < net.num_layers(); ++l) masks.push_back(mask(net.scores(l), k));
  return masks;
}

inline std::vector<std::vector<double>> logits(const Supernetwork& net, double k, const Minibatch& batch) {
  const auto masks = all_masks(net, k);
  std::vector<std::vector<double>> out;
  for (std::size_t b = 0; b < batch.inputs.rows(); ++b) {
    out.push_back(forward_one(net, masks, batch.inputs.row(b)).z.back());
  }
  return out;
}

// dL/ds_uv = dL/dI_v * Z_u * W_uv for the batch-mean softmax cross-entropy,
// with dL/dI propagated one sample and one edge at a time.
inline std::vector<std::vector<double>> score_grads(const Supernetwork& net, double k, const Minibatch& batch) {
  const auto masks = all_masks(net, k);
  const std::size_t layers = net.num_layers();
  std::vector<std::vector<double>> grads(layers);
  for (std::size_t l = 0; l < layers; ++l) grads[l].assign(net.weights(l).size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(batch.inputs.rows());
  for (std::size_t b = 0; b < batch.inputs.rows(); ++b) {
    const Pass p = forward_one(net, masks, batch.inputs.row(b));
    const std::vector<double>& out = p.pre.back();
    const double peak = *std::max_element(out.begin(), out.end());
    double denom = 0;
    for (double o : out) denom += std::exp(o - peak);
    std::vector<double> delta(out.size());
    for (std::size_t c = 0; c < out.size(); ++c) {
      delta[c] = (std::exp(out[c] - peak) / denom - (c == batch.labels[b] ? 1.0 : 0.0)) * inv_b;
    }
    for (std::size_t l = layers; l-- > 0;) {
      const LayerSpec& spec = net.architecture()[l];
      for (std::size_t v = 0; v < spec.fan_out; ++v) {
        for (std::size_t u = 0; u < spec.fan_in; ++u) {
          const std::size_t e = v * spec.fan_in + u;
          grads[l][e] += delta[v] * p.z[l][u] * static_cast<double>(net.weights(l)[e]);
        }
      }
      if (l == 0) break;
      std::vector<double> below(spec.fan_in, 0.0);
      for (std::size_t u = 0; u < spec.fan_in; ++u) {
        for (std::size_t v = 0; v < spec.fan_out; ++v) {
          const std::size_t e = v * spec.fan_in + u;
          below[u] += delta[v] * static_cast<double>(net.weights(l)[e]) * masks[l][e];
        }
        const bool relu = net.architecture()[l - 1].activation == Activation::kReLU;
        if (relu && !(p.pre[l - 1][u] > 0)) below[u] = 0;
      }
      delta = std::move(below);
    }
  }
  return grads;
}

}  // namespace fslsim::oracle

#endif  // FSLSIM_TESTS_ORACLES_H_
