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

#include "mlp_kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fslsim::detail {

MatrixD mlp_forward(const Architecture& arch, std::span<const Matrix> weights,
                    const Matrix& inputs, Trace* trace) {
  if (arch.empty() || inputs.cols() != arch.front().fan_in) {
    throw std::invalid_argument("forward: input width does not match the first layer");
  }
  const std::size_t batch = inputs.rows();
  MatrixD z(batch, inputs.cols());
  for (std::size_t i = 0; i < inputs.size(); ++i) z[i] = inputs[i];
  if (trace) {
    trace->inputs.clear();
    trace->preacts.clear();
  }
  for (std::size_t l = 0; l < arch.size(); ++l) {
    const LayerSpec& spec = arch[l];
    const Matrix& w = weights[l];
    MatrixD pre(batch, spec.fan_out);
    for (std::size_t b = 0; b < batch; ++b) {
      auto zrow = z.row(b);
      for (std::size_t o = 0; o < spec.fan_out; ++o) {
        auto wrow = w.row(o);
        double acc = 0.0;
        for (std::size_t i = 0; i < spec.fan_in; ++i) acc += static_cast<double>(wrow[i]) * zrow[i];
        pre(b, o) = acc;
      }
    }
    MatrixD out = pre;
    if (spec.activation == Activation::kReLU) {
      for (double& v : out.flat()) v = v > 0.0 ? v : 0.0;
    }
    if (trace) {
      trace->inputs.push_back(std::move(z));
      trace->preacts.push_back(std::move(pre));
    }
    z = std::move(out);
  }
  return z;
}

std::vector<MatrixD> mlp_backward(const Architecture& arch, std::span<const Matrix> weights,
                                  const Trace& trace, std::span<const uint32_t> labels) {
  const std::size_t layers = arch.size();
  const MatrixD& logits = trace.preacts.back();
  const std::size_t batch = logits.rows();
  const std::size_t classes = logits.cols();
  if (labels.size() != batch) throw std::invalid_argument("backward: label count mismatch");

  // dL/dI for the output layer: (softmax - onehot) / batch.
  MatrixD delta(batch, classes);
  for (std::size_t b = 0; b < batch; ++b) {
    auto row = logits.row(b);
    const double peak = *std::max_element(row.begin(), row.end());
    double denom = 0.0;
    for (std::size_t c = 0; c < classes; ++c) denom += std::exp(row[c] - peak);
    for (std::size_t c = 0; c < classes; ++c) {
      const double p = std::exp(row[c] - peak) / denom;
      delta(b, c) = (p - (labels[b] == c ? 1.0 : 0.0)) / static_cast<double>(batch);
    }
  }

  std::vector<MatrixD> grads(layers);
  for (std::size_t l = layers; l-- > 0;) {
    const LayerSpec& spec = arch[l];
    const MatrixD& z = trace.inputs[l];
    MatrixD g(spec.fan_out, spec.fan_in);
    for (std::size_t b = 0; b < batch; ++b) {
      auto zrow = z.row(b);
      for (std::size_t o = 0; o < spec.fan_out; ++o) {
        const double d = delta(b, o);
        if (d == 0.0) continue;
        auto grow = g.row(o);
        for (std::size_t i = 0; i < spec.fan_in; ++i) grow[i] += d * zrow[i];
      }
    }
    grads[l] = std::move(g);
    if (l == 0) break;

    const Matrix& w = weights[l];
    const MatrixD& prev_pre = trace.preacts[l - 1];
    const bool relu = arch[l - 1].activation == Activation::kReLU;
    MatrixD upstream(batch, spec.fan_in);
    for (std::size_t b = 0; b < batch; ++b) {
      auto urow = upstream.row(b);
      for (std::size_t o = 0; o < spec.fan_out; ++o) {
        const double d = delta(b, o);
        if (d == 0.0) continue;
        auto wrow = w.row(o);
        for (std::size_t i = 0; i < spec.fan_in; ++i) urow[i] += d * static_cast<double>(wrow[i]);
      }
      if (relu) {
        for (std::size_t i = 0; i < spec.fan_in; ++i) {
          if (!(prev_pre(b, i) > 0.0)) urow[i] = 0.0;
        }
      }
    }
    delta = std::move(upstream);
  }
  return grads;
}

std::vector<uint32_t> argmax_rows(const MatrixD& logits) {
  std::vector<uint32_t> out(logits.rows(), 0);
  for (std::size_t b = 0; b < logits.rows(); ++b) {
    auto row = logits.row(b);
    double best = -std::numeric_limits<double>::infinity();
    uint32_t arg = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] > best) {
        best = row[c];
        arg = static_cast<uint32_t>(c);
      }
    }
    out[b] = arg;
  }
  return out;
}

}  // namespace fslsim::detail
