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

#ifndef FSLSIM_SRC_MLP_KERNELS_H_
#define FSLSIM_SRC_MLP_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fslsim/matrix.h"
#include "fslsim/supermask.h"

namespace fslsim::detail {

struct Trace {
  std::vector<MatrixD> inputs;
  std::vector<MatrixD> preacts;
};

// Bias-free MLP forward pass with the given effective weight matrices
// (fan_out x fan_in each). Returns the logits.
MatrixD mlp_forward(const Architecture& arch, std::span<const Matrix> weights,
                    const Matrix& inputs, Trace* trace);

// Per-layer dL/dI_v * Z_u summed over the batch, for the batch-mean softmax
// cross-entropy. Upstream gradients flow through `weights`.
std::vector<MatrixD> mlp_backward(const Architecture& arch, std::span<const Matrix> weights,
                                  const Trace& trace, std::span<const uint32_t> labels);

// Index of the largest logit per row; NaN never wins.
std::vector<uint32_t> argmax_rows(const MatrixD& logits);

}  // namespace fslsim::detail

#endif  // FSLSIM_SRC_MLP_KERNELS_H_
