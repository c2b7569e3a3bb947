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

#ifndef FSLSIM_DENSE_H_
#define FSLSIM_DENSE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fslsim/data.h"
#include "fslsim/init.h"
#include "fslsim/matrix.h"
#include "fslsim/rng.h"
#include "fslsim/supermask.h"

namespace fslsim {

// Plain trainable MLP used by the weight-based baselines.
class DenseNetwork {
 public:
  DenseNetwork(Architecture arch, std::vector<Matrix> weights);

  // Weights from derive(seed, {kWeightStreamTag}).
  static DenseNetwork from_seed(uint64_t seed, const Architecture& arch, InitKind init);

  const Architecture& architecture() const { return arch_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  std::size_t parameter_count() const;

  // Layer-major concatenation of the weight matrices.
  std::vector<float> flatten() const;
  void assign(std::span<const float> flat);

  MatrixD forward(const Matrix& inputs) const;
  // Batch-mean cross-entropy gradient per layer.
  std::vector<MatrixD> gradients(const Minibatch& batch) const;
  // Minibatch SGD with momentum and weight decay; fresh momentum per call.
  void train(const Dataset& data, std::span<const std::size_t> indices, std::size_t epochs,
             const SgdConfig& sgd, RngStream& rng);
  double evaluate(const Dataset& data, std::span<const std::size_t> indices) const;

 private:
  Architecture arch_;
  std::vector<Matrix> weights_;
};

}  // namespace fslsim

#endif  // FSLSIM_DENSE_H_
