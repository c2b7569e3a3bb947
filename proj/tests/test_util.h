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

#ifndef FSLSIM_TESTS_TEST_UTIL_H_
#define FSLSIM_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <vector>

#include "fslsim/data.h"
#include "fslsim/rng.h"
#include "fslsim/supermask.h"

namespace fslsim::testing {

// A random MLP of 1 to 3 layers with at most `max_edges` edges, random
// activations on hidden layers and random weights and scores.
inline Supernetwork random_network(RngStream& rng, std::size_t max_edges) {
  for (;;) {
    const std::size_t layers = 1 + rng.uniform_index(3);
    std::vector<std::size_t> widths;
    for (std::size_t i = 0; i <= layers; ++i) widths.push_back(1 + rng.uniform_index(6));
    widths.back() = std::max<std::size_t>(widths.back(), 2);
    Architecture arch;
    std::size_t edges = 0;
    for (std::size_t l = 0; l < layers; ++l) {
      const Activation act = l + 1 == layers ? Activation::kIdentity
                                             : (rng.coin() ? Activation::kReLU : Activation::kIdentity);
      arch.push_back({widths[l], widths[l + 1], act});
      edges += widths[l] * widths[l + 1];
    }
    if (edges > max_edges) continue;
    std::vector<Matrix> weights, scores;
    for (const LayerSpec& spec : arch) {
      Matrix w(spec.fan_out, spec.fan_in), s(spec.fan_out, spec.fan_in);
      for (float& v : w.flat()) v = static_cast<float>(rng.normal());
      for (float& v : s.flat()) v = static_cast<float>(rng.uniform(-1, 1));
      weights.push_back(std::move(w));
      scores.push_back(std::move(s));
    }
    return Supernetwork::from_parts(arch, std::move(weights), std::move(scores));
  }
}

inline Minibatch random_batch(RngStream& rng, std::size_t rows, std::size_t cols, std::size_t classes) {
  Minibatch batch{Matrix(rows, cols), {}};
  for (float& v : batch.inputs.flat()) v = static_cast<float>(rng.normal());
  for (std::size_t r = 0; r < rows; ++r) batch.labels.push_back(static_cast<uint32_t>(rng.uniform_index(classes)));
  return batch;
}

inline Dataset small_blobs(uint64_t seed, std::size_t classes = 2, std::size_t dims = 4,
                           std::size_t per_class = 50, double separation = 6.0) {
  RngStream rng(seed);
  return gen_blobs(BlobSpec{classes, dims, per_class, 1.0, separation}, rng);
}

}  // namespace fslsim::testing

#endif  // FSLSIM_TESTS_TEST_UTIL_H_
