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

#ifndef FSLSIM_INIT_H_
#define FSLSIM_INIT_H_

#include <cstddef>
#include <optional>
#include <string_view>

#include "fslsim/matrix.h"
#include "fslsim/rng.h"

namespace fslsim {

enum class InitKind {
  kGlorotNormal,
  kKaimingNormal,
  kSignedKaimingConstant,
  kKaimingUniform,
};

std::string_view to_string(InitKind kind);
std::optional<InitKind> parse_init_kind(std::string_view name);

// Shape of a fully connected layer's parameter matrix: fan_out rows of
// fan_in columns.
struct LayerShape {
  std::size_t fan_out = 0;
  std::size_t fan_in = 0;
};

// Stream tags under the shared seed. Weights and scores come from the same
// seed on distinct sub-streams.
inline constexpr uint64_t kWeightStreamTag = 0;
inline constexpr uint64_t kScoreStreamTag = 1;

// Throws std::invalid_argument on a zero fan.
Matrix init_weights(LayerShape shape, InitKind kind, RngStream& rng);
Matrix init_scores(LayerShape shape, RngStream& rng);

}  // namespace fslsim

#endif  // FSLSIM_INIT_H_
