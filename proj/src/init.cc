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

#include "fslsim/init.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fslsim {

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::kGlorotNormal: return "glorot_normal";
    case InitKind::kKaimingNormal: return "kaiming_normal";
    case InitKind::kSignedKaimingConstant: return "signed_kaiming_constant";
    case InitKind::kKaimingUniform: return "kaiming_uniform";
  }
  return "unknown";
}

std::optional<InitKind> parse_init_kind(std::string_view name) {
  for (InitKind k : {InitKind::kGlorotNormal, InitKind::kKaimingNormal,
                     InitKind::kSignedKaimingConstant, InitKind::kKaimingUniform}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Matrix init_weights(LayerShape shape, InitKind kind, RngStream& rng) {
  if (shape.fan_in == 0 || shape.fan_out == 0) {
    throw std::invalid_argument("init_weights: fan_in and fan_out must be positive");
  }
  const double fan_in = static_cast<double>(shape.fan_in);
  const double fan_out = static_cast<double>(shape.fan_out);
  Matrix m(shape.fan_out, shape.fan_in);
  auto values = m.flat();
  switch (kind) {
    case InitKind::kGlorotNormal: {
      const double stddev = std::sqrt(2.0 / (fan_in + fan_out));
      for (float& v : values) v = static_cast<float>(rng.normal(0.0, stddev));
      break;
    }
    case InitKind::kKaimingNormal: {
      const double stddev = std::sqrt(2.0 / fan_in);
      for (float& v : values) v = static_cast<float>(rng.normal(0.0, stddev));
      break;
    }
    case InitKind::kSignedKaimingConstant: {
      const float sigma = static_cast<float>(std::sqrt(2.0 / fan_in));
      for (float& v : values) v = rng.coin() ? sigma : -sigma;
      break;
    }
    case InitKind::kKaimingUniform: {
      const double bound = std::sqrt(6.0 / fan_in);
      const float inner = std::nextafter(static_cast<float>(bound), 0.0f);
      for (float& v : values) {
        // Keep the open interval after rounding to float.
        v = std::clamp(static_cast<float>(rng.uniform(-bound, bound)), -inner, inner);
      }
      break;
    }
  }
  return m;
}

Matrix init_scores(LayerShape shape, RngStream& rng) {
  return init_weights(shape, InitKind::kKaimingUniform, rng);
}

}  // namespace fslsim
