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

#ifndef FSLSIM_RNG_H_
#define FSLSIM_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fslsim {

// Deterministic 64-bit random stream.
//
// The generator is xoshiro256** seeded through SplitMix64. Uniform doubles
// take the top 53 bits of each output; normal variates use Box-Muller with
// the second variate of each pair cached. Output is bit-identical on every
// platform that provides IEEE-754 doubles and a correctly rounded sqrt; the
// transcendental calls (log, cos, sin) go through the host libm, so normal
// variates are only guaranteed identical under the same libm.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "xoshiro256starstar-splitmix64";

  explicit RngStream(uint64_t seed);

  uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double uniform01();
  // Uniform on (lo, hi).
  double uniform(double lo, double hi);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Uniform integer in [0, bound), unbiased. bound must be positive.
  uint64_t uniform_index(uint64_t bound);
  // Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);
  bool coin() { return (next_u64() >> 63) != 0; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(values[i - 1], values[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& values) {
    shuffle(std::span<T>(values));
  }

  const std::array<uint64_t, 4>& state() const { return state_; }

 private:
  std::array<uint64_t, 4> state_;
  std::optional<double> spare_normal_;
};

// Stream whose output depends only on (seed, tags). Tag order matters.
RngStream derive(uint64_t seed, std::span<const uint64_t> tags);
RngStream derive(uint64_t seed, std::initializer_list<uint64_t> tags);

// Protocol seeds are 32 bits on the wire and are zero-extended internally.
inline uint64_t widen_seed(uint32_t seed) { return static_cast<uint64_t>(seed); }

}  // namespace fslsim

#endif  // FSLSIM_RNG_H_
