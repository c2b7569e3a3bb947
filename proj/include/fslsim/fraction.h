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

#ifndef FSLSIM_FRACTION_H_
#define FSLSIM_FRACTION_H_

#include <cstddef>

namespace fslsim {

// Number of entries dropped from the bottom of an n-element ordering when a
// fraction k is kept. Truncates like Python's int().
inline std::size_t dropped_count(std::size_t n, double k) {
  return static_cast<std::size_t>((1.0 - k) * static_cast<double>(n));
}

// Number of entries kept at the top: n - floor((1 - k) * n).
inline std::size_t kept_count(std::size_t n, double k) { return n - dropped_count(n, k); }

}  // namespace fslsim

#endif  // FSLSIM_FRACTION_H_
