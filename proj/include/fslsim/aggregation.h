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

#ifndef FSLSIM_AGGREGATION_H_
#define FSLSIM_AGGREGATION_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fslsim {

class AggregationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kAggregateClientId = std::numeric_limits<std::size_t>::max();

// Flat parameter delta (local model minus global model).
struct ModelUpdate {
  std::vector<double> delta;
  std::size_t client_id = kAggregateClientId;
};

// Entries are -1 or +1.
struct SignUpdate {
  std::vector<int8_t> signs;
  friend bool operator==(const SignUpdate&, const SignUpdate&) = default;
};

enum class Aggregator { kAverage, kTrimmedMean, kMultiKrum };

std::string_view to_string(Aggregator a);
std::optional<Aggregator> parse_aggregator(std::string_view name);

// sign(x) with sign(0) = +1.
SignUpdate to_signs(std::span<const double> values);

// All aggregators order their inputs by client_id before reducing, so the
// result does not depend on the order of the input list.
ModelUpdate average(std::span<const ModelUpdate> updates);

// Per dimension, drops the f largest and f smallest values and averages the
// rest. Requires more than 2f updates.
ModelUpdate trimmed_mean(std::span<const ModelUpdate> updates, std::size_t f);

// Krum score of an update: sum of squared distances to its n - f - 2 nearest
// neighbours. Returns the positions (into `updates`) of the n - f
// lowest-scoring updates, ties broken by lower client_id, in ascending
// position order. Requires n >= f + 3.
std::vector<std::size_t> multi_krum_select(std::span<const ModelUpdate> updates, std::size_t f);
std::vector<double> krum_scores(std::span<const ModelUpdate> updates, std::size_t f);

// Mean of the updates chosen by multi_krum_select.
ModelUpdate multi_krum(std::span<const ModelUpdate> updates, std::size_t f);

// Per dimension, the sign of the summed votes; a zero sum gives +1.
SignUpdate sign_majority(std::span<const SignUpdate> updates);

ModelUpdate aggregate(Aggregator rule, std::span<const ModelUpdate> updates, std::size_t f);

}  // namespace fslsim

#endif  // FSLSIM_AGGREGATION_H_
