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

#include "fslsim/aggregation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fslsim {
namespace {

// Strict weak order that places NaN last, so sorting never misbehaves on a
// diverged model.
bool total_less(double a, double b) {
  if (std::isnan(b)) return !std::isnan(a);
  return a < b;
}

std::size_t common_dim(std::span<const ModelUpdate> updates, const char* who) {
  if (updates.empty()) throw AggregationError(std::string(who) + ": no updates");
  const std::size_t d = updates.front().delta.size();
  for (const ModelUpdate& u : updates) {
    if (u.delta.size() != d) throw AggregationError(std::string(who) + ": updates differ in length");
  }
  return d;
}

std::vector<std::size_t> by_client_id(std::span<const ModelUpdate> updates) {
  std::vector<std::size_t> order(updates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });
  return order;
}

ModelUpdate mean_of(std::span<const ModelUpdate> updates, std::vector<std::size_t> positions) {
  std::stable_sort(positions.begin(), positions.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });
  const std::size_t d = updates.front().delta.size();
  ModelUpdate out{std::vector<double>(d, 0.0), kAggregateClientId};
  for (std::size_t p : positions) {
    const auto& delta = updates[p].delta;
    for (std::size_t j = 0; j < d; ++j) out.delta[j] += delta[j];
  }
  const double count = static_cast<double>(positions.size());
  for (double& v : out.delta) v /= count;
  return out;
}

}  // namespace

std::string_view to_string(Aggregator a) {
  switch (a) {
    case Aggregator::kAverage: return "average";
    case Aggregator::kTrimmedMean: return "trimmed_mean";
    case Aggregator::kMultiKrum: return "multi_krum";
  }
  return "unknown";
}

std::optional<Aggregator> parse_aggregator(std::string_view name) {
  for (Aggregator a : {Aggregator::kAverage, Aggregator::kTrimmedMean, Aggregator::kMultiKrum}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

SignUpdate to_signs(std::span<const double> values) {
  SignUpdate out;
  out.signs.reserve(values.size());
  for (double v : values) out.signs.push_back(v < 0.0 ? int8_t{-1} : int8_t{1});
  return out;
}

ModelUpdate average(std::span<const ModelUpdate> updates) {
  common_dim(updates, "average");
  return mean_of(updates, by_client_id(updates));
}

ModelUpdate trimmed_mean(std::span<const ModelUpdate> updates, std::size_t f) {
  const std::size_t d = common_dim(updates, "trimmed_mean");
  const std::size_t n = updates.size();
  if (n <= 2 * f) {
    throw AggregationError("trimmed_mean: need more than 2f updates (n=" + std::to_string(n) +
                           ", f=" + std::to_string(f) + ")");
  }
  ModelUpdate out{std::vector<double>(d, 0.0), kAggregateClientId};
  std::vector<double> column(n);
  const double kept = static_cast<double>(n - 2 * f);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = updates[i].delta[j];
    std::sort(column.begin(), column.end(), total_less);
    double sum = 0.0;
    for (std::size_t i = f; i < n - f; ++i) sum += column[i];
    out.delta[j] = sum / kept;
  }
  return out;
}

std::vector<double> krum_scores(std::span<const ModelUpdate> updates, std::size_t f) {
  const std::size_t d = common_dim(updates, "multi_krum");
  const std::size_t n = updates.size();
  if (n < f + 3) {
    throw AggregationError("multi_krum: need at least f + 3 updates (n=" + std::to_string(n) +
                           ", f=" + std::to_string(f) + ")");
  }
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double sq = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = updates[a].delta[j] - updates[b].delta[j];
        sq += diff * diff;
      }
      dist[a][b] = dist[b][a] = sq;
    }
  }
  const std::size_t neighbours = n - f - 2;
  std::vector<double> scores(n);
  std::vector<double> row;
  for (std::size_t a = 0; a < n; ++a) {
    row.clear();
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a) row.push_back(dist[a][b]);
    }
    std::sort(row.begin(), row.end(), total_less);
    scores[a] = std::accumulate(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(neighbours), 0.0);
  }
  return scores;
}

std::vector<std::size_t> multi_krum_select(std::span<const ModelUpdate> updates, std::size_t f) {
  std::vector<double> scores = krum_scores(updates, f);
  std::vector<std::size_t> order(updates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (total_less(scores[a], scores[b])) return true;
    if (total_less(scores[b], scores[a])) return false;
    return updates[a].client_id < updates[b].client_id;
  });
  order.resize(updates.size() - f);
  std::sort(order.begin(), order.end());
  return order;
}

ModelUpdate multi_krum(std::span<const ModelUpdate> updates, std::size_t f) {
  return mean_of(updates, multi_krum_select(updates, f));
}

SignUpdate sign_majority(std::span<const SignUpdate> updates) {
  if (updates.empty()) throw AggregationError("sign_majority: no updates");
  const std::size_t d = updates.front().signs.size();
  std::vector<int64_t> sum(d, 0);
  for (const SignUpdate& u : updates) {
    if (u.signs.size() != d) throw AggregationError("sign_majority: updates differ in length");
    for (std::size_t j = 0; j < d; ++j) sum[j] += u.signs[j];
  }
  SignUpdate out;
  out.signs.reserve(d);
  for (int64_t s : sum) out.signs.push_back(s < 0 ? int8_t{-1} : int8_t{1});
  return out;
}

ModelUpdate aggregate(Aggregator rule, std::span<const ModelUpdate> updates, std::size_t f) {
  switch (rule) {
    case Aggregator::kAverage: return average(updates);
    case Aggregator::kTrimmedMean: return trimmed_mean(updates, f);
    case Aggregator::kMultiKrum: return multi_krum(updates, f);
  }
  throw AggregationError("unknown aggregator");
}

}  // namespace fslsim
