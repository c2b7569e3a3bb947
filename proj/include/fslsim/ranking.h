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

#ifndef FSLSIM_RANKING_H_
#define FSLSIM_RANKING_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fslsim/matrix.h"

namespace fslsim {

class InvalidRankingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Edge indices ordered from least to most important: edge perm[i] holds
// reputation i.
struct LayerRanking {
  std::vector<uint32_t> perm;

  std::size_t size() const { return perm.size(); }
  friend bool operator==(const LayerRanking&, const LayerRanking&) = default;
};

// One LayerRanking per layer.
struct NetworkRanking {
  std::vector<LayerRanking> layers;

  friend bool operator==(const NetworkRanking&, const NetworkRanking&) = default;
};

// Highest-reputation suffix of a full ranking, ascending by reputation.
struct SparseLayerRanking {
  std::vector<uint32_t> top;
  std::size_t n = 0;
};

struct ReputationTally {
  std::vector<uint64_t> reps;
};

struct VoteResult {
  LayerRanking ranking;
  ReputationTally tally;
};

bool is_permutation(std::span<const uint32_t> perm);
// Throws InvalidRankingError.
void check_permutation(std::span<const uint32_t> perm);

// Stable ascending argsort: equal values keep their index order.
template <typename T>
LayerRanking argsort(std::span<const T> values) {
  LayerRanking r;
  r.perm.resize(values.size());
  std::iota(r.perm.begin(), r.perm.end(), uint32_t{0});
  std::stable_sort(r.perm.begin(), r.perm.end(),
                   [&](uint32_t a, uint32_t b) { return values[a] < values[b]; });
  return r;
}
inline LayerRanking argsort(const std::vector<float>& v) { return argsort(std::span<const float>(v)); }
inline LayerRanking argsort(const std::vector<double>& v) { return argsort(std::span<const double>(v)); }

// Reputation of every edge under `r`: the inverse permutation.
std::vector<uint32_t> reputations(const LayerRanking& r);

// output[ranking.perm[i]] = sorted_values[i], so argsort(output) == ranking
// whenever sorted_values is strictly ascending.
std::vector<float> reorder_scores(std::span<const float> sorted_values, const LayerRanking& ranking);

// Sums each client's reputations and argsorts the tally.
VoteResult vote(std::span<const LayerRanking> rankings);

// Client entry top[i] contributes reputation (n - s) + i; unsent edges
// contribute 0.
VoteResult sparse_vote(std::span<const SparseLayerRanking> sparse);

LayerRanking reverse(const LayerRanking& r);

// Edges in the top n - floor((1 - k) n) positions, in ranking order.
std::vector<uint32_t> top_edges(const LayerRanking& r, double k);

// Keeps the highest-reputation n - floor((1 - s) n) entries.
SparseLayerRanking truncate(const LayerRanking& r, double s);

// 0/1 matrix selecting top_edges(r, k), shaped rows x cols.
Matrix ranking_mask(const LayerRanking& r, double k, std::size_t rows, std::size_t cols);

// Layer-wise lifts.
NetworkRanking argsort_network(std::span<const Matrix> scores);
NetworkRanking vote_network(std::span<const NetworkRanking> rankings);
NetworkRanking reverse_network(const NetworkRanking& r);

}  // namespace fslsim

#endif  // FSLSIM_RANKING_H_
