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

#include "fslsim/ranking.h"

#include <string>

#include "fslsim/fraction.h"

namespace fslsim {
namespace {

LayerRanking argsort_tally(const std::vector<uint64_t>& reps) {
  return argsort(std::span<const uint64_t>(reps));
}

}  // namespace

bool is_permutation(std::span<const uint32_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (uint32_t e : perm) {
    if (e >= perm.size() || seen[e]) return false;
    seen[e] = true;
  }
  return true;
}

void check_permutation(std::span<const uint32_t> perm) {
  if (!is_permutation(perm)) {
    throw InvalidRankingError("ranking of length " + std::to_string(perm.size()) +
                              " is not a permutation");
  }
}

std::vector<uint32_t> reputations(const LayerRanking& r) {
  std::vector<uint32_t> rep(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) rep[r.perm[i]] = static_cast<uint32_t>(i);
  return rep;
}

std::vector<float> reorder_scores(std::span<const float> sorted_values, const LayerRanking& ranking) {
  if (sorted_values.size() != ranking.size()) {
    throw std::invalid_argument("reorder_scores: length mismatch");
  }
  check_permutation(ranking.perm);
  std::vector<float> out(sorted_values.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) out[ranking.perm[i]] = sorted_values[i];
  return out;
}

VoteResult vote(std::span<const LayerRanking> rankings) {
  if (rankings.empty()) throw InvalidRankingError("vote: no rankings");
  const std::size_t n = rankings.front().size();
  std::vector<uint64_t> tally(n, 0);
  for (const LayerRanking& r : rankings) {
    if (r.size() != n) throw InvalidRankingError("vote: rankings differ in length");
    check_permutation(r.perm);
    for (std::size_t i = 0; i < n; ++i) tally[r.perm[i]] += i;
  }
  VoteResult result{argsort_tally(tally), ReputationTally{std::move(tally)}};
  return result;
}

VoteResult sparse_vote(std::span<const SparseLayerRanking> sparse) {
  if (sparse.empty()) throw InvalidRankingError("sparse_vote: no rankings");
  const std::size_t n = sparse.front().n;
  std::vector<uint64_t> tally(n, 0);
  std::vector<bool> seen(n);
  for (const SparseLayerRanking& client : sparse) {
    if (client.n != n) throw InvalidRankingError("sparse_vote: clients disagree on n");
    if (client.top.size() > n) throw InvalidRankingError("sparse_vote: more entries than edges");
    std::fill(seen.begin(), seen.end(), false);
    const std::size_t offset = n - client.top.size();
    for (std::size_t i = 0; i < client.top.size(); ++i) {
      const uint32_t e = client.top[i];
      if (e >= n) throw InvalidRankingError("sparse_vote: edge index out of range");
      if (seen[e]) throw InvalidRankingError("sparse_vote: duplicate edge " + std::to_string(e));
      seen[e] = true;
      tally[e] += offset + i;
    }
  }
  return VoteResult{argsort_tally(tally), ReputationTally{std::move(tally)}};
}

LayerRanking reverse(const LayerRanking& r) {
  return LayerRanking{std::vector<uint32_t>(r.perm.rbegin(), r.perm.rend())};
}

std::vector<uint32_t> top_edges(const LayerRanking& r, double k) {
  const std::size_t drop = dropped_count(r.size(), k);
  return std::vector<uint32_t>(r.perm.begin() + static_cast<std::ptrdiff_t>(drop), r.perm.end());
}

SparseLayerRanking truncate(const LayerRanking& r, double s) {
  return SparseLayerRanking{top_edges(r, s), r.size()};
}

Matrix ranking_mask(const LayerRanking& r, double k, std::size_t rows, std::size_t cols) {
  if (rows * cols != r.size()) throw std::invalid_argument("ranking_mask: shape mismatch");
  Matrix mask(rows, cols, 0.0f);
  for (uint32_t e : top_edges(r, k)) mask[e] = 1.0f;
  return mask;
}

NetworkRanking argsort_network(std::span<const Matrix> scores) {
  NetworkRanking out;
  for (const Matrix& s : scores) out.layers.push_back(argsort(s.flat()));
  return out;
}

NetworkRanking vote_network(std::span<const NetworkRanking> rankings) {
  if (rankings.empty()) throw InvalidRankingError("vote: no rankings");
  const std::size_t layers = rankings.front().layers.size();
  NetworkRanking out;
  std::vector<LayerRanking> column;
  for (std::size_t l = 0; l < layers; ++l) {
    column.clear();
    for (const NetworkRanking& r : rankings) {
      if (r.layers.size() != layers) throw InvalidRankingError("vote: layer count mismatch");
      column.push_back(r.layers[l]);
    }
    out.layers.push_back(vote(column).ranking);
  }
  return out;
}

NetworkRanking reverse_network(const NetworkRanking& r) {
  NetworkRanking out;
  for (const LayerRanking& layer : r.layers) out.layers.push_back(reverse(layer));
  return out;
}

}  // namespace fslsim
