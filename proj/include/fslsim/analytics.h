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

#ifndef FSLSIM_ANALYTICS_H_
#define FSLSIM_ANALYTICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fslsim {

// Upper bound on the probability that a simplified majority vote drops a good
// edge: n clients per round, benign inclusion probability p, malicious
// fraction alpha.
struct BoundQuery {
  std::size_t n = 0;
  double p = 0.5;
  double alpha = 0.0;
};

// (1/2) sqrt(n p (1-p)) / |n (p + alpha (1 - 2p) - 1/2)|, clamped to [0, 1].
// Returns 1 when p + alpha (1 - 2p) - 1/2 <= 0. Throws std::invalid_argument
// unless 0 < p < 1, 0 <= alpha < 1 and n >= 1.
double failure_upper_bound(const BoundQuery& q);

struct BoundRow {
  double alpha;
  double p;
  double bound;
};

// Alpha-major grid.
std::vector<BoundRow> sweep_bound(std::size_t n, std::span<const double> p_grid,
                                  std::span<const double> alpha_grid);

// p_steps evenly spaced values from p_min to p_max inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t steps);

enum class CostAlgorithm { kFedAvg, kFsl, kSparseFsl, kSignSgd, kTopK };

std::string_view to_string(CostAlgorithm a);

struct ArchSpec {
  std::string name;
  std::vector<uint64_t> layer_param_counts;
};

struct CostReport {
  double upload_bits = 0;
  double download_bits = 0;

  double upload_mib() const;
  double download_mib() const;
};

inline constexpr double kBitsPerMiB = 8.0 * 1024.0 * 1024.0;

// Per-client, per-round traffic. `fraction` is s for Sparse-FSL and K for
// TopK and ignored otherwise.
//   FSL:       up = down = sum n_l * ceil(log2 n_l)
//   SparseFSL: up = s * FSL, down = FSL
//   FedAvg:    up = down = sum n_l * weight_bits
//   SignSGD:   up = sum n_l, down = sum n_l * weight_bits
//   TopK:      up = K * sum n_l * weight_bits + sum n_l, down = FedAvg
CostReport comm_cost(const ArchSpec& arch, CostAlgorithm algorithm, double fraction = 1.0,
                     unsigned weight_bits = 32);

// sum log2(n_l!), the entropy of a uniformly random layer-wise ranking.
double ideal_rank_bits(const ArchSpec& arch);

// Parameter counts of the reference image models.
std::optional<ArchSpec> arch_preset(std::string_view name);
std::vector<std::string> arch_preset_names();

struct CostRow {
  std::string algorithm;
  CostReport report;
};

// FedAvg, FSL, SFSL50, SFSL10, SignSGD, TopK50, TopK10.
std::vector<CostRow> cost_table(const ArchSpec& arch);

}  // namespace fslsim

#endif  // FSLSIM_ANALYTICS_H_
