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

#include "fslsim/analytics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fslsim/wire.h"

namespace fslsim {

double failure_upper_bound(const BoundQuery& q) {
  if (!(q.p > 0.0 && q.p < 1.0)) throw std::invalid_argument("failure_upper_bound: p must lie in (0, 1)");
  if (!(q.alpha >= 0.0 && q.alpha < 1.0)) {
    throw std::invalid_argument("failure_upper_bound: alpha must lie in [0, 1)");
  }
  if (q.n == 0) throw std::invalid_argument("failure_upper_bound: n must be positive");
  // Extended precision keeps the result within one ulp of the exact value.
  const long double n = static_cast<long double>(q.n);
  const long double p = q.p;
  const long double alpha = q.alpha;
  const long double margin = (p - 0.5L) * (1.0L - 2.0L * alpha);
  if (margin <= 0.0L) return 1.0;
  const long double bound = 0.5L * std::sqrt(n * p * (1.0L - p)) / (n * margin);
  return std::clamp(static_cast<double>(bound), 0.0, 1.0);
}

std::vector<BoundRow> sweep_bound(std::size_t n, std::span<const double> p_grid,
                                  std::span<const double> alpha_grid) {
  std::vector<BoundRow> rows;
  rows.reserve(p_grid.size() * alpha_grid.size());
  for (double alpha : alpha_grid) {
    for (double p : p_grid) rows.push_back({alpha, p, failure_upper_bound({n, p, alpha})});
  }
  return rows;
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  std::vector<double> out;
  if (steps == 0) return out;
  if (steps == 1) return {lo};
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  out.back() = hi;
  return out;
}

std::string_view to_string(CostAlgorithm a) {
  switch (a) {
    case CostAlgorithm::kFedAvg: return "FedAvg";
    case CostAlgorithm::kFsl: return "FSL";
    case CostAlgorithm::kSparseFsl: return "SparseFSL";
    case CostAlgorithm::kSignSgd: return "SignSGD";
    case CostAlgorithm::kTopK: return "TopK";
  }
  return "unknown";
}

double CostReport::upload_mib() const { return upload_bits / kBitsPerMiB; }
double CostReport::download_mib() const { return download_bits / kBitsPerMiB; }

CostReport comm_cost(const ArchSpec& arch, CostAlgorithm algorithm, double fraction,
                     unsigned weight_bits) {
  double params = 0;
  double rank_bits = 0;
  for (uint64_t n : arch.layer_param_counts) {
    params += static_cast<double>(n);
    rank_bits += static_cast<double>(n) * rank_bit_width(n);
  }
  const double dense = params * weight_bits;
  switch (algorithm) {
    case CostAlgorithm::kFsl: return {rank_bits, rank_bits};
    case CostAlgorithm::kSparseFsl: return {fraction * rank_bits, rank_bits};
    case CostAlgorithm::kFedAvg: return {dense, dense};
    case CostAlgorithm::kSignSgd: return {params, dense};
    case CostAlgorithm::kTopK: return {fraction * dense + params, dense};
  }
  return {};
}

double ideal_rank_bits(const ArchSpec& arch) {
  double bits = 0;
  for (uint64_t n : arch.layer_param_counts) {
    bits += std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
  }
  return bits;
}

std::optional<ArchSpec> arch_preset(std::string_view name) {
  if (name == "lenet-mnist") return ArchSpec{"lenet-mnist", {288, 18432, 1605632, 1280}};
  if (name == "lenet-femnist") return ArchSpec{"lenet-femnist", {288, 18432, 1605632, 7936}};
  if (name == "conv8-cifar10") {
    return ArchSpec{"conv8-cifar10",
                    {1728, 36864, 73728, 147456, 294912, 589824, 1179648, 2359296, 524288, 65536,
                     2560}};
  }
  return std::nullopt;
}

std::vector<std::string> arch_preset_names() { return {"lenet-mnist", "conv8-cifar10", "lenet-femnist"}; }

std::vector<CostRow> cost_table(const ArchSpec& arch) {
  return {
      {"FedAvg", comm_cost(arch, CostAlgorithm::kFedAvg)},
      {"FSL", comm_cost(arch, CostAlgorithm::kFsl)},
      {"SFSL50", comm_cost(arch, CostAlgorithm::kSparseFsl, 0.5)},
      {"SFSL10", comm_cost(arch, CostAlgorithm::kSparseFsl, 0.1)},
      {"SignSGD", comm_cost(arch, CostAlgorithm::kSignSgd)},
      {"TopK50", comm_cost(arch, CostAlgorithm::kTopK, 0.5)},
      {"TopK10", comm_cost(arch, CostAlgorithm::kTopK, 0.1)},
  };
}

}  // namespace fslsim
