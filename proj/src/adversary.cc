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

#include "fslsim/adversary.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fslsim {

std::string_view to_string(AttackKind a) {
  switch (a) {
    case AttackKind::kNone: return "none";
    case AttackKind::kRankReversal: return "rank_reversal";
    case AttackKind::kScale: return "scale";
    case AttackKind::kOptPoison: return "opt_poison";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  for (AttackKind a : {AttackKind::kNone, AttackKind::kRankReversal, AttackKind::kScale,
                       AttackKind::kOptPoison}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view to_string(OmegaKind o) { return o == OmegaKind::kNegUnit ? "neg_unit" : "neg_sign"; }

std::optional<OmegaKind> parse_omega_kind(std::string_view name) {
  if (name == "neg_unit") return OmegaKind::kNegUnit;
  if (name == "neg_sign") return OmegaKind::kNegSign;
  return std::nullopt;
}

std::size_t AttackConfig::malicious_count(std::size_t num_clients) const {
  // The epsilon absorbs representation error, e.g. 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(malicious_fraction * static_cast<double>(num_clients) + 1e-9);
}

void AttackConfig::validate() const {
  if (!(malicious_fraction >= 0.0 && malicious_fraction < 1.0)) {
    throw std::invalid_argument("attack.malicious_fraction must lie in [0, 1)");
  }
  if (malicious_epochs == 0) throw std::invalid_argument("attack.malicious_epochs must be positive");
  if (!(gamma_init > 0.0)) throw std::invalid_argument("attack.gamma_init must be positive");
  if (gamma_iters == 0) throw std::invalid_argument("attack.gamma_iters must be positive");
  if (!std::isfinite(scale_factor)) throw std::invalid_argument("attack.scale_factor must be finite");
}

NetworkRanking reverse_vote(std::span<const NetworkRanking> benign_rankings) {
  return reverse_network(vote_network(benign_rankings));
}

NetworkRanking craft_rank_poison(const FslClientParams& params, const NetworkRanking& global,
                                 const Dataset& data, std::span<const LocalTask> malicious,
                                 std::size_t epochs) {
  if (malicious.empty()) throw std::invalid_argument("craft_rank_poison: no malicious clients");
  std::vector<NetworkRanking> honest;
  honest.reserve(malicious.size());
  for (const LocalTask& task : malicious) {
    honest.push_back(fsl_client_update(params, global, data, task, epochs));
  }
  return reverse_vote(honest);
}

ModelUpdate craft_scale_attack(const ModelUpdate& benign, double scale_factor) {
  ModelUpdate out{std::vector<double>(benign.delta.size()), benign.client_id};
  for (std::size_t i = 0; i < benign.delta.size(); ++i) out.delta[i] = -scale_factor * benign.delta[i];
  return out;
}

bool poison_accepted(std::span<const ModelUpdate> benign, const ModelUpdate& candidate,
                     std::size_t copies, const AggregatorSpec& agr) {
  if (agr.rule != Aggregator::kMultiKrum) return true;
  const std::size_t pool_size = benign.size() + copies;
  if (pool_size < 3) return true;
  std::vector<ModelUpdate> pool(benign.begin(), benign.end());
  // Copies sort after every real client so they lose score ties.
  for (std::size_t c = 0; c < copies; ++c) {
    pool.push_back({candidate.delta, std::numeric_limits<std::size_t>::max() - 1 - c});
  }
  const std::size_t f = std::min(agr.f, pool_size - 3);
  for (std::size_t pos : multi_krum_select(pool, f)) {
    if (pos >= benign.size()) return true;
  }
  return false;
}

OptPoisonResult craft_opt_poison(std::span<const ModelUpdate> benign, const AggregatorSpec& agr,
                                 OmegaKind omega_kind, double gamma_init, std::size_t gamma_iters,
                                 std::size_t copies) {
  if (benign.empty()) throw AggregationError("craft_opt_poison: no benign updates available");
  const ModelUpdate base = average(benign);
  const std::size_t d = base.delta.size();

  std::vector<double> omega(d);
  if (omega_kind == OmegaKind::kNegUnit) {
    double norm = 0.0;
    for (double v : base.delta) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw AggregationError("craft_opt_poison: zero benign mean with neg_unit");
    for (std::size_t i = 0; i < d; ++i) omega[i] = -base.delta[i] / norm;
  } else {
    for (std::size_t i = 0; i < d; ++i) omega[i] = base.delta[i] < 0.0 ? 1.0 : -1.0;
  }

  auto craft = [&](double gamma) {
    ModelUpdate u{std::vector<double>(d), kAggregateClientId};
    for (std::size_t i = 0; i < d; ++i) u.delta[i] = base.delta[i] + gamma * omega[i];
    return u;
  };

  double gamma = gamma_init;
  double step = gamma_init / 2.0;
  std::optional<double> best;
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < gamma_iters; ++it) {
    if (poison_accepted(benign, craft(gamma), std::max<std::size_t>(copies, 1), agr)) {
      best = gamma;
      ++accepted;
      gamma += step;
    } else {
      gamma -= step;
    }
    step /= 2.0;
  }
  const double chosen = best.value_or(gamma);
  return OptPoisonResult{craft(chosen), chosen, accepted};
}

}  // namespace fslsim
