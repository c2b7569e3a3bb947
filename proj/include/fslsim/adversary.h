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

#ifndef FSLSIM_ADVERSARY_H_
#define FSLSIM_ADVERSARY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "fslsim/aggregation.h"
#include "fslsim/client.h"
#include "fslsim/ranking.h"

namespace fslsim {

enum class AttackKind { kNone, kRankReversal, kScale, kOptPoison };
enum class OmegaKind { kNegUnit, kNegSign };

std::string_view to_string(AttackKind a);
std::optional<AttackKind> parse_attack_kind(std::string_view name);
std::string_view to_string(OmegaKind o);
std::optional<OmegaKind> parse_omega_kind(std::string_view name);

struct AttackConfig {
  double malicious_fraction = 0.0;
  AttackKind kind = AttackKind::kNone;
  std::size_t malicious_epochs = 2;
  double scale_factor = 1e6;
  OmegaKind omega = OmegaKind::kNegUnit;
  double gamma_init = 50.0;
  std::size_t gamma_iters = 20;

  // Malicious clients are ids [0, floor(alpha * N)).
  std::size_t malicious_count(std::size_t num_clients) const;
  bool is_malicious(std::size_t client_id, std::size_t num_clients) const {
    return kind != AttackKind::kNone && client_id < malicious_count(num_clients);
  }
  void validate() const;
};

// Colluding rank-reversal: vote over the malicious clients' benign rankings,
// then reverse every layer.
NetworkRanking reverse_vote(std::span<const NetworkRanking> benign_rankings);

// Every malicious client computes an honest ranking on its own data with
// `epochs` local epochs; the set then submits reverse_vote of those rankings.
NetworkRanking craft_rank_poison(const FslClientParams& params, const NetworkRanking& global,
                                 const Dataset& data, std::span<const LocalTask> malicious,
                                 std::size_t epochs);

// scale_factor * (-benign).
ModelUpdate craft_scale_attack(const ModelUpdate& benign, double scale_factor);

struct AggregatorSpec {
  Aggregator rule = Aggregator::kAverage;
  std::size_t f = 0;
};

struct OptPoisonResult {
  ModelUpdate update;
  double gamma = 0.0;
  std::size_t accepted_steps = 0;
};

// Adversary's acceptance test: would at least one of `copies` identical
// copies of `candidate` survive the aggregator when pooled with `benign`?
// Average and Trimmed-mean always accept. For Multi-Krum the simulated f is
// clamped to pool - 3, and pools smaller than 3 accept.
bool poison_accepted(std::span<const ModelUpdate> benign, const ModelUpdate& candidate,
                     std::size_t copies, const AggregatorSpec& agr);

// grad_b = mean(benign); omega = -grad_b/|grad_b| or -sign(grad_b). Halving
// search on gamma from gamma_init with initial step gamma_init/2 for
// gamma_iters acceptance checks: accepted moves up, rejected moves down.
// Returns grad_b + gamma * omega for the largest accepted gamma seen, or the
// final gamma when none was accepted. Throws AggregationError for a zero
// grad_b under kNegUnit.
OptPoisonResult craft_opt_poison(std::span<const ModelUpdate> benign, const AggregatorSpec& agr,
                                 OmegaKind omega, double gamma_init, std::size_t gamma_iters,
                                 std::size_t copies);

}  // namespace fslsim

#endif  // FSLSIM_ADVERSARY_H_
