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

#ifndef FSLSIM_CLIENT_H_
#define FSLSIM_CLIENT_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "fslsim/aggregation.h"
#include "fslsim/data.h"
#include "fslsim/dense.h"
#include "fslsim/ranking.h"
#include "fslsim/supermask.h"

namespace fslsim {

// What every FSL client shares: the seed, the supernetwork layout and the
// local training recipe.
struct FslClientParams {
  uint64_t seed = 0;
  Architecture arch;
  InitKind weight_init = InitKind::kSignedKaimingConstant;
  double k = 0.5;
  SgdConfig sgd;
};

// One client's work item in one round.
struct LocalTask {
  std::size_t client_id = 0;
  std::span<const std::size_t> train;
  // Seeds the client's batch-shuffling stream.
  uint64_t stream_seed = 0;
};

// Rebuilds the supernetwork from the seed, reorders its initial scores to
// follow `global`, runs edge-popup for `epochs` and returns the layer-wise
// argsort of the trained scores.
NetworkRanking fsl_client_update(const FslClientParams& params, const NetworkRanking& global,
                                 const Dataset& data, const LocalTask& task, std::size_t epochs);

// Scores of the seed's supernetwork reordered to follow `global`.
std::vector<Matrix> reordered_scores(const Supernetwork& net, const NetworkRanking& global);

// Local SGD on a copy of `global`; returns local - global.
ModelUpdate fedavg_client_update(const DenseNetwork& global, const Dataset& data,
                                 const LocalTask& task, std::size_t epochs, const SgdConfig& sgd);

}  // namespace fslsim

#endif  // FSLSIM_CLIENT_H_
