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

#include "fslsim/client.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fslsim {

std::vector<Matrix> reordered_scores(const Supernetwork& net, const NetworkRanking& global) {
  if (global.layers.size() != net.num_layers()) {
    throw InvalidRankingError("global ranking has the wrong number of layers");
  }
  std::vector<Matrix> out;
  out.reserve(net.num_layers());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const Matrix& scores = net.scores(l);
    if (global.layers[l].size() != scores.size()) {
      throw InvalidRankingError("global ranking layer " + std::to_string(l) + " has the wrong length");
    }
    std::vector<float> sorted = scores.values();
    std::sort(sorted.begin(), sorted.end());
    out.emplace_back(scores.rows(), scores.cols(), reorder_scores(sorted, global.layers[l]));
  }
  return out;
}

NetworkRanking fsl_client_update(const FslClientParams& params, const NetworkRanking& global,
                                 const Dataset& data, const LocalTask& task, std::size_t epochs) {
  Supernetwork net = Supernetwork::from_seed(params.seed, params.arch, params.weight_init);
  net.set_scores(reordered_scores(net, global));
  RngStream rng(task.stream_seed);
  edge_popup_train(net, data, task.train, epochs, params.k, params.sgd, rng);
  return argsort_network(net.all_scores());
}

ModelUpdate fedavg_client_update(const DenseNetwork& global, const Dataset& data,
                                 const LocalTask& task, std::size_t epochs, const SgdConfig& sgd) {
  if (task.train.empty()) throw std::invalid_argument("fedavg_client_update: empty local data");
  DenseNetwork local = global;
  RngStream rng(task.stream_seed);
  local.train(data, task.train, epochs, sgd, rng);
  const std::vector<float> before = global.flatten();
  const std::vector<float> after = local.flatten();
  ModelUpdate update{std::vector<double>(before.size()), task.client_id};
  for (std::size_t i = 0; i < before.size(); ++i) {
    update.delta[i] = static_cast<double>(after[i]) - static_cast<double>(before[i]);
  }
  return update;
}

}  // namespace fslsim
