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

#ifndef FSLSIM_PROTOCOLS_H_
#define FSLSIM_PROTOCOLS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fslsim/adversary.h"
#include "fslsim/aggregation.h"
#include "fslsim/analytics.h"
#include "fslsim/client.h"
#include "fslsim/data.h"
#include "fslsim/ranking.h"
#include "fslsim/supermask.h"

namespace fslsim {

enum class Algorithm { kFsl, kSparseFsl, kFedAvg, kSignSgd, kTopK };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool is_rank_based(Algorithm a);

// Validation failure that names the offending config key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class DataSource { kBlobs, kIdx, kCsv };

struct DataConfig {
  DataSource source = DataSource::kBlobs;
  BlobSpec blobs;
  std::filesystem::path idx_images;
  std::filesystem::path idx_labels;
  std::filesystem::path csv;
  double dirichlet_alpha = 1.0;
};

struct ExperimentConfig {
  std::size_t rounds = 200;             // T
  std::size_t num_clients = 100;        // N
  std::size_t clients_per_round = 25;   // n
  std::size_t local_epochs = 2;         // E
  double k = 0.5;                       // subnetwork fraction
  double sparsity = 1.0;                // s for Sparse-FSL, K for TopK
  Algorithm algorithm = Algorithm::kFsl;
  Aggregator aggregator = Aggregator::kAverage;
  // Malicious updates the robust aggregators trim per round; defaults to
  // ceil(malicious_fraction * clients_per_round).
  std::optional<std::size_t> robust_f;
  AttackConfig attack;
  SgdConfig sgd{0.4, 0.9, 1e-4, 8};           // score training
  SgdConfig baseline_sgd{0.05, 0.9, 1e-4, 8};  // weight training
  double server_lr = 0.001;                    // SignSGD only
  uint32_t seed = 1;
  Architecture architecture{{20, 64, Activation::kReLU}, {64, 10, Activation::kIdentity}};
  InitKind weight_init = InitKind::kSignedKaimingConstant;
  InitKind baseline_init = InitKind::kKaimingNormal;
  DataConfig data;
  std::size_t eval_every = 10;

  // Throws ConfigError naming the first invalid field.
  void validate() const;
  std::size_t assumed_malicious() const;
  FslClientParams client_params() const;
  ArchSpec arch_spec() const;
};

// Global model held by the server. FSL variants only ever hold a ranking.
struct ServerState {
  std::size_t round = 0;  // completed rounds
  NetworkRanking ranking;
  std::vector<float> weights;
};

struct AccuracyStats {
  double mean = 0;
  double std = 0;
  double min = 0;
  double max = 0;
  std::size_t clients = 0;
};

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  std::vector<std::size_t> selected;
  std::optional<AccuracyStats> accuracy;
  double upload_bits = 0;
  double download_bits = 0;
  bool attack_active = false;
  std::size_t malicious_selected = 0;
};

// Produces a benign client's ranking. The default trains on local data with
// fsl_client_update; tests substitute fixtures.
using RankingSource = std::function<NetworkRanking(const LocalTask& task, const NetworkRanking& global,
                                                   std::size_t epochs)>;

struct ClientPool {
  const Dataset* data = nullptr;
  const ClientShards* shards = nullptr;
  RankingSource ranking_source;  // empty means fsl_client_update
  std::size_t workers = 1;
};

// Seed tags for the derived streams of one experiment.
inline constexpr uint64_t kDataStreamTag = 10;
inline constexpr uint64_t kPartitionStreamTag = 11;
inline constexpr uint64_t kSamplingStreamTag = 12;
inline constexpr uint64_t kClientTrainStreamTag = 13;

// n distinct client ids drawn uniformly from [0, N) on the round's stream.
std::vector<std::size_t> sample_clients(const ExperimentConfig& config, std::size_t round);
uint64_t client_stream_seed(const ExperimentConfig& config, std::size_t round, std::size_t client_id);

ServerState initial_state(const ExperimentConfig& config);

std::pair<ServerState, RoundRecord> fsl_round(const ServerState& state, const ClientPool& clients,
                                              const ExperimentConfig& config);
// Clients send only their top s fraction of ranks; the server runs sparse_vote.
std::pair<ServerState, RoundRecord> sparse_fsl_round(const ServerState& state, const ClientPool& clients,
                                                     const ExperimentConfig& config);
// FedAvg, SignSGD and TopK.
std::pair<ServerState, RoundRecord> baseline_round(const ServerState& state, const ClientPool& clients,
                                                   const ExperimentConfig& config);
// Dispatches on config.algorithm.
std::pair<ServerState, RoundRecord> run_round(const ServerState& state, const ClientPool& clients,
                                              const ExperimentConfig& config);

// Accuracy of the global model on every client's test split. FSL variants use
// the subnetwork top_edges(R_g, k) of the seed's weights.
AccuracyStats evaluate_global(const ServerState& state, const ClientPool& clients,
                              const ExperimentConfig& config);

// Keeps the n - floor((1 - K) n) largest-magnitude coordinates of each layer
// (ties by lower index) and zeroes the rest.
std::vector<double> top_k_sparsify(std::span<const double> delta, const Architecture& arch, double fraction);

struct Federation {
  Dataset data;
  ClientShards shards;
};

Federation build_federation(const ExperimentConfig& config);

using RecordCallback = std::function<void(const RoundRecord&)>;

// Runs config.rounds rounds and returns one record per evaluation point
// (every eval_every rounds and after the last round).
std::vector<RoundRecord> run_experiment(const ExperimentConfig& config, std::size_t workers = 1,
                                        const RecordCallback& on_record = {});
std::vector<RoundRecord> run_experiment(const ExperimentConfig& config, const Federation& federation,
                                        std::size_t workers, const RecordCallback& on_record = {});

}  // namespace fslsim

#endif  // FSLSIM_PROTOCOLS_H_
