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

#include "fslsim/protocols.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fslsim/dense.h"
#include "fslsim/fraction.h"
#include "parallel.h"

namespace fslsim {
namespace {

std::vector<LocalTask> make_tasks(const ExperimentConfig& config, const ClientPool& clients,
                                  std::size_t round, std::span<const std::size_t> ids) {
  std::vector<LocalTask> tasks;
  tasks.reserve(ids.size());
  for (std::size_t id : ids) {
    std::span<const std::size_t> train;
    if (clients.shards) train = clients.shards->clients.at(id).train;
    tasks.push_back({id, train, client_stream_seed(config, round, id)});
  }
  return tasks;
}

NetworkRanking benign_ranking(const ClientPool& clients,
                              const FslClientParams& params, const LocalTask& task,
                              const NetworkRanking& global, std::size_t epochs) {
  if (clients.ranking_source) return clients.ranking_source(task, global, epochs);
  // A client without training data has nothing to learn and echoes R_g.
  if (task.train.empty()) return global;
  return fsl_client_update(params, global, *clients.data, task, epochs);
}

void check_pool(const ClientPool& clients, const ExperimentConfig& config) {
  if (!clients.ranking_source && (!clients.data || !clients.shards)) {
    throw std::invalid_argument("client pool has no data");
  }
  if (clients.shards && clients.shards->clients.size() != config.num_clients) {
    throw std::invalid_argument("client pool size does not match num_clients");
  }
}

// Per-round submissions of the selected FSL clients, malicious ones replaced
// by the colluding reversed ranking.
struct FslSubmissions {
  std::vector<NetworkRanking> rankings;
  std::size_t malicious = 0;
};

FslSubmissions collect_fsl(const ServerState& state, const ClientPool& clients,
                           const ExperimentConfig& config, std::span<const std::size_t> selected) {
  const FslClientParams params = config.client_params();
  const bool attacking = config.attack.kind == AttackKind::kRankReversal;
  std::vector<std::size_t> benign_ids;
  std::vector<std::size_t> malicious_ids;
  for (std::size_t id : selected) {
    (attacking && config.attack.is_malicious(id, config.num_clients) ? malicious_ids : benign_ids)
        .push_back(id);
  }

  // All clients that train this round, malicious ones with E'.
  std::vector<std::size_t> trainers = benign_ids;
  trainers.insert(trainers.end(), malicious_ids.begin(), malicious_ids.end());
  std::vector<LocalTask> tasks = make_tasks(config, clients, state.round, trainers);
  std::vector<NetworkRanking> trained(trainers.size());
  detail::parallel_for(trainers.size(), clients.workers, [&](std::size_t i) {
    const bool malicious = i >= benign_ids.size();
    const std::size_t epochs = malicious ? config.attack.malicious_epochs : config.local_epochs;
    trained[i] = benign_ranking(clients, params, tasks[i], state.ranking, epochs);
  });

  FslSubmissions out;
  out.malicious = malicious_ids.size();
  std::optional<NetworkRanking> poison;
  if (!malicious_ids.empty()) {
    poison = reverse_vote(std::span<const NetworkRanking>(trained).subspan(benign_ids.size()));
  }
  // Submissions in selection order.
  for (std::size_t id : selected) {
    auto it = std::find(benign_ids.begin(), benign_ids.end(), id);
    if (it != benign_ids.end()) {
      out.rankings.push_back(trained[static_cast<std::size_t>(it - benign_ids.begin())]);
    } else {
      out.rankings.push_back(*poison);
    }
  }
  return out;
}

RoundRecord base_record(const ServerState& state, const ExperimentConfig& config,
                        std::vector<std::size_t> selected, std::size_t malicious) {
  RoundRecord rec;
  rec.round = state.round + 1;
  rec.selected = std::move(selected);
  const CostAlgorithm cost_algo = [&] {
    switch (config.algorithm) {
      case Algorithm::kFsl: return CostAlgorithm::kFsl;
      case Algorithm::kSparseFsl: return CostAlgorithm::kSparseFsl;
      case Algorithm::kFedAvg: return CostAlgorithm::kFedAvg;
      case Algorithm::kSignSgd: return CostAlgorithm::kSignSgd;
      case Algorithm::kTopK: return CostAlgorithm::kTopK;
    }
    return CostAlgorithm::kFedAvg;
  }();
  const CostReport cost = comm_cost(config.arch_spec(), cost_algo, config.sparsity);
  rec.upload_bits = cost.upload_bits;
  rec.download_bits = cost.download_bits;
  rec.malicious_selected = malicious;
  rec.attack_active = malicious > 0;
  return rec;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kFsl: return "fsl";
    case Algorithm::kSparseFsl: return "sparse_fsl";
    case Algorithm::kFedAvg: return "fedavg";
    case Algorithm::kSignSgd: return "signsgd";
    case Algorithm::kTopK: return "topk";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kFsl, Algorithm::kSparseFsl, Algorithm::kFedAvg, Algorithm::kSignSgd,
                      Algorithm::kTopK}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

bool is_rank_based(Algorithm a) { return a == Algorithm::kFsl || a == Algorithm::kSparseFsl; }

void ExperimentConfig::validate() const {
  if (num_clients == 0) throw ConfigError("num_clients", "must be at least 1");
  if (clients_per_round == 0 || clients_per_round > num_clients) {
    throw ConfigError("clients_per_round", "must lie in [1, num_clients]");
  }
  if (local_epochs == 0) throw ConfigError("local_epochs", "must be at least 1");
  if (!(k > 0.0 && k <= 1.0)) throw ConfigError("k", "must lie in (0, 1]");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ConfigError("sparsity", "must lie in (0, 1]");
  if (eval_every == 0) throw ConfigError("eval_every", "must be at least 1");
  if (!(server_lr > 0.0)) throw ConfigError("server_lr", "must be positive");
  try {
    sgd.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sgd", e.what());
  }
  try {
    baseline_sgd.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("baseline_sgd", e.what());
  }
  try {
    attack.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("attack", e.what());
  }
  try {
    validate_architecture(architecture);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("architecture", e.what());
  }
  if (architecture.back().activation != Activation::kIdentity) {
    throw ConfigError("architecture", "last layer must use the identity activation");
  }
  if (!(data.dirichlet_alpha > 0.0)) throw ConfigError("data.dirichlet_alpha", "must be positive");
  if (data.source == DataSource::kBlobs) {
    if (data.blobs.dims != architecture.front().fan_in) {
      throw ConfigError("data.blobs.dims", "must equal the first layer fan_in");
    }
    if (data.blobs.num_classes != architecture.back().fan_out) {
      throw ConfigError("data.blobs.classes", "must equal the last layer fan_out");
    }
    if (data.blobs.samples_per_class == 0) throw ConfigError("data.blobs.samples_per_class", "must be positive");
    if (!(data.blobs.cluster_std >= 0.0)) throw ConfigError("data.blobs.std", "must be non-negative");
  }

  const bool rank_based = is_rank_based(algorithm);
  const AttackKind kind = attack.kind;
  if (kind == AttackKind::kRankReversal && !rank_based) {
    throw ConfigError("attack.kind", "rank_reversal applies only to fsl and sparse_fsl");
  }
  if ((kind == AttackKind::kScale || kind == AttackKind::kOptPoison) && rank_based) {
    throw ConfigError("attack.kind", "fsl clients can only submit rankings; use rank_reversal");
  }
  if ((algorithm == Algorithm::kSignSgd || algorithm == Algorithm::kTopK) &&
      aggregator != Aggregator::kAverage) {
    throw ConfigError("aggregator", "signsgd and topk support only the average aggregator");
  }
  if (algorithm == Algorithm::kFedAvg) {
    const std::size_t f = assumed_malicious();
    if (aggregator == Aggregator::kTrimmedMean && clients_per_round <= 2 * f) {
      throw ConfigError("robust_f", "trimmed_mean needs clients_per_round > 2f");
    }
    if (aggregator == Aggregator::kMultiKrum && clients_per_round < f + 3) {
      throw ConfigError("robust_f", "multi_krum needs clients_per_round >= f + 3");
    }
  }
}

std::size_t ExperimentConfig::assumed_malicious() const {
  if (robust_f) return *robust_f;
  return static_cast<std::size_t>(
      std::ceil(attack.malicious_fraction * static_cast<double>(clients_per_round) - 1e-9));
}

FslClientParams ExperimentConfig::client_params() const {
  return FslClientParams{seed, architecture, weight_init, k, sgd};
}

ArchSpec ExperimentConfig::arch_spec() const {
  ArchSpec spec{"experiment", {}};
  for (const LayerSpec& l : architecture) spec.layer_param_counts.push_back(l.edges());
  return spec;
}

std::vector<std::size_t> sample_clients(const ExperimentConfig& config, std::size_t round) {
  RngStream rng = derive(widen_seed(config.seed), {kSamplingStreamTag, round});
  std::vector<std::size_t> ids(config.num_clients);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  // Partial Fisher-Yates: the first n slots end up a uniform sample.
  for (std::size_t i = 0; i < config.clients_per_round; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(config.num_clients - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(config.clients_per_round);
  return ids;
}

uint64_t client_stream_seed(const ExperimentConfig& config, std::size_t round, std::size_t client_id) {
  return derive(widen_seed(config.seed), {kClientTrainStreamTag, round, client_id}).next_u64();
}

ServerState initial_state(const ExperimentConfig& config) {
  ServerState state;
  if (is_rank_based(config.algorithm)) {
    Supernetwork net = Supernetwork::from_seed(widen_seed(config.seed), config.architecture, config.weight_init);
    state.ranking = argsort_network(net.all_scores());
  } else {
    state.weights =
        DenseNetwork::from_seed(widen_seed(config.seed), config.architecture, config.baseline_init).flatten();
  }
  return state;
}

std::pair<ServerState, RoundRecord> fsl_round(const ServerState& state, const ClientPool& clients,
                                              const ExperimentConfig& config) {
  check_pool(clients, config);
  std::vector<std::size_t> selected = sample_clients(config, state.round);
  FslSubmissions subs = collect_fsl(state, clients, config, selected);
  ServerState next;
  next.round = state.round + 1;
  next.ranking = vote_network(subs.rankings);
  RoundRecord rec = base_record(state, config, std::move(selected), subs.malicious);
  return {std::move(next), std::move(rec)};
}

std::pair<ServerState, RoundRecord> sparse_fsl_round(const ServerState& state, const ClientPool& clients,
                                                     const ExperimentConfig& config) {
  check_pool(clients, config);
  std::vector<std::size_t> selected = sample_clients(config, state.round);
  FslSubmissions subs = collect_fsl(state, clients, config, selected);
  ServerState next;
  next.round = state.round + 1;
  const std::size_t layers = state.ranking.layers.size();
  std::vector<SparseLayerRanking> column;
  for (std::size_t l = 0; l < layers; ++l) {
    column.clear();
    for (const NetworkRanking& r : subs.rankings) column.push_back(truncate(r.layers.at(l), config.sparsity));
    next.ranking.layers.push_back(sparse_vote(column).ranking);
  }
  RoundRecord rec = base_record(state, config, std::move(selected), subs.malicious);
  return {std::move(next), std::move(rec)};
}

std::vector<double> top_k_sparsify(std::span<const double> delta, const Architecture& arch, double fraction) {
  std::vector<double> out(delta.size(), 0.0);
  std::size_t offset = 0;
  std::vector<std::size_t> order;
  for (const LayerSpec& layer : arch) {
    const std::size_t n = layer.edges();
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(delta[offset + a]) > std::abs(delta[offset + b]);
    });
    const std::size_t keep = kept_count(n, fraction);
    for (std::size_t i = 0; i < keep; ++i) out[offset + order[i]] = delta[offset + order[i]];
    offset += n;
  }
  return out;
}

std::pair<ServerState, RoundRecord> baseline_round(const ServerState& state, const ClientPool& clients,
                                                   const ExperimentConfig& config) {
  check_pool(clients, config);
  std::vector<std::size_t> selected = sample_clients(config, state.round);
  const DenseNetwork global = [&] {
    DenseNetwork net = DenseNetwork::from_seed(widen_seed(config.seed), config.architecture, config.baseline_init);
    net.assign(state.weights);
    return net;
  }();

  std::vector<LocalTask> tasks = make_tasks(config, clients, state.round, selected);
  std::vector<ModelUpdate> updates(selected.size());
  detail::parallel_for(selected.size(), clients.workers, [&](std::size_t i) {
    if (tasks[i].train.empty()) {
      updates[i] = ModelUpdate{std::vector<double>(state.weights.size(), 0.0), tasks[i].client_id};
    } else {
      updates[i] = fedavg_client_update(global, *clients.data, tasks[i], config.local_epochs, config.baseline_sgd);
    }
  });

  std::vector<std::size_t> malicious_pos;
  if (config.attack.kind == AttackKind::kScale || config.attack.kind == AttackKind::kOptPoison) {
    for (std::size_t i = 0; i < selected.size(); ++i) {
      if (config.attack.is_malicious(selected[i], config.num_clients)) malicious_pos.push_back(i);
    }
  }
  if (!malicious_pos.empty()) {
    if (config.attack.kind == AttackKind::kScale) {
      for (std::size_t p : malicious_pos) updates[p] = craft_scale_attack(updates[p], config.attack.scale_factor);
    } else {
      std::vector<ModelUpdate> own;
      for (std::size_t p : malicious_pos) own.push_back(updates[p]);
      const AggregatorSpec agr{config.aggregator, config.assumed_malicious()};
      const ModelUpdate crafted = craft_opt_poison(own, agr, config.attack.omega, config.attack.gamma_init,
                                                   config.attack.gamma_iters, malicious_pos.size())
                                      .update;
      for (std::size_t p : malicious_pos) updates[p] = ModelUpdate{crafted.delta, selected[p]};
    }
  }

  std::vector<float> weights = state.weights;
  switch (config.algorithm) {
    case Algorithm::kFedAvg: {
      const ModelUpdate agg = aggregate(config.aggregator, updates, config.assumed_malicious());
      for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = static_cast<float>(weights[i] + agg.delta[i]);
      }
      break;
    }
    case Algorithm::kSignSgd: {
      // Clients send the sign of their accumulated gradient, i.e. of -delta.
      std::vector<SignUpdate> signs;
      std::vector<double> grad;
      for (const ModelUpdate& u : updates) {
        grad.resize(u.delta.size());
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = -u.delta[i];
        signs.push_back(to_signs(grad));
      }
      const SignUpdate majority = sign_majority(signs);
      for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = static_cast<float>(weights[i] - config.server_lr * majority.signs[i]);
      }
      break;
    }
    case Algorithm::kTopK: {
      for (ModelUpdate& u : updates) u.delta = top_k_sparsify(u.delta, config.architecture, config.sparsity);
      const ModelUpdate agg = average(updates);
      for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = static_cast<float>(weights[i] + agg.delta[i]);
      }
      break;
    }
    default:
      throw std::invalid_argument("baseline_round: not a weight-based algorithm");
  }

  ServerState next;
  next.round = state.round + 1;
  next.weights = std::move(weights);
  RoundRecord rec = base_record(state, config, std::move(selected), malicious_pos.size());
  return {std::move(next), std::move(rec)};
}

std::pair<ServerState, RoundRecord> run_round(const ServerState& state, const ClientPool& clients,
                                              const ExperimentConfig& config) {
  switch (config.algorithm) {
    case Algorithm::kFsl: return fsl_round(state, clients, config);
    case Algorithm::kSparseFsl: return sparse_fsl_round(state, clients, config);
    default: return baseline_round(state, clients, config);
  }
}

AccuracyStats evaluate_global(const ServerState& state, const ClientPool& clients,
                              const ExperimentConfig& config) {
  const std::size_t count = clients.shards->clients.size();
  std::vector<double> acc(count, -1.0);
  if (is_rank_based(config.algorithm)) {
    const Supernetwork net =
        Supernetwork::from_seed(widen_seed(config.seed), config.architecture, config.weight_init);
    std::vector<Matrix> masks;
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
      const Matrix& w = net.weights(l);
      masks.push_back(ranking_mask(state.ranking.layers.at(l), config.k, w.rows(), w.cols()));
    }
    detail::parallel_for(count, clients.workers, [&](std::size_t c) {
      const auto& test = clients.shards->clients[c].test;
      if (!test.empty()) acc[c] = evaluate_masked(net, masks, *clients.data, test);
    });
  } else {
    DenseNetwork net = DenseNetwork::from_seed(widen_seed(config.seed), config.architecture, config.baseline_init);
    net.assign(state.weights);
    detail::parallel_for(count, clients.workers, [&](std::size_t c) {
      const auto& test = clients.shards->clients[c].test;
      if (!test.empty()) acc[c] = net.evaluate(*clients.data, test);
    });
  }
  AccuracyStats stats;
  stats.min = 1.0;
  stats.max = 0.0;
  double sum = 0.0;
  for (double a : acc) {
    if (a < 0.0) continue;
    ++stats.clients;
    sum += a;
    stats.min = std::min(stats.min, a);
    stats.max = std::max(stats.max, a);
  }
  if (stats.clients == 0) return AccuracyStats{};
  stats.mean = sum / static_cast<double>(stats.clients);
  double var = 0.0;
  for (double a : acc) {
    if (a >= 0.0) var += (a - stats.mean) * (a - stats.mean);
  }
  stats.std = std::sqrt(var / static_cast<double>(stats.clients));
  return stats;
}

Federation build_federation(const ExperimentConfig& config) {
  Federation fed;
  const uint64_t seed = widen_seed(config.seed);
  switch (config.data.source) {
    case DataSource::kBlobs: {
      RngStream rng = derive(seed, {kDataStreamTag});
      fed.data = gen_blobs(config.data.blobs, rng);
      break;
    }
    case DataSource::kIdx:
      fed.data = load_idx(config.data.idx_images, config.data.idx_labels);
      break;
    case DataSource::kCsv:
      fed.data = read_dataset_csv(config.data.csv);
      break;
  }
  if (fed.data.dims() != config.architecture.front().fan_in) {
    throw ConfigError("architecture", "first layer fan_in does not match the data width");
  }
  if (fed.data.num_classes > config.architecture.back().fan_out) {
    throw ConfigError("architecture", "last layer has fewer outputs than the data has classes");
  }
  fed.data.num_classes = config.architecture.back().fan_out;
  RngStream part_rng = derive(seed, {kPartitionStreamTag});
  fed.shards = dirichlet_partition(fed.data.labels, config.num_clients, config.data.dirichlet_alpha, part_rng);
  return fed;
}

std::vector<RoundRecord> run_experiment(const ExperimentConfig& config, const Federation& federation,
                                        std::size_t workers, const RecordCallback& on_record) {
  config.validate();
  ClientPool pool{&federation.data, &federation.shards, {}, std::max<std::size_t>(workers, 1)};
  std::vector<RoundRecord> records;
  if (config.rounds == 0) return records;
  ServerState state = initial_state(config);
  for (std::size_t t = 0; t < config.rounds; ++t) {
    auto [next, rec] = run_round(state, pool, config);
    state = std::move(next);
    if (rec.round % config.eval_every == 0 || rec.round == config.rounds) {
      rec.accuracy = evaluate_global(state, pool, config);
      if (on_record) on_record(rec);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::vector<RoundRecord> run_experiment(const ExperimentConfig& config, std::size_t workers,
                                        const RecordCallback& on_record) {
  config.validate();
  const Federation federation = build_federation(config);
  return run_experiment(config, federation, workers, on_record);
}

}  // namespace fslsim
