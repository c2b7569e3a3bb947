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

#ifndef FSLSIM_DATA_H_
#define FSLSIM_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fslsim/matrix.h"
#include "fslsim/rng.h"

namespace fslsim {

// Labelled samples, one row of `features` per sample.
struct Dataset {
  Matrix features;
  std::vector<uint32_t> labels;
  std::size_t num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dims() const { return features.cols(); }
  // Throws std::invalid_argument when rows and labels disagree or a label is
  // out of range.
  void validate() const;
};

struct BlobSpec {
  std::size_t num_classes = 10;
  std::size_t dims = 20;
  std::size_t samples_per_class = 500;
  double cluster_std = 1.0;
  // Norm of every class centre.
  double separation = 4.0;
};

// Isotropic Gaussian clusters around random unit directions. Centres are
// drawn first from `rng`, then the samples in class-major order.
Dataset gen_blobs(const BlobSpec& spec, RngStream& rng);

struct ClientShard {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  std::size_t size() const { return train.size() + test.size(); }
};

struct ClientShards {
  std::vector<ClientShard> clients;
  // Set when some client still had fewer than kMinShardSamples after the
  // maximum number of re-rolls.
  bool undersized = false;
  std::size_t rerolls = 0;
};

inline constexpr std::size_t kMinShardSamples = 5;
inline constexpr std::size_t kMaxShardRerolls = 10;
inline constexpr double kTrainFraction = 0.8;

// Non-iid split: for each class a Dirichlet(alpha) vector over clients sets
// the share of that class each client receives (largest-remainder rounding).
// Each client's samples are then split 80/20 into train and test.
ClientShards dirichlet_partition(std::span<const uint32_t> labels, std::size_t num_clients,
                                 double alpha, RngStream& rng);

class IdxFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads an IDX image file (magic 0x00000803) and label file (0x00000801).
// Pixels are scaled to [0, 1]; num_classes is max(label) + 1.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

// CSV with header f0,...,f{d-1},label.
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace fslsim

#endif  // FSLSIM_DATA_H_
