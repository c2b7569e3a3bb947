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

#include "fslsim/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>

namespace fslsim {
namespace {

constexpr uint32_t kIdxImageMagic = 0x00000803;
constexpr uint32_t kIdxLabelMagic = 0x00000801;

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxFormatError("cannot open " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

uint32_t read_be32(const std::vector<uint8_t>& bytes, std::size_t offset, const std::string& what) {
  if (offset + 4 > bytes.size()) throw IdxFormatError(what + ": truncated header");
  return (uint32_t{bytes[offset]} << 24) | (uint32_t{bytes[offset + 1]} << 16) |
         (uint32_t{bytes[offset + 2]} << 8) | uint32_t{bytes[offset + 3]};
}

// Largest-remainder apportionment of `total` items by `weights` (sum 1).
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> counts(n);
  std::vector<double> remainder(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double quota = weights[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(quota));
    remainder[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  // Sum of floors never exceeds the total, and the shortfall is below n.
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++counts[order[i % n]];
  return counts;
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != labels.size()) throw std::invalid_argument("dataset: row/label count mismatch");
  for (uint32_t label : labels) {
    if (label >= num_classes) throw std::invalid_argument("dataset: label out of range");
  }
}

Dataset gen_blobs(const BlobSpec& spec, RngStream& rng) {
  if (spec.num_classes == 0 || spec.dims == 0 || spec.samples_per_class == 0) {
    throw std::invalid_argument("gen_blobs: sizes must be positive");
  }
  if (!(spec.cluster_std >= 0.0)) throw std::invalid_argument("gen_blobs: cluster_std must be non-negative");
  std::vector<std::vector<double>> centres(spec.num_classes, std::vector<double>(spec.dims));
  for (auto& c : centres) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& v : c) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
    } while (norm == 0.0);
    for (double& v : c) v = v / norm * spec.separation;
  }
  Dataset ds;
  ds.num_classes = spec.num_classes;
  ds.features = Matrix(spec.num_classes * spec.samples_per_class, spec.dims);
  ds.labels.reserve(spec.num_classes * spec.samples_per_class);
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    for (std::size_t s = 0; s < spec.samples_per_class; ++s, ++row) {
      for (std::size_t j = 0; j < spec.dims; ++j) {
        const double noise = spec.cluster_std > 0.0 ? rng.normal(0.0, spec.cluster_std) : 0.0;
        ds.features(row, j) = static_cast<float>(centres[c][j] + noise);
      }
      ds.labels.push_back(static_cast<uint32_t>(c));
    }
  }
  return ds;
}

ClientShards dirichlet_partition(std::span<const uint32_t> labels, std::size_t num_clients,
                                 double alpha, RngStream& rng) {
  if (num_clients == 0) throw std::invalid_argument("dirichlet_partition: need at least one client");
  if (!(alpha > 0.0)) throw std::invalid_argument("dirichlet_partition: alpha must be positive");
  const uint32_t num_classes =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  ClientShards result;
  std::vector<std::vector<std::size_t>> assigned;
  for (std::size_t attempt = 0;; ++attempt) {
    assigned.assign(num_clients, {});
    for (auto& members : by_class) {
      std::vector<std::size_t> shuffled = members;
      rng.shuffle(shuffled);
      std::vector<double> weights(num_clients);
      double sum = 0.0;
      for (double& w : weights) sum += (w = rng.gamma(alpha));
      if (sum > 0.0) {
        for (double& w : weights) w /= sum;
      } else {
        std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(num_clients));
      }
      std::vector<std::size_t> counts = apportion(shuffled.size(), weights);
      std::size_t offset = 0;
      for (std::size_t c = 0; c < num_clients; ++c) {
        auto& dst = assigned[c];
        dst.insert(dst.end(), shuffled.begin() + static_cast<std::ptrdiff_t>(offset),
                   shuffled.begin() + static_cast<std::ptrdiff_t>(offset + counts[c]));
        offset += counts[c];
      }
    }
    const bool small = std::any_of(assigned.begin(), assigned.end(),
                                   [](const auto& a) { return a.size() < kMinShardSamples; });
    if (!small) break;
    if (attempt == kMaxShardRerolls) {
      result.undersized = true;
      break;
    }
    ++result.rerolls;
  }

  const uint64_t split_seed = rng.next_u64();
  result.clients.resize(num_clients);
  for (std::size_t c = 0; c < num_clients; ++c) {
    std::vector<std::size_t>& mine = assigned[c];
    RngStream split_rng = derive(split_seed, {c});
    split_rng.shuffle(mine);
    const auto train_size =
        static_cast<std::size_t>(std::lround(kTrainFraction * static_cast<double>(mine.size())));
    ClientShard& shard = result.clients[c];
    shard.train.assign(mine.begin(), mine.begin() + static_cast<std::ptrdiff_t>(train_size));
    shard.test.assign(mine.begin() + static_cast<std::ptrdiff_t>(train_size), mine.end());
  }
  return result;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const std::vector<uint8_t> img = read_file(images);
  const std::vector<uint8_t> lab = read_file(labels);
  if (read_be32(img, 0, "images") != kIdxImageMagic) throw IdxFormatError("images: bad magic number");
  if (read_be32(lab, 0, "labels") != kIdxLabelMagic) throw IdxFormatError("labels: bad magic number");
  const uint32_t count = read_be32(img, 4, "images");
  const uint32_t rows = read_be32(img, 8, "images");
  const uint32_t cols = read_be32(img, 12, "images");
  const uint32_t label_count = read_be32(lab, 4, "labels");
  if (count != label_count) {
    throw IdxFormatError("image count " + std::to_string(count) + " does not match label count " +
                         std::to_string(label_count));
  }
  const std::size_t pixels = std::size_t{rows} * cols;
  if (img.size() < 16 + std::size_t{count} * pixels) throw IdxFormatError("images: truncated data");
  if (lab.size() < 8 + std::size_t{count}) throw IdxFormatError("labels: truncated data");

  Dataset ds;
  ds.features = Matrix(count, pixels);
  for (std::size_t i = 0; i < std::size_t{count} * pixels; ++i) {
    ds.features[i] = static_cast<float>(img[16 + i]) / 255.0f;
  }
  ds.labels.assign(lab.begin() + 8, lab.begin() + 8 + count);
  ds.num_classes = ds.labels.empty() ? 0 : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t j = 0; j < ds.dims(); ++j) out << 'f' << j << ',';
  out << "label\n";
  out << std::setprecision(9);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (float v : ds.features.row(r)) out << v << ',';
    out << ds.labels[r] << '\n';
  }
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  const std::size_t dims = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (dims == 0 || line.substr(line.rfind(',') + 1) != "label") {
    throw std::runtime_error(path.string() + ": header must be f0,...,label");
  }
  std::vector<float> values;
  Dataset ds;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (std::size_t j = 0; j < dims; ++j) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error(path.string() + ": short row");
      values.push_back(std::stof(cell));
    }
    if (!std::getline(row, cell)) throw std::runtime_error(path.string() + ": missing label");
    ds.labels.push_back(static_cast<uint32_t>(std::stoul(cell)));
  }
  ds.features = Matrix(ds.labels.size(), dims, std::move(values));
  ds.num_classes = ds.labels.empty() ? 0 : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
  return ds;
}

}  // namespace fslsim
