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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "gtest/gtest.h"

namespace fslsim {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("fslsim_data_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_bytes(const fs::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<uint8_t> be32(uint32_t v) {
  return {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 8),
          static_cast<uint8_t>(v)};
}

std::vector<uint8_t> concat(std::initializer_list<std::vector<uint8_t>> parts) {
  std::vector<uint8_t> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

TEST(GenBlobsTest, ZeroStdCollapsesToCentres) {
  RngStream rng(1);
  const Dataset ds = gen_blobs({3, 5, 4, 0.0, 4.0}, rng);
  ASSERT_EQ(ds.size(), 12u);
  EXPECT_EQ(ds.num_classes, 3u);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::size_t first = ds.labels[i] * 4;  // class-major order
    for (std::size_t d = 0; d < 5; ++d) EXPECT_EQ(ds.features(i, d), ds.features(first, d));
  }
  double norm = 0;
  for (std::size_t d = 0; d < 5; ++d) norm += ds.features(0, d) * ds.features(0, d);
  EXPECT_NEAR(std::sqrt(norm), 4.0, 1e-5);
}

TEST(GenBlobsTest, NearestCentroidSeparatesTightClusters) {
  RngStream rng(2);
  const Dataset ds = gen_blobs({2, 6, 200, 0.3, 4.0}, rng);
  std::vector<std::vector<double>> centroid(2, std::vector<double>(6, 0.0));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t d = 0; d < 6; ++d) centroid[ds.labels[i]][d] += ds.features(i, d) / 200.0;
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double dist[2] = {0, 0};
    for (int c = 0; c < 2; ++c) {
      for (std::size_t d = 0; d < 6; ++d) dist[c] += std::pow(ds.features(i, d) - centroid[c][d], 2);
    }
    correct += static_cast<uint32_t>(dist[1] < dist[0]) == ds.labels[i];
  }
  EXPECT_EQ(correct, ds.size());
}

TEST(GenBlobsTest, Deterministic) {
  RngStream a(3), b(3);
  const Dataset x = gen_blobs({}, a);
  const Dataset y = gen_blobs({}, b);
  EXPECT_EQ(x.features, y.features);
  EXPECT_EQ(x.labels, y.labels);
}

TEST(GenBlobsTest, RejectsBadSpec) {
  RngStream rng(1);
  EXPECT_THROW(gen_blobs({0, 2, 2, 1, 4}, rng), std::invalid_argument);
  EXPECT_THROW(gen_blobs({2, 2, 2, -1, 4}, rng), std::invalid_argument);
}

void expect_valid_partition(const ClientShards& shards, std::size_t total) {
  std::set<std::size_t> seen;
  std::size_t count = 0;
  for (const ClientShard& c : shards.clients) {
    EXPECT_EQ(c.train.size(), static_cast<std::size_t>(std::lround(kTrainFraction * c.size())));
    for (const auto* part : {&c.train, &c.test}) {
      for (std::size_t i : *part) {
        EXPECT_LT(i, total);
        seen.insert(i);
        ++count;
      }
    }
  }
  EXPECT_EQ(count, total);
  EXPECT_EQ(seen.size(), total);
}

TEST(DirichletPartitionTest, DisjointCoveringAndSplit) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    RngStream data_rng(seed);
    const Dataset ds = gen_blobs({10, 2, 50, 1, 4}, data_rng);
    RngStream rng(seed + 100);
    const ClientShards shards = dirichlet_partition(ds.labels, 20, 1.0, rng);
    ASSERT_EQ(shards.clients.size(), 20u);
    expect_valid_partition(shards, ds.size());
  }
}

TEST(DirichletPartitionTest, SingleClientGetsEverything) {
  const std::vector<uint32_t> labels{0, 1, 1, 0, 2, 2, 2};
  RngStream rng(1);
  const ClientShards shards = dirichlet_partition(labels, 1, 1.0, rng);
  ASSERT_EQ(shards.clients.size(), 1u);
  EXPECT_EQ(shards.clients[0].size(), labels.size());
  expect_valid_partition(shards, labels.size());
}

TEST(DirichletPartitionTest, LargeAlphaIsNearlyIid) {
  std::vector<uint32_t> labels;
  for (uint32_t c = 0; c < 4; ++c) labels.insert(labels.end(), 500, c);
  RngStream rng(2);
  const ClientShards shards = dirichlet_partition(labels, 2, 1e6, rng);
  for (const ClientShard& client : shards.clients) {
    std::vector<double> hist(4, 0.0);
    for (const auto* part : {&client.train, &client.test}) {
      for (std::size_t i : *part) hist[labels[i]] += 1.0;
    }
    for (double h : hist) EXPECT_NEAR(h / client.size(), 0.25, 0.05 * 0.25);
  }
}

TEST(DirichletPartitionTest, DeterministicAndFlagsUndersizedShards) {
  const std::vector<uint32_t> labels(12, 0);
  RngStream a(5), b(5);
  const ClientShards x = dirichlet_partition(labels, 6, 0.1, a);
  const ClientShards y = dirichlet_partition(labels, 6, 0.1, b);
  ASSERT_EQ(x.clients.size(), y.clients.size());
  for (std::size_t c = 0; c < x.clients.size(); ++c) {
    EXPECT_EQ(x.clients[c].train, y.clients[c].train);
    EXPECT_EQ(x.clients[c].test, y.clients[c].test);
  }
  // Twelve samples can never give six clients five each.
  EXPECT_TRUE(x.undersized);
  EXPECT_EQ(x.rerolls, kMaxShardRerolls);
  expect_valid_partition(x, labels.size());
}

TEST(DirichletPartitionTest, RejectsBadArguments) {
  const std::vector<uint32_t> labels{0, 1};
  RngStream rng(1);
  EXPECT_THROW(dirichlet_partition(labels, 0, 1.0, rng), std::invalid_argument);
  EXPECT_THROW(dirichlet_partition(labels, 2, 0.0, rng), std::invalid_argument);
}

TEST(LoadIdxTest, ParsesHandBuiltPair) {
  TempDir dir;
  write_bytes(dir.file("img"), concat({be32(0x803), be32(2), be32(2), be32(3),
                                       {0, 255, 51, 102, 153, 204, 255, 0, 0, 0, 0, 255}}));
  write_bytes(dir.file("lab"), concat({be32(0x801), be32(2), {7, 3}}));
  const Dataset ds = load_idx(dir.file("img"), dir.file("lab"));
  EXPECT_EQ(ds.features.rows(), 2u);
  EXPECT_EQ(ds.features.cols(), 6u);
  EXPECT_EQ(ds.labels, (std::vector<uint32_t>{7, 3}));
  EXPECT_EQ(ds.num_classes, 8u);
  EXPECT_FLOAT_EQ(ds.features(0, 1), 1.0f);
  EXPECT_FLOAT_EQ(ds.features(0, 2), 0.2f);
  EXPECT_FLOAT_EQ(ds.features(1, 5), 1.0f);
}

TEST(LoadIdxTest, RejectsMalformedFiles) {
  TempDir dir;
  write_bytes(dir.file("img"), concat({be32(0x803), be32(1), be32(1), be32(1), {9}}));
  write_bytes(dir.file("lab"), concat({be32(0x801), be32(1), {0}}));
  write_bytes(dir.file("bad_magic"), concat({be32(0x802), be32(1), {0}}));
  write_bytes(dir.file("empty"), {});
  write_bytes(dir.file("two_labels"), concat({be32(0x801), be32(2), {0, 1}}));
  write_bytes(dir.file("short_img"), concat({be32(0x803), be32(1), be32(2), be32(2), {9}}));
  EXPECT_NO_THROW(load_idx(dir.file("img"), dir.file("lab")));
  EXPECT_THROW(load_idx(dir.file("img"), dir.file("bad_magic")), IdxFormatError);
  EXPECT_THROW(load_idx(dir.file("empty"), dir.file("lab")), IdxFormatError);
  EXPECT_THROW(load_idx(dir.file("img"), dir.file("two_labels")), IdxFormatError);
  EXPECT_THROW(load_idx(dir.file("short_img"), dir.file("lab")), IdxFormatError);
  EXPECT_THROW(load_idx(dir.file("missing"), dir.file("lab")), IdxFormatError);
}

TEST(DatasetCsvTest, RoundTrip) {
  TempDir dir;
  RngStream rng(4);
  const Dataset ds = gen_blobs({3, 4, 5, 1, 4}, rng);
  write_dataset_csv(ds, dir.file("d.csv"));
  std::ifstream in(dir.file("d.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "f0,f1,f2,f3,label");
  const Dataset back = read_dataset_csv(dir.file("d.csv"));
  EXPECT_EQ(back.features, ds.features);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.num_classes, 3u);
}

TEST(DatasetTest, ValidateCatchesBadLabels) {
  Dataset ds{Matrix(2, 1), {0, 3}, 2};
  EXPECT_THROW(ds.validate(), std::invalid_argument);
  ds.labels = {0};
  EXPECT_THROW(ds.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace fslsim
