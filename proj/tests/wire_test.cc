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

#include "fslsim/wire.h"

#include <numeric>

#include "fslsim/rng.h"
#include "gtest/gtest.h"

namespace fslsim {
namespace {

TEST(RankBitWidthTest, CeilLog2) {
  EXPECT_EQ(rank_bit_width(1), 0u);
  EXPECT_EQ(rank_bit_width(2), 1u);
  EXPECT_EQ(rank_bit_width(6), 3u);
  EXPECT_EQ(rank_bit_width(8), 3u);
  EXPECT_EQ(rank_bit_width(9), 4u);
  EXPECT_EQ(rank_bit_width(1605632), 21u);
}

TEST(BitWriterTest, BigEndianPacking) {
  BitWriter w;
  w.put(0b101, 3);
  w.put(0b11111, 5);
  w.put(0b1, 1);
  EXPECT_EQ(w.bit_count(), 9u);
  const std::vector<uint8_t> bytes = std::move(w).finish();
  EXPECT_EQ(bytes, (std::vector<uint8_t>{0b10111111, 0b10000000}));
  BitReader r(bytes);
  EXPECT_EQ(r.get(3), 0b101u);
  EXPECT_EQ(r.get(5), 0b11111u);
  EXPECT_EQ(r.get(1), 1u);
  EXPECT_THROW(r.get(8), WireFormatError);
}

TEST(EncodeLayerTest, WorkedExampleIsEighteenBits) {
  const LayerRanking r{{4, 0, 2, 3, 5, 1}};
  const std::vector<uint8_t> bytes = encode_layer(r);
  EXPECT_EQ(bytes.size(), 3u);
  EXPECT_EQ(encoded_bits(6, 6), 18u);
  // 100 000 010 011 101 001
  EXPECT_EQ(bytes, (std::vector<uint8_t>{0b10000001, 0b00111010, 0b01000000}));
  EXPECT_EQ(decode_layer(bytes, 6), r);
}

TEST(EncodeLayerTest, RandomRoundTrip) {
  RngStream rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(300);
    LayerRanking r;
    r.perm.resize(n);
    std::iota(r.perm.begin(), r.perm.end(), uint32_t{0});
    rng.shuffle(r.perm);
    const auto bytes = encode_layer(r);
    EXPECT_EQ(bytes.size(), (encoded_bits(n, n) + 7) / 8);
    EXPECT_EQ(decode_layer(bytes, n), r);
  }
}

TEST(DecodeLayerTest, RejectsNonPermutationAndTruncation) {
  BitWriter w;
  for (int i = 0; i < 4; ++i) w.put(1, 2);
  const auto dup = std::move(w).finish();
  EXPECT_THROW(decode_layer(dup, 4), std::exception);
  const auto bytes = encode_layer(LayerRanking{{4, 0, 2, 3, 5, 1}});
  EXPECT_THROW(decode_layer(std::span(bytes).first(1), 6), WireFormatError);
}

TEST(SparseWireTest, RoundTrip) {
  const SparseLayerRanking s{{3, 5, 1}, 6};
  const auto bytes = encode_sparse(s);
  EXPECT_EQ(bytes.size(), 2u);
  const SparseLayerRanking back = decode_sparse(bytes, 6, 3);
  EXPECT_EQ(back.top, s.top);
  EXPECT_EQ(back.n, 6u);
}

}  // namespace
}  // namespace fslsim
