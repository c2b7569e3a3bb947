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

#include <bit>
#include <string>

namespace fslsim {

unsigned rank_bit_width(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(n - 1));
}

void BitWriter::put(uint64_t value, unsigned width) {
  for (unsigned b = width; b-- > 0;) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if ((value >> b) & 1u) bytes_.back() |= static_cast<uint8_t>(0x80u >> (bits_ % 8));
    ++bits_;
  }
}

std::vector<uint8_t> BitWriter::finish() && { return std::move(bytes_); }

uint64_t BitReader::get(unsigned width) {
  if (pos_ + width > bytes_.size() * 8) throw WireFormatError("ranking payload truncated");
  uint64_t value = 0;
  for (unsigned b = 0; b < width; ++b, ++pos_) {
    value = (value << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
  }
  return value;
}

std::size_t encoded_bits(std::size_t n, std::size_t entries) { return entries * rank_bit_width(n); }

std::vector<uint8_t> encode_layer(const LayerRanking& r) {
  check_permutation(r.perm);
  const unsigned width = rank_bit_width(r.size());
  BitWriter w;
  for (uint32_t e : r.perm) w.put(e, width);
  return std::move(w).finish();
}

LayerRanking decode_layer(std::span<const uint8_t> bytes, std::size_t n) {
  const unsigned width = rank_bit_width(n);
  BitReader reader(bytes);
  LayerRanking r;
  r.perm.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.perm.push_back(static_cast<uint32_t>(width ? reader.get(width) : 0));
  if (!is_permutation(r.perm)) throw WireFormatError("decoded layer is not a permutation");
  return r;
}

std::vector<uint8_t> encode_sparse(const SparseLayerRanking& r) {
  const unsigned width = rank_bit_width(r.n);
  BitWriter w;
  for (uint32_t e : r.top) {
    if (e >= r.n) throw WireFormatError("sparse entry " + std::to_string(e) + " out of range");
    w.put(e, width);
  }
  return std::move(w).finish();
}

SparseLayerRanking decode_sparse(std::span<const uint8_t> bytes, std::size_t n, std::size_t s) {
  if (s > n) throw WireFormatError("sparse length exceeds edge count");
  const unsigned width = rank_bit_width(n);
  BitReader reader(bytes);
  SparseLayerRanking r{{}, n};
  for (std::size_t i = 0; i < s; ++i) {
    const uint64_t e = width ? reader.get(width) : 0;
    if (e >= n) throw WireFormatError("sparse entry out of range");
    r.top.push_back(static_cast<uint32_t>(e));
  }
  return r;
}

}  // namespace fslsim
