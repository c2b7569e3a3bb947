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

#ifndef FSLSIM_WIRE_H_
#define FSLSIM_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fslsim/ranking.h"

namespace fslsim {

class WireFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ceil(log2(n)); 0 for n <= 1.
unsigned rank_bit_width(std::size_t n);

// MSB-first writer of fixed-width unsigned fields.
class BitWriter {
 public:
  void put(uint64_t value, unsigned width);
  std::size_t bit_count() const { return bits_; }
  std::vector<uint8_t> finish() &&;

 private:
  std::vector<uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}
  // Throws WireFormatError past the end of the buffer.
  uint64_t get(unsigned width);

 private:
  std::span<const uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// A full layer ranking is n entries of rank_bit_width(n) bits, big-endian
// and bit-packed; the final byte is zero padded.
std::vector<uint8_t> encode_layer(const LayerRanking& r);
LayerRanking decode_layer(std::span<const uint8_t> bytes, std::size_t n);

// A sparse ranking is s entries of the same width.
std::vector<uint8_t> encode_sparse(const SparseLayerRanking& r);
SparseLayerRanking decode_sparse(std::span<const uint8_t> bytes, std::size_t n, std::size_t s);

// Payload bits before byte padding.
std::size_t encoded_bits(std::size_t n, std::size_t entries);

}  // namespace fslsim

#endif  // FSLSIM_WIRE_H_
